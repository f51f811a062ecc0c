#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace alife {

struct PixelPoint {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const PixelPoint&, const PixelPoint&) = default;
};

/// Single-channel luminance raster, row-major, values in [0, 255].
///
/// Values are stored as float so that synthetic frames can carry exact
/// non-integer luminances; everything loaded from disk is integer-valued.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, float fill = 0.0f);
  Frame(int width, int height, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  bool contains(PixelPoint p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

  float at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  float at(PixelPoint p) const { return at(p.x, p.y); }
  /// Replicated-edge access: coordinates are clamped into the frame.
  float at_clamped(int x, int y) const;

  /// Writes a value, which must lie in [0, 255].
  void set(int x, int y, float v);

  std::span<const float> pixels() const { return data_; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Per-pixel squared magnitude of the Sobel gradient.
class GradientMap {
 public:
  GradientMap(int width, int height, std::vector<double> magnitude_sq)
      : width_(width), height_(height), magnitude_sq_(std::move(magnitude_sq)) {
    for (double v : magnitude_sq_) max_ = std::max(max_, v);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int x, int y) const { return magnitude_sq_[static_cast<std::size_t>(y) * width_ + x]; }
  double at(PixelPoint p) const { return at(p.x, p.y); }
  std::span<const double> values() const { return magnitude_sq_; }
  double max_value() const { return max_; }

 private:
  int width_;
  int height_;
  std::vector<double> magnitude_sq_;
  double max_ = 0.0;
};

/// A w x w copy of frame pixels. `clamped` records that the requested centre
/// had to be moved to keep the block inside the frame.
struct Block {
  PixelPoint anchor;
  int size = 0;
  std::vector<float> pixels;
  bool clamped = false;

  PixelPoint center() const { return {anchor.x + size / 2, anchor.y + size / 2}; }
};

GradientMap gradient_map(const Frame& f);

Block extract_block(const Frame& f, PixelPoint center, int w);

/// Copies the block back into the frame at its anchor.
void write_block(Frame& f, const Block& b);

/// 3x3 median filter with replicated borders.
Frame median3(const Frame& f);

/// Adds a constant offset, clipping to [0, 255].
Frame offset_luminance(const Frame& f, float offset);

// --- sequence and frame I/O -------------------------------------------------

Frame load_frame(const std::filesystem::path& path);
void save_pgm(const Frame& f, const std::filesystem::path& path);
void save_png(const Frame& f, const std::filesystem::path& path);

struct Rgb {
  std::uint8_t r, g, b;
};
/// Writes the frame as an RGB PNG with coloured crosses drawn at the markers.
void save_annotated_png(const Frame& f, std::span<const PixelPoint> markers, Rgb colour,
                        const std::filesystem::path& path);

/// Frame file paths of a sequence, in temporal order. `path` is either a
/// directory (all .pgm/.png files, lexicographic order) or a manifest with
/// one frame path per line (relative paths resolve against the manifest).
std::vector<std::filesystem::path> list_sequence(const std::filesystem::path& path);

std::vector<Frame> load_sequence(const std::filesystem::path& path);

}  // namespace alife
