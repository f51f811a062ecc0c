#include "alife/imaging.hpp"

#include <algorithm>
#include <array>

#include "alife/error.hpp"

namespace alife {

namespace {

void check_range(float v) {
  if (!(v >= 0.0f && v <= 255.0f)) {
    throw Error("luminance out of range [0, 255]: " + std::to_string(v));
  }
}

}  // namespace

Frame::Frame(int width, int height, float fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw Error("frame dimensions must be positive");
  check_range(fill);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

Frame::Frame(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width <= 0 || height <= 0) throw Error("frame dimensions must be positive");
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error("frame data length does not match width x height");
  }
  for (float v : data_) check_range(v);
}

float Frame::at_clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

void Frame::set(int x, int y, float v) {
  check_range(v);
  data_[static_cast<std::size_t>(y) * width_ + x] = v;
}

GradientMap gradient_map(const Frame& f) {
  const int w = f.width();
  const int h = f.height();
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto p = [&](int dx, int dy) { return static_cast<double>(f.at_clamped(x + dx, y + dy)); };
      const double gx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
      const double gy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
      out[static_cast<std::size_t>(y) * w + x] = gx * gx + gy * gy;
    }
  }
  return GradientMap(w, h, std::move(out));
}

Block extract_block(const Frame& f, PixelPoint center, int w) {
  if (w % 2 == 0) throw Error("block size must be odd");
  if (w < 3) throw Error("block size must be at least 3");
  if (w > std::min(f.width(), f.height())) throw Error("block size exceeds frame dimensions");

  const int half = w / 2;
  Block b;
  b.size = w;
  b.anchor.x = std::clamp(center.x - half, 0, f.width() - w);
  b.anchor.y = std::clamp(center.y - half, 0, f.height() - w);
  b.clamped = b.anchor.x != center.x - half || b.anchor.y != center.y - half;
  b.pixels.reserve(static_cast<std::size_t>(w) * w);
  for (int dy = 0; dy < w; ++dy) {
    for (int dx = 0; dx < w; ++dx) b.pixels.push_back(f.at(b.anchor.x + dx, b.anchor.y + dy));
  }
  return b;
}

void write_block(Frame& f, const Block& b) {
  for (int dy = 0; dy < b.size; ++dy) {
    for (int dx = 0; dx < b.size; ++dx) {
      f.set(b.anchor.x + dx, b.anchor.y + dy, b.pixels[static_cast<std::size_t>(dy) * b.size + dx]);
    }
  }
}

Frame median3(const Frame& f) {
  std::vector<float> out(f.pixels().size());
  std::array<float, 9> window{};
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      int k = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) window[k++] = f.at_clamped(x + dx, y + dy);
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      out[static_cast<std::size_t>(y) * f.width() + x] = window[4];
    }
  }
  return Frame(f.width(), f.height(), std::move(out));
}

Frame offset_luminance(const Frame& f, float offset) {
  std::vector<float> out(f.pixels().begin(), f.pixels().end());
  for (float& v : out) v = std::clamp(v + offset, 0.0f, 255.0f);
  return Frame(f.width(), f.height(), std::move(out));
}

}  // namespace alife
