#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "alife/imaging.hpp"
#include "alife/snake.hpp"
#include "alife/templates.hpp"

namespace alife {

/// Resting mouth shape. Outer contour = upper and lower half-ellipses that
/// share the corner line; the dark interior is a crisp pair of half-ellipses
/// of half-width `inner_ratio * half_span`.
struct MouthGeometry {
  double cx = 80.0;
  double cy = 60.0;
  double half_span = 28.0;
  double upper_thickness = 7.0;
  double lower_thickness = 9.0;
  double open_up = 0.0;
  double open_low = 0.0;
  double inner_ratio = 0.7;
};

/// Linear ramp from the resting shape (frame `start`) to the articulated
/// shape (frame `end`), held constant outside the span.
struct ArticulationProfile {
  int start = 7;
  int end = 24;
  double d_half_span = 0.0;
  double d_open_up = 0.0;
  double d_open_low = 0.0;
  double d_inner_ratio = 0.0;

  static ArticulationProfile canonical(VisemeClass cls);
};

struct NoiseSpec {
  double impulse_fraction = 0.0;   ///< salt-and-pepper fraction in [0, 0.5]
  double drift_amplitude = 0.0;    ///< slow sinusoidal global luminance drift
  double drift_period = 40.0;      ///< frames
  double alternate_offset = 0.0;   ///< added to every second frame (1, 3, 5, ...)
};

struct SyntheticUtteranceSpec {
  VisemeClass cls = VisemeClass::BA;
  int frames = 35;
  double fps = 25.0;
  int width = 160;
  int height = 120;
  MouthGeometry mouth;
  ArticulationProfile articulation = ArticulationProfile::canonical(VisemeClass::BA);
  NoiseSpec noise;
  float skin = 190.0f;
  float lip = 120.0f;
  float interior = 10.0f;
  std::uint64_t rng_seed = 1;

  void validate() const;
  static SyntheticUtteranceSpec canonical(VisemeClass cls);
};

/// Integer outer-contour geometry of one rendered frame.
struct MouthPose {
  int left = 0, right = 0, mid_y = 0, top = 0, bottom = 0;
  double open_up = 0.0, open_low = 0.0, inner_half_width = 0.0;

  double center_x() const { return 0.5 * (left + right); }
  /// Pixel centre strictly inside the dark interior.
  bool in_interior(double x, double y) const;
  PoiSet pois() const;
};

struct GroundTruth {
  VisemeClass cls = VisemeClass::BA;
  std::vector<MouthPose> poses;
  std::vector<PoiSet> pois;
  std::vector<std::vector<std::uint8_t>> dark_masks;  ///< 1 = interior pixel
  int active_start = 0;
  int active_end = 0;
};

/// Articulated pose at frame t, before rendering.
MouthPose mouth_pose(const SyntheticUtteranceSpec& spec, int t);

struct SyntheticUtterance {
  std::vector<Frame> frames;
  GroundTruth truth;
};

SyntheticUtterance synthesize(const SyntheticUtteranceSpec& spec);

/// A randomised speaker for class `cls`: mouth size, position, articulation
/// amplitude and timing are jittered around the canonical profile.
SyntheticUtteranceSpec speaker_variant(VisemeClass cls, std::uint64_t seed, const NoiseSpec& noise);

/// Pure translation of a random smooth texture. `offsets[t]` is the
/// cumulative displacement of frame t relative to frame 0.
struct TranslationSequence {
  std::vector<Frame> frames;
  std::vector<PixelPoint> offsets;
};
TranslationSequence synthesize_translation(int width, int height, const std::vector<PixelPoint>& steps,
                                           double impulse_fraction, std::uint64_t seed);

// --- dataset manifests --------------------------------------------------------

struct ManifestEntry {
  VisemeClass cls;
  std::filesystem::path path;
};

/// Lines `label,path`; relative paths resolve against the manifest folder.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

/// Frames as PGM files plus `truth.csv` (frame,poi_name,x,y,dark_count).
void write_utterance(const SyntheticUtterance& u, const std::filesystem::path& dir);

// --- evaluation ---------------------------------------------------------------

struct EvaluationReport {
  std::vector<VisemeClass> classes;
  std::vector<std::vector<int>> confusion;  ///< rows true class, columns predicted
  std::vector<int> train_counts;
  std::vector<int> test_counts;

  double class_rate(std::size_t j) const;
  double overall_rate() const;
  std::string to_text() const;
  std::string to_csv() const;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Per-class deterministic split: a seeded shuffle, then the first
/// round(n * train_fraction) indices train.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
Split stratified_split(const std::vector<VisemeClass>& labels, double train_fraction, std::uint64_t seed);

}  // namespace alife
