#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "alife/bundle.hpp"
#include "alife/classify.hpp"
#include "alife/features.hpp"
#include "alife/normalize.hpp"
#include "alife/snake.hpp"
#include "alife/tracker.hpp"

namespace alife {

/// Seed ellipse for the snake. A negative centre coordinate means "frame centre".
struct SnakeInit {
  double cx = -1.0;
  double cy = -1.0;
  double rx = 45.0;
  double ry = 30.0;
};

enum class TrackMethod { Vote, Ssd, Ncc };
TrackMethod parse_track_method(const std::string& s);

struct PipelineConfig {
  SnakeParams snake;
  SnakeInit init;
  bool presmooth = true;  ///< 3x3 median before the gradient used by the snake
  TrackerParams tracker;
  TrackMethod track_method = TrackMethod::Vote;
  DarkParams dark;
  NormalizationParams normalization;
  ClassifierParams classifier;
  double train_fraction = 0.7;
  std::uint64_t seed = 1;

  void validate() const;
  /// Applies one `key=value` setting; unknown keys throw.
  void set(const std::string& key, const std::string& value);
  static PipelineConfig from_file(const std::filesystem::path& path);
};

struct Localization {
  SnakeContour initial;
  SnakeContour contour;
  PoiSet pois;
};

Localization localize(const Frame& first, const PipelineConfig& cfg);

TrackResult track(const std::vector<Frame>& frames, const PoiSet& seed, const PipelineConfig& cfg);

struct UtteranceAnalysis {
  Localization localization;
  TrackResult track;
  FeatureTrack features;
  NormalizedUtterance normalized;
};

/// Localise, track, extract and normalise one utterance.
UtteranceAnalysis analyze(const std::vector<Frame>& frames, const PipelineConfig& cfg);

/// Templates from the training curves, then the neural units.
ModelBundle train_bundle(std::span<const LabeledUtterance> training, const PipelineConfig& cfg);

}  // namespace alife
