#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "alife/features.hpp"

namespace alife {

enum class FeatureId { DH = 0, DV = 1, DA = 2 };
inline constexpr std::array<FeatureId, 3> kFeatures = {FeatureId::DH, FeatureId::DV, FeatureId::DA};
const char* feature_name(FeatureId id);
FeatureId parse_feature(const std::string& name);

struct NormalizationParams {
  int omega = 10;
  double trim_epsilon = 0.02;
  double syllable_duration = 0.4;  ///< seconds
  double capture_rate = 25.0;      ///< frames per second

  void validate() const;
  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

int derive_omega(double capture_rate, double duration);

/// Retained frames [first, last], inclusive, 0-based.
struct TrimRange {
  std::size_t first = 0;
  std::size_t last = 0;
  bool speech_detected = true;

  std::size_t size() const { return last - first + 1; }
  friend bool operator==(const TrimRange&, const TrimRange&) = default;
};

TrimRange trim(const FeatureTrack& track, const NormalizationParams& p);

std::vector<double> resample(std::span<const double> values, int omega);

struct NormalizedFeatureVector {
  FeatureId feature = FeatureId::DH;
  std::vector<double> values;
  double scale_basis = 1.0;

  friend bool operator==(const NormalizedFeatureVector&, const NormalizedFeatureVector&) = default;
};

/// The three normalised curves of one utterance.
struct NormalizedUtterance {
  std::array<NormalizedFeatureVector, 3> curves;
  TrimRange retained;

  const NormalizedFeatureVector& operator[](FeatureId id) const { return curves[static_cast<int>(id)]; }
  int omega() const { return static_cast<int>(curves[0].values.size()); }
};

std::vector<double> feature_series(const FeatureTrack& track, FeatureId id);

/// Resample and rescale the frames in `range`, without trimming.
NormalizedUtterance normalize_range(const FeatureTrack& track, TrimRange range, int omega);

NormalizedUtterance normalize_track(const FeatureTrack& track, const NormalizationParams& p);

}  // namespace alife
