#include "alife/normalize.hpp"

#include <algorithm>
#include <cmath>

#include "alife/error.hpp"

namespace alife {

const char* feature_name(FeatureId id) {
  switch (id) {
    case FeatureId::DH: return "DH";
    case FeatureId::DV: return "DV";
    case FeatureId::DA: return "DA";
  }
  return "?";
}

FeatureId parse_feature(const std::string& name) {
  if (name == "DH") return FeatureId::DH;
  if (name == "DV") return FeatureId::DV;
  if (name == "DA") return FeatureId::DA;
  throw Error("unknown feature id: " + name);
}

void NormalizationParams::validate() const {
  if (omega < 2) throw Error("omega must be >= 2");
  if (!(trim_epsilon > 0.0)) throw Error("trim_epsilon must be positive");
}

int derive_omega(double capture_rate, double duration) {
  if (!(capture_rate > 0.0) || !(duration > 0.0)) throw Error("capture rate and duration must be positive");
  return std::max(2, static_cast<int>(std::lround(capture_rate * duration)));
}

std::vector<double> feature_series(const FeatureTrack& track, FeatureId id) {
  std::vector<double> out;
  out.reserve(track.frames.size());
  for (const auto& f : track.frames) {
    out.push_back(id == FeatureId::DH ? f.dh : id == FeatureId::DV ? f.dv : f.da);
  }
  return out;
}

TrimRange trim(const FeatureTrack& track, const NormalizationParams& p) {
  p.validate();
  const std::size_t n = track.frames.size();
  if (n < 3) throw Error("track too short to trim (need >= 3 frames)");

  std::array<std::vector<double>, 3> series;
  for (auto id : kFeatures) series[static_cast<int>(id)] = feature_series(track, id);
  auto active = [&](std::size_t t) {
    for (const auto& s : series) {
      if (std::abs(s[t] - s[t - 1]) / std::max(std::abs(s[t - 1]), 1.0) >= p.trim_epsilon) return true;
    }
    return false;
  };

  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(p.omega), n);
  TrimRange r;
  std::size_t first_active = 0, last_active = 0;
  for (std::size_t t = 1; t < n; ++t) {
    if (!active(t)) continue;
    if (first_active == 0) first_active = t;
    last_active = t;
  }
  if (first_active == 0) {
    r.speech_detected = false;
    r.first = (n - keep) / 2;
    r.last = r.first + keep - 1;
    return r;
  }
  // Keep the resting frame the movement starts from.
  r.first = first_active - 1;
  r.last = last_active;
  bool grow_head = true;
  while (r.size() < keep) {
    const bool can_head = r.first > 0;
    const bool can_tail = r.last + 1 < n;
    if (grow_head ? can_head : !can_tail) {
      --r.first;
    } else {
      ++r.last;
    }
    grow_head = !grow_head;
  }
  return r;
}

std::vector<double> resample(std::span<const double> values, int omega) {
  if (values.size() < 2) throw Error("resample needs at least 2 values");
  if (omega < 2) throw Error("omega must be >= 2");
  const std::size_t last = values.size() - 1;
  std::vector<double> out(static_cast<std::size_t>(omega));
  for (int k = 0; k < omega; ++k) {
    const double s = static_cast<double>(k) * static_cast<double>(last) / (omega - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(s), last);
    const double frac = s - static_cast<double>(i);
    out[k] = frac == 0.0 ? values[i] : values[i] + frac * (values[i + 1] - values[i]);
  }
  return out;
}

NormalizedUtterance normalize_range(const FeatureTrack& track, TrimRange range, int omega) {
  if (range.last >= track.frames.size() || range.first > range.last) throw Error("retained range out of bounds");
  if (range.size() < 2) throw Error("retained range needs at least 2 frames");
  NormalizedUtterance out;
  out.retained = range;
  for (auto id : kFeatures) {
    const auto all = feature_series(track, id);
    const std::span<const double> kept(all.data() + range.first, range.size());
    NormalizedFeatureVector v{id, resample(kept, omega), 1.0};
    if (id == FeatureId::DA) {
      const double peak = *std::max_element(v.values.begin(), v.values.end());
      if (peak > 0.0) v.scale_basis = peak;
    } else {
      if (v.values.front() == 0.0) throw Error("degenerate mouth geometry: zero initial distance");
      v.scale_basis = v.values.front();
    }
    for (double& x : v.values) x /= v.scale_basis;
    out.curves[static_cast<int>(id)] = std::move(v);
  }
  return out;
}

NormalizedUtterance normalize_track(const FeatureTrack& track, const NormalizationParams& p) {
  return normalize_range(track, trim(track, p), p.omega);
}

}  // namespace alife
