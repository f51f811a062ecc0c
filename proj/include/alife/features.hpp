#pragma once

#include <array>
#include <vector>

#include "alife/imaging.hpp"
#include "alife/snake.hpp"
#include "alife/tracker.hpp"

namespace alife {

/// Quadrilateral bounded by the four POIs, in the order left corner,
/// upper centre, right corner, lower centre.
struct RegionOfInterest {
  std::array<PixelPoint, 4> polygon;
  Point2 midpoint;

  static RegionOfInterest from_pois(const PoiSet& pois);
  bool is_simple() const;
  /// Even-odd rule, pixel centres at integer coordinates.
  bool contains(int x, int y) const;
};

enum class DarkAggregation { Sum, Mean };

struct DarkParams {
  double alpha_dark = 0.3;
  DarkAggregation aggregation = DarkAggregation::Sum;

  void validate() const;
  friend bool operator==(const DarkParams&, const DarkParams&) = default;
};

struct FrameFeatures {
  double dh = 0.0;
  double dv = 0.0;
  double da = 0.0;
  int dark_count = 0;
  double s_dark = 0.0;

  friend bool operator==(const FrameFeatures&, const FrameFeatures&) = default;
};

struct FeatureTrack {
  std::vector<FrameFeatures> frames;
  double fps = 25.0;
};

struct Distances {
  double dh;
  double dv;
};

Distances distances(const PoiSet& pois);

double dark_threshold(const Frame& f, const RegionOfInterest& roi, const DarkParams& p);

struct DarkArea {
  double da;
  int dark_count;
  double s_dark;
};
DarkArea dark_area(const Frame& f, const RegionOfInterest& roi, const DarkParams& p);

FrameFeatures frame_features(const Frame& f, const PoiSet& pois, const DarkParams& p);

FeatureTrack extract_track(const std::vector<Frame>& frames, const TrackResult& track, const DarkParams& p,
                           double fps);

}  // namespace alife
