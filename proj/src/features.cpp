#include "alife/features.hpp"

#include <algorithm>
#include <cmath>

#include "alife/error.hpp"

namespace alife {

namespace {

long cross(PixelPoint o, PixelPoint a, PixelPoint b) {
  return static_cast<long>(a.x - o.x) * (b.y - o.y) - static_cast<long>(a.y - o.y) * (b.x - o.x);
}

bool on_segment(PixelPoint p, PixelPoint a, PixelPoint b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(PixelPoint a, PixelPoint b, PixelPoint c, PixelPoint d) {
  const long d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return (d1 == 0 && on_segment(a, c, d)) || (d2 == 0 && on_segment(b, c, d)) || (d3 == 0 && on_segment(c, a, b)) ||
         (d4 == 0 && on_segment(d, a, b));
}

struct Bounds {
  int x0, y0, x1, y1;
};

Bounds roi_bounds(const Frame& f, const RegionOfInterest& roi) {
  Bounds b{f.width(), f.height(), -1, -1};
  for (const auto& v : roi.polygon) {
    b.x0 = std::min(b.x0, v.x);
    b.y0 = std::min(b.y0, v.y);
    b.x1 = std::max(b.x1, v.x);
    b.y1 = std::max(b.y1, v.y);
  }
  b.x0 = std::max(b.x0, 0);
  b.y0 = std::max(b.y0, 0);
  b.x1 = std::min(b.x1, f.width() - 1);
  b.y1 = std::min(b.y1, f.height() - 1);
  return b;
}

}  // namespace

RegionOfInterest RegionOfInterest::from_pois(const PoiSet& pois) {
  RegionOfInterest roi;
  roi.polygon = {pois.left_corner, pois.upper_center, pois.right_corner, pois.lower_center};
  for (const auto& v : roi.polygon) {
    roi.midpoint.x += v.x / 4.0;
    roi.midpoint.y += v.y / 4.0;
  }
  return roi;
}

bool RegionOfInterest::is_simple() const {
  const auto& p = polygon;
  return !segments_intersect(p[0], p[1], p[2], p[3]) && !segments_intersect(p[1], p[2], p[3], p[0]);
}

bool RegionOfInterest::contains(int x, int y) const {
  bool inside = false;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    const PixelPoint a = polygon[i], b = polygon[j];
    if ((a.y > y) != (b.y > y)) {
      const double x_cross = a.x + static_cast<double>(y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x < x_cross) inside = !inside;
    }
  }
  return inside;
}

void DarkParams::validate() const {
  if (!(alpha_dark > 0.0 && alpha_dark < 1.0)) throw Error("alpha_dark must lie in (0, 1)");
}

Distances distances(const PoiSet& pois) {
  return {std::hypot(pois.right_corner.x - pois.left_corner.x, pois.right_corner.y - pois.left_corner.y),
          std::hypot(pois.lower_center.x - pois.upper_center.x, pois.lower_center.y - pois.upper_center.y)};
}

double dark_threshold(const Frame& f, const RegionOfInterest& roi, const DarkParams& p) {
  p.validate();
  const Bounds b = roi_bounds(f, roi);
  double sum = 0.0;
  long count = 0;
  for (int y = b.y0; y <= b.y1; ++y) {
    for (int x = b.x0; x <= b.x1; ++x) {
      if (!roi.contains(x, y)) continue;
      sum += f.at(x, y);
      ++count;
    }
  }
  if (count == 0) throw Error("empty region of interest");
  return p.alpha_dark * sum / static_cast<double>(count);
}

DarkArea dark_area(const Frame& f, const RegionOfInterest& roi, const DarkParams& p) {
  const double s_dark = dark_threshold(f, roi, p);
  const Bounds b = roi_bounds(f, roi);
  DarkArea out{0.0, 0, s_dark};
  for (int y = b.y0; y <= b.y1; ++y) {
    for (int x = b.x0; x <= b.x1; ++x) {
      if (!roi.contains(x, y) || f.at(x, y) > s_dark) continue;
      out.da += std::hypot(x - roi.midpoint.x, y - roi.midpoint.y);
      ++out.dark_count;
    }
  }
  if (p.aggregation == DarkAggregation::Mean && out.dark_count > 0) out.da /= out.dark_count;
  return out;
}

FrameFeatures frame_features(const Frame& f, const PoiSet& pois, const DarkParams& p) {
  const auto [dh, dv] = distances(pois);
  const DarkArea dark = dark_area(f, RegionOfInterest::from_pois(pois), p);
  return {dh, dv, dark.da, dark.dark_count, dark.s_dark};
}

FeatureTrack extract_track(const std::vector<Frame>& frames, const TrackResult& track, const DarkParams& p,
                           double fps) {
  if (track.frames.size() != frames.size()) throw Error("track does not cover every frame");
  if (!(fps > 0.0)) throw Error("fps must be positive");
  FeatureTrack out;
  out.fps = fps;
  out.frames.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) out.frames.push_back(frame_features(frames[t], track.frames[t], p));
  return out;
}

}  // namespace alife
