#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "alife/imaging.hpp"
#include "alife/snake.hpp"

namespace testutil {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260514);
  return gen;
}

inline int rand_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }
inline double rand_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline alife::Frame random_frame(int w, int h, float lo = 0.0f, float hi = 255.0f) {
  std::vector<float> px(static_cast<std::size_t>(w) * h);
  for (auto& v : px) v = static_cast<float>(std::round(rand_real(lo, hi)));
  return alife::Frame(w, h, std::move(px));
}

/// Bright ring of half-thickness 1 px around an axis-aligned ellipse.
inline alife::Frame ring_frame(int w, int h, double cx, double cy, double ax, double ay) {
  std::vector<float> px(static_cast<std::size_t>(w) * h, 40.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double best = 1e9;
      for (int k = 0; k < 720; ++k) {
        const double t = 2.0 * M_PI * k / 720;
        best = std::min(best, std::hypot(x - cx - ax * std::cos(t), y - cy - ay * std::sin(t)));
      }
      if (best <= 1.0) px[static_cast<std::size_t>(y) * w + x] = 220.0f;
    }
  }
  return alife::Frame(w, h, std::move(px));
}

/// Symmetric Hausdorff distance between a closed polygon and an ellipse,
/// both sampled densely.
inline double hausdorff_to_ellipse(const std::vector<alife::PixelPoint>& ring, double cx, double cy, double ax,
                                   double ay) {
  auto to_ellipse = [&](double x, double y) {
    double best = 1e9;
    for (int k = 0; k < 3600; ++k) {
      const double t = 2.0 * M_PI * k / 3600;
      best = std::min(best, std::hypot(x - cx - ax * std::cos(t), y - cy - ay * std::sin(t)));
    }
    return best;
  };
  auto to_polygon = [&](double x, double y) {
    double best = 1e9;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto a = ring[i], b = ring[(i + 1) % ring.size()];
      const double dx = b.x - a.x, dy = b.y - a.y, len = dx * dx + dy * dy;
      const double u = len > 0 ? std::clamp(((x - a.x) * dx + (y - a.y) * dy) / len, 0.0, 1.0) : 0.0;
      best = std::min(best, std::hypot(x - a.x - u * dx, y - a.y - u * dy));
    }
    return best;
  };
  double h = 0.0;
  for (const auto& v : ring) h = std::max(h, to_ellipse(v.x, v.y));
  for (int k = 0; k < 720; ++k) {
    const double t = 2.0 * M_PI * k / 720;
    h = std::max(h, to_polygon(cx + ax * std::cos(t), cy + ay * std::sin(t)));
  }
  return h;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("alife_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace testutil
