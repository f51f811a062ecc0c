#pragma once

#include <optional>
#include <array>
#include <vector>

#include "alife/imaging.hpp"

namespace alife {

struct SnakeParams {
  int n = 40;
  double a = 1.0;       ///< weight of |V'|
  double b = 1.0;       ///< weight of |V''|
  double c_cont = 0.5;  ///< weight of the pull toward the ring centroid
  int neighborhood = 2;
  int max_iterations = 200;

  void validate() const;
};

struct SnakeContour {
  std::vector<PixelPoint> vertices;
  double total_energy = 0.0;
  int sweeps = 0;  ///< sweeps performed by minimize (0 for a seed contour)
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct PoiSet {
  PixelPoint left_corner;
  PixelPoint right_corner;
  PixelPoint upper_center;
  PixelPoint lower_center;
  std::optional<std::array<PixelPoint, 3>> cupid_bow;

  /// Ordering invariants: left.x < right.x and upper.y < lower.y.
  bool valid() const {
    return left_corner.x < right_corner.x && upper_center.y < lower_center.y;
  }
  std::array<PixelPoint, 4> points() const { return {left_corner, right_corner, upper_center, lower_center}; }
  void set(std::size_t index, PixelPoint p);

  static constexpr std::array<const char*, 4> kNames = {"left_corner", "right_corner", "upper_center",
                                                        "lower_center"};

  friend bool operator==(const PoiSet&, const PoiSet&) = default;
};

double internal_energy(PixelPoint prev, PixelPoint v, PixelPoint next, const SnakeParams& p);
double constraint_energy(PixelPoint v, Point2 g);
Point2 centroid(const std::vector<PixelPoint>& ring);

/// Raw ring energy: sum over vertices of E_int + (-|grad I|^2) + c_cont * E_cont,
/// with the centroid taken from the ring itself.
double total_energy(const GradientMap& grad, const std::vector<PixelPoint>& ring, const SnakeParams& p);

/// n vertices sampled at equal angles on an ellipse, rounded to pixels and
/// clamped into a width x height frame.
SnakeContour ellipse_contour(double cx, double cy, double rx, double ry, int n, int width, int height);

/// Greedy window descent. Each sweep visits the vertices in ring order and
/// moves each one to the window position of least local energy. In the
/// window, the first-derivative term measures the deviation of the distance
/// to the previous vertex from the mean spacing, the shape terms are divided
/// by their window maximum, the image term is min-max normalised over the
/// window, and the centroid pull is damped by the relative edge strength. The centroid is refreshed at the start of each
/// sweep. The reported total_energy is the plain sum of internal_energy,
/// -|grad|^2 and c_cont * constraint_energy over the ring.
SnakeContour minimize(const Frame& f, const SnakeContour& initial, const SnakeParams& p);
SnakeContour minimize(const GradientMap& grad, const SnakeContour& initial, const SnakeParams& p);

/// Windowed local energy of placing vertex `i` at `candidate`, using the
/// same normalisation as minimize.
struct WindowScan {
  PixelPoint best;
  double best_energy;
  double current_energy;
};
WindowScan scan_window(const GradientMap& grad, const std::vector<PixelPoint>& ring, std::size_t i, Point2 g,
                       const SnakeParams& p);

/// Number of vertices that could still strictly lower their windowed energy
/// by a single move (0 for a converged contour).
int local_optimality_violations(const GradientMap& grad, const SnakeContour& s, const SnakeParams& p);

PoiSet extract_pois(const SnakeContour& s);

}  // namespace alife
