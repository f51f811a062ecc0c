#include "alife/snake.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "alife/error.hpp"

namespace alife {

void SnakeParams::validate() const {
  if (n < 8) throw Error("snake vertex count must be >= 8");
  if (a < 0 || b < 0 || c_cont < 0) throw Error("snake weights must be non-negative");
  if (neighborhood < 1) throw Error("snake neighborhood must be >= 1");
  if (max_iterations < 1) throw Error("snake max_iterations must be >= 1");
}

void PoiSet::set(std::size_t index, PixelPoint p) {
  switch (index) {
    case 0: left_corner = p; break;
    case 1: right_corner = p; break;
    case 2: upper_center = p; break;
    case 3: lower_center = p; break;
    default: throw Error("POI index out of range");
  }
}

double internal_energy(PixelPoint prev, PixelPoint v, PixelPoint next, const SnakeParams& p) {
  const double first = std::hypot(next.x - v.x, next.y - v.y);
  const double second = std::hypot(prev.x - 2.0 * v.x + next.x, prev.y - 2.0 * v.y + next.y);
  return p.a * first + p.b * second;
}

double constraint_energy(PixelPoint v, Point2 g) { return std::hypot(v.x - g.x, v.y - g.y); }

Point2 centroid(const std::vector<PixelPoint>& ring) {
  Point2 g;
  for (const auto& v : ring) {
    g.x += v.x;
    g.y += v.y;
  }
  g.x /= static_cast<double>(ring.size());
  g.y /= static_cast<double>(ring.size());
  return g;
}

namespace {

struct Terms {
  std::vector<double> internal, external, constraint;
};

std::size_t prev_index(std::size_t i, std::size_t n) { return (i + n - 1) % n; }
std::size_t next_index(std::size_t i, std::size_t n) { return (i + 1) % n; }

double sum_terms(const Terms& t, double c_cont) {
  double total = 0.0;
  for (std::size_t i = 0; i < t.internal.size(); ++i) {
    total += t.internal[i] + t.external[i] + c_cont * t.constraint[i];
  }
  return total;
}

Terms compute_terms(const GradientMap& grad, const std::vector<PixelPoint>& ring, Point2 g, const SnakeParams& p) {
  const std::size_t n = ring.size();
  Terms t{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    t.internal[i] = internal_energy(ring[prev_index(i, n)], ring[i], ring[next_index(i, n)], p);
    t.external[i] = -grad.at(ring[i]);
    t.constraint[i] = constraint_energy(ring[i], g);
  }
  return t;
}

void check_ring(const std::vector<PixelPoint>& ring, const GradientMap& grad) {
  if (ring.size() < 3) throw Error("snake contour needs at least 3 vertices");
  const bool coincident =
      std::all_of(ring.begin(), ring.end(), [&](const PixelPoint& v) { return v == ring.front(); });
  if (coincident) throw Error("degenerate initial contour: all vertices coincide");
  for (const auto& v : ring) {
    if (v.x < 0 || v.y < 0 || v.x >= grad.width() || v.y >= grad.height()) {
      throw Error("snake vertex outside the frame");
    }
  }
}

}  // namespace

double total_energy(const GradientMap& grad, const std::vector<PixelPoint>& ring, const SnakeParams& p) {
  return sum_terms(compute_terms(grad, ring, centroid(ring), p), p.c_cont);
}

SnakeContour ellipse_contour(double cx, double cy, double rx, double ry, int n, int width, int height) {
  if (n < 3) throw Error("contour needs at least 3 vertices");
  SnakeContour s;
  s.vertices.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n;
    const int x = static_cast<int>(std::lround(cx + rx * std::cos(theta)));
    const int y = static_cast<int>(std::lround(cy + ry * std::sin(theta)));
    s.vertices.push_back({std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1)});
  }
  return s;
}

WindowScan scan_window(const GradientMap& grad, const std::vector<PixelPoint>& ring, std::size_t i, Point2 g,
                       const SnakeParams& p) {
  const std::size_t n = ring.size();
  const PixelPoint prev = ring[prev_index(i, n)];
  const PixelPoint next = ring[next_index(i, n)];
  const PixelPoint cur = ring[i];
  double spacing = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    spacing += std::hypot(ring[next_index(k, n)].x - ring[k].x, ring[next_index(k, n)].y - ring[k].y);
  }
  spacing /= static_cast<double>(n);
  const double gmax = grad.max_value();

  struct Candidate {
    PixelPoint pos;
    double cont, curv, external, constraint, gate;
  };
  std::vector<Candidate> window;
  window.reserve(static_cast<std::size_t>((2 * p.neighborhood + 1) * (2 * p.neighborhood + 1)));
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo[4] = {inf, inf, inf, inf}, hi[4] = {-inf, -inf, -inf, -inf};
  for (int dy = -p.neighborhood; dy <= p.neighborhood; ++dy) {
    for (int dx = -p.neighborhood; dx <= p.neighborhood; ++dx) {
      const PixelPoint q{cur.x + dx, cur.y + dy};
      if (q.x < 0 || q.y < 0 || q.x >= grad.width() || q.y >= grad.height()) continue;
      const double gq = grad.at(q);
      // The centroid pull fades out on strong edges so that it only drives
      // the contour through weak-gradient zones.
      const double gate = gmax > 0.0 ? 1.0 - std::sqrt(gq / gmax) : 1.0;
      Candidate c{q, std::abs(spacing - std::hypot(q.x - prev.x, q.y - prev.y)),
                  std::hypot(prev.x - 2.0 * q.x + next.x, prev.y - 2.0 * q.y + next.y), -gq, constraint_energy(q, g), gate};
      const double t[4] = {c.cont, c.curv, c.external, c.constraint};
      for (int k = 0; k < 4; ++k) {
        lo[k] = std::min(lo[k], t[k]);
        hi[k] = std::max(hi[k], t[k]);
      }
      window.push_back(c);
    }
  }
  // Shape terms are scaled by their window maximum, so near-equal candidates
  // stay near-equal; the image term is stretched over its window range.
  auto normalise = [&](double v, int k) {
    if (k == 2) return hi[k] > lo[k] ? (v - lo[k]) / (hi[k] - lo[k]) : 0.0;
    return hi[k] > 0.0 ? v / hi[k] : 0.0;
  };

  WindowScan scan{cur, inf, inf};
  for (const auto& c : window) {
    const double e = p.a * normalise(c.cont, 0) + p.b * normalise(c.curv, 1) + normalise(c.external, 2) +
                     p.c_cont * c.gate * normalise(c.constraint, 3);
    if (c.pos == cur) scan.current_energy = e;
    if (e < scan.best_energy) {
      scan.best_energy = e;
      scan.best = c.pos;
    }
  }
  // Staying put wins ties.
  if (scan.current_energy <= scan.best_energy) {
    scan.best = cur;
    scan.best_energy = scan.current_energy;
  }
  return scan;
}

SnakeContour minimize(const Frame& f, const SnakeContour& initial, const SnakeParams& p) {
  return minimize(gradient_map(f), initial, p);
}

SnakeContour minimize(const GradientMap& grad, const SnakeContour& initial, const SnakeParams& p) {
  p.validate();
  check_ring(initial.vertices, grad);

  std::vector<PixelPoint> ring = initial.vertices;
  const std::size_t n = ring.size();
  Terms terms = compute_terms(grad, ring, centroid(ring), p);

  auto refresh_constraint = [&](Point2 g) {
    for (std::size_t i = 0; i < n; ++i) terms.constraint[i] = constraint_energy(ring[i], g);
  };

  int sweeps = 0;
  while (sweeps < p.max_iterations) {
    ++sweeps;
    const Point2 g = centroid(ring);
    refresh_constraint(g);
    int moved = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const WindowScan scan = scan_window(grad, ring, i, g, p);
      if (scan.best == ring[i]) continue;
      ring[i] = scan.best;
      ++moved;
      for (std::size_t j : {prev_index(i, n), i, next_index(i, n)}) {
        terms.internal[j] = internal_energy(ring[prev_index(j, n)], ring[j], ring[next_index(j, n)], p);
      }
      terms.external[i] = -grad.at(ring[i]);
      terms.constraint[i] = constraint_energy(ring[i], g);
    }
    if (moved == 0) break;
  }
  refresh_constraint(centroid(ring));

  SnakeContour out;
  out.vertices = std::move(ring);
  out.total_energy = sum_terms(terms, p.c_cont);
  out.sweeps = sweeps;
  return out;
}

int local_optimality_violations(const GradientMap& grad, const SnakeContour& s, const SnakeParams& p) {
  const Point2 g = centroid(s.vertices);
  int violations = 0;
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    const WindowScan scan = scan_window(grad, s.vertices, i, g, p);
    if (scan.best_energy < scan.current_energy) ++violations;
  }
  return violations;
}

namespace {

// Among tied indices, the one sitting in the middle of the tie when ordered
// by the secondary coordinate.
std::size_t median_of(std::vector<std::size_t> idx, const std::vector<PixelPoint>& v, bool by_x) {
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const int ka = by_x ? v[a].x : v[a].y;
    const int kb = by_x ? v[b].x : v[b].y;
    return ka != kb ? ka < kb : a < b;
  });
  return idx[(idx.size() - 1) / 2];
}

}  // namespace

PoiSet extract_pois(const SnakeContour& s) {
  const auto& v = s.vertices;
  const std::size_t n = v.size();
  if (n < 8) throw Error("POI extraction needs at least 8 vertices");

  auto [xmin_it, xmax_it] = std::minmax_element(v.begin(), v.end(), [](auto& a, auto& b) { return a.x < b.x; });
  auto [ymin_it, ymax_it] = std::minmax_element(v.begin(), v.end(), [](auto& a, auto& b) { return a.y < b.y; });
  const int xmin = xmin_it->x, xmax = xmax_it->x, ymin = ymin_it->y, ymax = ymax_it->y;
  if (xmin == xmax || ymin == ymax) throw Error("degenerate contour");

  auto where = [&](auto pred) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (pred(v[i])) idx.push_back(i);
    }
    return idx;
  };
  PoiSet poi;
  poi.left_corner = v[median_of(where([&](auto& q) { return q.x == xmin; }), v, false)];
  poi.right_corner = v[median_of(where([&](auto& q) { return q.x == xmax; }), v, false)];
  poi.lower_center = v[median_of(where([&](auto& q) { return q.y == ymax; }), v, true)];
  const std::size_t top = median_of(where([&](auto& q) { return q.y == ymin; }), v, true);
  poi.upper_center = v[top];

  // Cupid's bow: a second upper peak within n/8 ring steps of the topmost
  // vertex, separated from it by a strictly lower dip.
  const int reach = std::max<int>(1, static_cast<int>(n / 8));
  auto at = [&](long k) -> std::size_t { return static_cast<std::size_t>(((k % static_cast<long>(n)) + n) % n); };
  std::optional<std::size_t> peak, dip;
  int peak_d = 0;
  for (int d = -reach; d <= reach; ++d) {
    if (d == 0) continue;
    const std::size_t j = at(static_cast<long>(top) + d);
    if (v[j].y > v[at(static_cast<long>(j) - 1)].y || v[j].y > v[at(static_cast<long>(j) + 1)].y) continue;
    const int step = d > 0 ? 1 : -1;
    std::size_t deepest = top;
    for (int k = step; k != d; k += step) {
      const std::size_t q = at(static_cast<long>(top) + k);
      if (v[q].y > v[deepest].y) deepest = q;
    }
    if (v[deepest].y <= std::max(v[top].y, v[j].y)) continue;
    if (!peak || v[j].y < v[*peak].y || (v[j].y == v[*peak].y && std::abs(d) < std::abs(peak_d))) {
      peak = j;
      dip = deepest;
      peak_d = d;
    }
  }
  if (peak) {
    PixelPoint a = v[top], b = v[*peak];
    if (b.x < a.x) std::swap(a, b);
    poi.cupid_bow = std::array<PixelPoint, 3>{a, v[*dip], b};
    poi.upper_center = v[*dip];
  }
  if (!poi.valid()) throw Error("degenerate contour");
  return poi;
}

}  // namespace alife
