#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "alife/error.hpp"
#include "alife/snake.hpp"
#include "helpers.hpp"

using namespace alife;

namespace {

double centroid_distance_sum(const std::vector<PixelPoint>& ring) {
  double gx = 0, gy = 0;
  for (auto v : ring) gx += v.x, gy += v.y;
  gx /= ring.size();
  gy /= ring.size();
  double s = 0;
  for (auto v : ring) s += std::hypot(v.x - gx, v.y - gy);
  return s;
}

}  // namespace

TEST_CASE("internal energy examples") {
  SnakeParams p;
  CHECK(internal_energy({0, 0}, {3, 0}, {6, 0}, p) == doctest::Approx(3.0));
  p.b = 0;
  CHECK(internal_energy({0, 0}, {1, 0}, {2, 0}, p) == doctest::Approx(1.0));
  p.a = 0;
  p.b = 1;
  CHECK(internal_energy({0, 0}, {1, 1}, {2, 0}, p) == doctest::Approx(2.0));
}

TEST_CASE("internal energy is invariant to translation and quarter turns") {
  SnakeParams p;
  p.a = 0.7;
  p.b = 1.3;
  for (int trial = 0; trial < 200; ++trial) {
    PixelPoint q[3];
    for (auto& v : q) v = {testutil::rand_int(-50, 50), testutil::rand_int(-50, 50)};
    const double e = internal_energy(q[0], q[1], q[2], p);
    const int tx = testutil::rand_int(-20, 20), ty = testutil::rand_int(-20, 20);
    auto shift = [&](PixelPoint v) { return PixelPoint{v.x + tx, v.y + ty}; };
    auto turn = [](PixelPoint v) { return PixelPoint{-v.y, v.x}; };
    CHECK(internal_energy(shift(q[0]), shift(q[1]), shift(q[2]), p) == doctest::Approx(e).epsilon(1e-12));
    CHECK(internal_energy(turn(q[0]), turn(q[1]), turn(q[2]), p) == doctest::Approx(e).epsilon(1e-12));
  }
}

TEST_CASE("constraint energy and centroid") {
  CHECK(constraint_energy({4, 4}, {4, 4}) == 0.0);
  CHECK(constraint_energy({3, 4}, {0, 0}) == doctest::Approx(5.0));
  std::vector<PixelPoint> ring;
  for (int k = 0; k < 37; ++k) ring.push_back({testutil::rand_int(0, 200), testutil::rand_int(0, 200)});
  double sx = 0, sy = 0;
  for (auto v : ring) sx += v.x, sy += v.y;
  const Point2 g = centroid(ring);
  CHECK(g.x == doctest::Approx(sx / 37).epsilon(1e-12));
  CHECK(g.y == doctest::Approx(sy / 37).epsilon(1e-12));
  for (auto v : ring) CHECK(constraint_energy(v, g) == doctest::Approx(std::hypot(v.x - sx / 37, v.y - sy / 37)));
}

TEST_CASE("ellipse seed is clamped into the frame") {
  const SnakeContour s = ellipse_contour(5, 5, 30, 30, 16, 40, 40);
  REQUIRE(s.vertices.size() == 16);
  for (auto v : s.vertices) CHECK((v.x >= 0 && v.y >= 0 && v.x < 40 && v.y < 40));
  CHECK(s.sweeps == 0);
}

TEST_CASE("snake converges onto a bright elliptical ring") {
  const double cx = 80, cy = 60, ax = 30, ay = 12.5;
  const Frame f = testutil::ring_frame(160, 120, cx, cy, ax, ay);
  SnakeParams p;
  const SnakeContour init = ellipse_contour(cx, cy, ax + 10, ax + 10, p.n, 160, 120);
  const SnakeContour s = minimize(f, init, p);
  CHECK(s.sweeps <= p.max_iterations);
  CHECK(testutil::hausdorff_to_ellipse(s.vertices, cx, cy, ax, ay) <= 2.0);
  const GradientMap g = gradient_map(f);
  CHECK(local_optimality_violations(g, s, p) == 0);
  CHECK(s.total_energy == doctest::Approx(total_energy(g, s.vertices, p)).epsilon(1e-12));
}

TEST_CASE("flat frame with no pull is a fixed point after one sweep") {
  const Frame f(64, 64, 128.0f);
  SnakeParams p;
  p.a = p.b = p.c_cont = 0.0;
  const SnakeContour init = ellipse_contour(32, 32, 20, 14, 24, 64, 64);
  const SnakeContour s = minimize(f, init, p);
  CHECK(s.sweeps == 1);
  CHECK(s.vertices == init.vertices);
  CHECK(local_optimality_violations(gradient_map(f), s, p) == 0);
}

TEST_CASE("centroid pull shrinks the ring on a flat frame") {
  const Frame f(120, 120, 100.0f);
  const GradientMap g = gradient_map(f);
  SnakeParams p;
  p.c_cont = 1.0;
  SnakeContour s = ellipse_contour(60, 60, 40, 30, p.n, 120, 120);
  p.max_iterations = 1;
  double before = centroid_distance_sum(s.vertices);
  int sweeps = 0;
  for (; sweeps < 200; ++sweeps) {
    const bool collapsed = std::all_of(s.vertices.begin(), s.vertices.end(),
                                       [&](PixelPoint v) { return v == s.vertices.front(); });
    if (collapsed) break;
    const SnakeContour next = minimize(g, s, p);
    if (next.vertices == s.vertices) break;
    const double after = centroid_distance_sum(next.vertices);
    REQUIRE(after < before);
    before = after;
    s = next;
  }
  CHECK(sweeps > 5);
  CHECK(sweeps < 200);
}

TEST_CASE("reported total energy is the raw ring sum") {
  SnakeParams p;
  const Frame f = testutil::random_frame(60, 50);
  const GradientMap g = gradient_map(f);
  const SnakeContour s = minimize(g, ellipse_contour(30, 25, 18, 12, p.n, 60, 50), p);
  double oracle = 0;
  const Point2 c = centroid(s.vertices);
  const std::size_t n = s.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = s.vertices;
    oracle += internal_energy(v[(i + n - 1) % n], v[i], v[(i + 1) % n], p) - g.at(v[i]) +
              p.c_cont * constraint_energy(v[i], c);
  }
  CHECK(s.total_energy == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("minimize rejects bad rings") {
  const Frame f(40, 40, 10.0f);
  SnakeParams p;
  SnakeContour same;
  same.vertices.assign(12, PixelPoint{5, 5});
  CHECK_THROWS_WITH_AS(minimize(f, same, p), doctest::Contains("degenerate"), Error);
  SnakeContour outside = ellipse_contour(20, 20, 10, 10, 12, 40, 40);
  outside.vertices[3] = {41, 3};
  CHECK_THROWS_AS(minimize(f, outside, p), Error);
  p.n = 4;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("POIs of an ellipse sit at its extremes") {
  const double cx = 80, cy = 60, ax = 30, ay = 12;
  const SnakeContour s = ellipse_contour(cx, cy, ax, ay, 40, 160, 120);
  const double spacing = 2 * M_PI * std::sqrt((ax * ax + ay * ay) / 2) / 40;
  const PoiSet poi = extract_pois(s);
  auto near = [&](PixelPoint p, double x, double y) { return std::hypot(p.x - x, p.y - y) <= spacing; };
  CHECK(near(poi.left_corner, cx - ax, cy));
  CHECK(near(poi.right_corner, cx + ax, cy));
  CHECK(near(poi.upper_center, cx, cy - ay));
  CHECK(near(poi.lower_center, cx, cy + ay));
  CHECK(poi.valid());
  CHECK_FALSE(poi.cupid_bow.has_value());
}

TEST_CASE("M-shaped top yields a Cupid's bow with the centre at the dip") {
  const double cx = 80, cy = 60;
  SnakeContour s;
  for (int k = 0; k < 40; ++k) {
    const double t = 2 * M_PI * k / 40;
    const double dx = 30 * std::cos(t);
    double dy = 12 * std::sin(t);
    if (dy < 0) dy *= 1 - 0.4 * std::exp(-dx * dx / 40);
    s.vertices.push_back({static_cast<int>(std::lround(cx + dx)), static_cast<int>(std::lround(cy + dy))});
  }
  const PoiSet poi = extract_pois(s);
  REQUIRE(poi.cupid_bow.has_value());
  const auto& bow = *poi.cupid_bow;
  CHECK(bow[0].x < bow[1].x);
  CHECK(bow[1].x < bow[2].x);
  CHECK(bow[1].y > bow[0].y);
  CHECK(bow[1].y > bow[2].y);
  CHECK(poi.upper_center == bow[1]);
  CHECK(poi.upper_center == s.vertices[30]);
}

TEST_CASE("collinear contour is degenerate") {
  SnakeContour s;
  for (int k = 0; k < 12; ++k) s.vertices.push_back({k, 7});
  CHECK_THROWS_WITH_AS(extract_pois(s), "degenerate contour", Error);
}
