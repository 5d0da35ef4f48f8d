#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "peglab/error.hpp"
#include "peglab/geom.hpp"

using namespace peglab;
using doctest::Approx;

namespace {

// Classical RK4 on the Hamiltonian field of |z - w|^2 / 4 with the standard
// symplectic form on C^2: zdot = i (z - w) / 2, wdot = -i (z - w) / 2.
PointPair integrate_flow(PointPair p, double theta, int steps) {
  auto field = [](PointPair q) {
    const Complex d = q.z - q.w;
    return PointPair{Complex(0, 0.5) * d, Complex(0, -0.5) * d};
  };
  auto add = [](PointPair a, PointPair b, double h) { return PointPair{a.z + h * b.z, a.w + h * b.w}; };
  const double h = theta / steps;
  for (int i = 0; i < steps; ++i) {
    const auto k1 = field(p);
    const auto k2 = field(add(p, k1, h / 2));
    const auto k3 = field(add(p, k2, h / 2));
    const auto k4 = field(add(p, k3, h));
    p.z += h / 6 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    p.w += h / 6 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
  }
  return p;
}

double dist(PointPair a, PointPair b) { return std::max(std::abs(a.z - b.z), std::abs(a.w - b.w)); }

std::vector<Complex> circle_polygon(int n, int turns = 1, Complex c = 0.0) {
  std::vector<Complex> pts;
  for (int j = 0; j < n * turns; ++j) pts.push_back(c + std::polar(1.0, kTwoPi * j / n));
  return pts;
}

}  // namespace

TEST_CASE("rot_theta examples") {
  const PointPair p{{0.3, -0.2}, {1.1, 0.7}};
  CHECK(dist(rot_theta(p, 0.0), p) < 1e-15);
  const auto swapped = rot_theta(p, kPi);
  CHECK(std::abs(swapped.z - p.w) < 1e-15);
  CHECK(std::abs(swapped.w - p.z) < 1e-15);
  const auto q = rot_theta({1.0, -1.0}, kPi / 2);
  CHECK(dist(q, {Complex(0, 1), Complex(0, -1)}) < 1e-15);
}

TEST_CASE("rot_theta is the time-theta flow of the Hamiltonian") {
  const PointPair starts[] = {{1.0, -1.0}, {{0.3, -0.2}, {1.1, 0.7}}, {{-2.0, 0.5}, {0.25, 0.25}}};
  for (const auto& p : starts) {
    for (double th : {kPi / 2, 0.37, 2.9}) {
      CHECK(dist(rot_theta(p, th), integrate_flow(p, th, 2000)) < 1e-11);
    }
  }
}

TEST_CASE("diff_projection") {
  CHECK(diff_projection({1.0, 1.0}) == Complex(0, 0));
  CHECK(diff_projection({1.0, -1.0}) == Complex(2, 0));
  for (double th : {0.1, 1.0, 2.5}) {
    CHECK(std::abs(diff_projection(rot_theta({1.0, -1.0}, th)) - 2.0 * std::polar(1.0, th)) < 1e-15);
  }
}

TEST_CASE("flow composition, level sets and midpoint") {
  const PointPair p{{0.4, 1.3}, {-0.7, 0.2}};
  for (double a : {0.2, 1.1, -0.6}) {
    for (double b : {0.5, 2.2}) {
      CHECK(dist(rot_theta(rot_theta(p, a), b), rot_theta(p, a + b)) < 1e-12);
      const auto q = rot_theta(p, a);
      CHECK(std::abs(diff_projection(q)) == Approx(std::abs(diff_projection(p))).epsilon(1e-15));
      CHECK(std::abs((q.z + q.w) / 2.0 - (p.z + p.w) / 2.0) < 1e-15);
    }
  }
}

TEST_CASE("winding number examples") {
  const SampledLoop circle(circle_polygon(256));
  CHECK(winding_number(circle, 0.0) == 1);
  CHECK(winding_number(circle, {3.0, 0.0}) == 0);
  CHECK(winding_number(SampledLoop(circle_polygon(256, 2)), 0.0) == 2);
  try {
    winding_number(circle, 1.0);
    FAIL("expected CenterOnLoop");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CenterOnLoop);
  }
}

TEST_CASE("winding number is invariant under rotation and negates under reversal") {
  auto pts = circle_polygon(97, 3, {0.2, -0.1});
  const int w = winding_number(SampledLoop(pts), 0.0);
  CHECK(w == 3);
  for (int shift : {1, 17, 150}) {
    auto r = pts;
    std::rotate(r.begin(), r.begin() + shift, r.end());
    CHECK(winding_number(SampledLoop(r), 0.0) == w);
  }
  std::reverse(pts.begin(), pts.end());
  CHECK(winding_number(SampledLoop(pts), 0.0) == -w);
}

TEST_CASE("signed area examples") {
  std::vector<Complex> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(signed_area(SampledLoop(sq)) == Approx(1.0));
  std::reverse(sq.begin(), sq.end());
  CHECK(signed_area(SampledLoop(sq)) == Approx(-1.0));
  const double a = signed_area(SampledLoop(circle_polygon(4096)));
  CHECK(std::abs(a - kPi) < 1e-5);
  // Translation does not change the area.
  CHECK(signed_area(SampledLoop(circle_polygon(4096, 1, {1e3, -2e3}))) == Approx(a).epsilon(1e-9));
}

TEST_CASE("sampled loop validation") {
  CHECK_THROWS_AS(SampledLoop({0.0, 1.0}), Error);
  CHECK_THROWS_AS(SampledLoop({0.0, 1.0, 1.0, 2.0}), Error);
  CHECK_THROWS_AS(SampledLoop({0.0, 1.0, Complex(0, 1), 0.0}), Error);
  const std::vector<Complex> path{0.0, 1.0, 1.0, Complex(1, 1), 0.0};
  CHECK(SampledLoop::from_path(path).size() == 3);
}

TEST_CASE("angle helpers") {
  CHECK(wrap_angle(-0.5) == Approx(kTwoPi - 0.5));
  CHECK(wrap_angle(7.0) == Approx(7.0 - kTwoPi));
  CHECK(wrap_angle(kTwoPi) == 0.0);
  CHECK(circular_distance(0.1, kTwoPi - 0.1) == Approx(0.2));
  CHECK(circular_distance(0.0, kPi) == Approx(kPi));
}

TEST_CASE("point sets and segments") {
  const std::vector<Complex> a{0.0, 1.0}, b{0.0, Complex(1, 0.5)};
  CHECK(hausdorff_distance(a, b) == Approx(0.5));
  const auto loop = circle_polygon(64);
  CHECK(point_in_loop(loop, {0.1, 0.2}));
  CHECK_FALSE(point_in_loop(loop, {1.5, 0.0}));
  CHECK(segments_intersect(0.0, Complex(1, 1), Complex(0, 1), Complex(1, 0)));
  CHECK_FALSE(segments_intersect(0.0, 1.0, Complex(0, 1), Complex(1, 1)));
  CHECK(segments_intersect(0.0, 1.0, 1.0, Complex(1, 1)));
}
