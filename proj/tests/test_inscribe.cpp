#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "peglab/error.hpp"
#include "peglab/fixtures.hpp"
#include "peglab/inscribe.hpp"
#include "support.hpp"

using namespace peglab;
using doctest::Approx;

namespace {

void check_rectangle_invariants(const JordanCurve& c, const InscribedRectangle& r) {
  CHECK(r.residual <= 1e-10);
  CHECK(residual_norm(c, r.theta, r.params) <= 1e-10);
  const Complex z = c.eval(r.params[0]), w = c.eval(r.params[1]);
  const Complex z2 = c.eval(r.params[2]), w2 = c.eval(r.params[3]);
  CHECK(std::abs(r.z() - z) < 1e-12);
  CHECK(std::abs(r.w() - w) < 1e-12);
  CHECK(std::abs(std::abs(z - w) - std::abs(z2 - w2)) <= 1e-10);
  CHECK(std::abs((z + w) - (z2 + w2)) / 2.0 <= 1e-10);
  CHECK(r.rad == Approx(std::abs(z - w) / 2.0).epsilon(1e-12));
  // Diagonals meet at theta: (z - w) = e^{i theta} (z' - w').
  const Complex ratio = (z - w) / (z2 - w2);
  CHECK(std::abs(ratio - std::polar(1.0, r.theta)) < 1e-9);
}

bool vertex_sets_match(const std::vector<InscribedRectangle>& a, const std::vector<Complex>& mapped_b, double tol) {
  // mapped_b holds 4 vertices per rectangle; match each rectangle of a as a
  // set of 4 points to some rectangle of b.
  const std::size_t nb = mapped_b.size() / 4;
  std::vector<bool> used(nb, false);
  for (const auto& r : a) {
    bool found = false;
    for (std::size_t j = 0; j < nb && !found; ++j) {
      if (used[j]) continue;
      bool all = true;
      for (const Complex v : r.vertices) {
        bool hit = false;
        for (std::size_t k = 0; k < 4; ++k) hit = hit || std::abs(v - mapped_b[4 * j + k]) <= tol;
        all = all && hit;
      }
      if (all) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rectangle residual examples") {
  const auto circle = fixtures::unit_circle();
  // Antipodal pairs a quarter turn apart. Under R_theta(z', w') = (z, w) the
  // pair at pi/2 is reached from the pair at 0 by rotating backwards, so the
  // quadruple solves the system at -pi/2 and, relabelled, at pi/2.
  const Quad q{0.0, kPi, kPi / 2, 3 * kPi / 2};
  for (double r : rectangle_residual(circle, -kPi / 2, q)) CHECK(std::abs(r) < 1e-15);
  for (double r : rectangle_residual(circle, kPi / 2, {0.0, kPi, 3 * kPi / 2, kPi / 2})) CHECK(std::abs(r) < 1e-15);
  CHECK(residual_norm(circle, kPi / 2, q) == Approx(2.0));
  // Oracle: direct evaluation through rot_theta.
  const auto b = test::blob();
  const Quad g{0.3, 2.9, 1.7, 4.4};
  const auto res = rectangle_residual(b, 1.1, g);
  const auto p = rot_theta({b.eval(g[2]), b.eval(g[3])}, 1.1);
  const Complex dz = p.z - b.eval(g[0]), dw = p.w - b.eval(g[1]);
  CHECK(res[0] == Approx(dz.real()));
  CHECK(res[1] == Approx(dz.imag()));
  CHECK(res[2] == Approx(dw.real()));
  CHECK(res[3] == Approx(dw.imag()));
  CHECK(residual_norm(b, 1.1, g) > 1e-3);
  const Quad shifted{g[0] + kTwoPi, g[1] - kTwoPi, g[2] + 2 * kTwoPi, g[3]};
  const auto res2 = rectangle_residual(b, 1.1, shifted);
  for (int i = 0; i < 4; ++i) CHECK(res2[i] == Approx(res[i]).epsilon(1e-12));
}

TEST_CASE("generator symmetries") {
  const Quad q{0.1, 2.0, 3.0, 4.0};
  CHECK(swap_generator(q) == Quad{2.0, 0.1, 4.0, 3.0});
  CHECK(partner_generator(q) == Quad{3.0, 4.0, 2.0, 0.1});
  CHECK(generator_distance(q, swap_generator(q)) == 0.0);
  CHECK(quad_distance(q, {0.1 + kTwoPi, 2.0, 3.0, 4.0}) < 1e-12);
  const auto c = canonical_generator({5.0, 1.0, -1.0, 0.5});
  CHECK(c[0] < c[1]);
  for (double x : c) CHECK((x >= 0.0 && x < kTwoPi));
}

TEST_CASE("ellipse (2,1) square at pi/2") {
  const auto e = fixtures::ellipse21();
  const auto rects = find_rectangles(e, kPi / 2);
  REQUIRE(rects.size() == 1);
  const auto& r = rects.front();
  check_rectangle_invariants(e, r);
  // x^2/4 + y^2 = 1 with |x| = |y| gives x^2 = 4/5.
  const double u = 2.0 / std::sqrt(5.0);
  CHECK(r.rad == Approx(2.0 * std::sqrt(2.0) / std::sqrt(5.0)).epsilon(1e-10));
  for (const Complex v : r.vertices) {
    CHECK(std::abs(std::abs(v.real()) - u) < 1e-8);
    CHECK(std::abs(std::abs(v.imag()) - u) < 1e-8);
  }
  CHECK_FALSE(r.degenerate);
  // With the partner flag the other diagonal appears as its own generator.
  const auto both = find_rectangles(e, kPi / 2, 64, 1e-10, {.include_partner = true});
  CHECK(both.size() == 2);
}

TEST_CASE("ellipse rectangles at generic theta come in one geometric pair") {
  const auto e = fixtures::ellipse21();
  for (double th : {kPi / 4, 1.0, 3 * kPi / 4}) {
    const auto rects = find_rectangles(e, th);
    CAPTURE(th);
    CHECK(rects.size() == 2);
    for (const auto& r : rects) {
      check_rectangle_invariants(e, r);
      CHECK(std::abs(r.center) < 1e-9);
    }
  }
}

TEST_CASE("circle family") {
  const auto circle = fixtures::unit_circle();
  for (double th : {0.3, kPi / 2, 2.4}) {
    const auto rects = find_rectangles(circle, th);
    CAPTURE(th);
    CHECK(rects.size() >= 8);
    for (const auto& r : rects) {
      CHECK(r.rad == Approx(1.0).epsilon(1e-8));
      CHECK(std::abs(r.center) < 1e-8);
      CHECK(r.degenerate);
      check_rectangle_invariants(circle, r);
    }
    FindOptions all;
    all.thin_families = false;
    CHECK(find_rectangles(circle, th, 64, 1e-10, all).size() >= rects.size());
  }
}

TEST_CASE("find_rectangles preconditions") {
  const auto e = fixtures::ellipse21();
  CHECK_THROWS_AS(find_rectangles(e, 0.0), Error);
  CHECK_THROWS_AS(find_rectangles(e, kPi), Error);
  CHECK_THROWS_AS(find_rectangles(e, 1.0, 16), Error);
}

TEST_CASE("every rectangle on the fixtures passes its invariants and the width bound") {
  for (const auto& c : {fixtures::ellipse21(), fixtures::smoothed_square(), test::blob()}) {
    CAPTURE(c.name());
    const double width = estimate_width(c, 16);
    for (double th : {0.5, kPi / 2, 2.5}) {
      for (const auto& r : find_rectangles(c, th)) {
        check_rectangle_invariants(c, r);
        CHECK(2.0 * r.rad >= width - 1e-6);
        CHECK(r.params[0] < r.params[1]);
      }
    }
  }
}

TEST_CASE("equivariance under rigid motions and phase shifts") {
  const auto c = test::blob();
  const Complex a = std::polar(1.0, 0.9), b{0.4, -0.3};
  const auto moved = c.transformed(a, b);
  const auto shifted = c.reparametrized(0.77);
  for (double th : {0.8, kPi / 2, 2.2}) {
    const auto base = find_rectangles(c, th);
    REQUIRE_FALSE(base.empty());
    std::vector<Complex> mapped, same;
    for (const auto& r : base) {
      for (const Complex v : r.vertices) {
        mapped.push_back(a * v + b);
        same.push_back(v);
      }
    }
    const auto m = find_rectangles(moved, th);
    CHECK(m.size() == base.size());
    CHECK(vertex_sets_match(m, mapped, 1e-8));
    const auto s = find_rectangles(shifted, th);
    CHECK(s.size() == base.size());
    CHECK(vertex_sets_match(s, same, 1e-8));
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto c = fixtures::smoothed_square();
  setenv("PEGLAB_THREADS", "1", 1);
  const auto one = find_rectangles(c, 1.0);
  setenv("PEGLAB_THREADS", "3", 1);
  const auto three = find_rectangles(c, 1.0);
  unsetenv("PEGLAB_THREADS");
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].params == three[i].params);
}

TEST_CASE("ellipse binormals") {
  const auto e = fixtures::ellipse21();
  const auto bs = find_binormals(e);
  REQUIRE(bs.size() == 4);
  std::map<int, int> by_index;
  std::vector<double> chords;
  for (const auto& b : bs) {
    ++by_index[b.morse_index];
    chords.push_back(b.chord_length);
    CHECK_FALSE(b.degenerate);
    const Complex zs = e.eval(b.params[0]), zt = e.eval(b.params[1]);
    const Complex chord = zs - zt;
    CHECK(std::abs((std::conj(e.derivative(b.params[0])) * chord).real()) <= 1e-10);
    CHECK(std::abs((std::conj(e.derivative(b.params[1])) * chord).real()) <= 1e-10);
    CHECK(b.chord_length == Approx(std::abs(chord)).epsilon(1e-12));
    if (b.morse_index == 2) CHECK(b.chord_length == Approx(4.0).epsilon(1e-10));
    if (b.morse_index == 1) CHECK(b.chord_length == Approx(2.0).epsilon(1e-10));
  }
  CHECK(by_index[2] == 2);
  CHECK(by_index[1] == 2);
  CHECK(by_index[0] == 0);
  // Ordered pairs come in swapped couples.
  for (const auto& b : bs) {
    const bool partner = std::any_of(bs.begin(), bs.end(), [&](const Binormal& o) {
      return circular_distance(o.params[0], b.params[1]) < 1e-8 && circular_distance(o.params[1], b.params[0]) < 1e-8;
    });
    CHECK(partner);
  }
}

TEST_CASE("circle binormals are all degenerate antipodal pairs") {
  const auto bs = find_binormals(fixtures::unit_circle());
  REQUIRE(bs.size() >= 8);
  for (const auto& b : bs) {
    CHECK(b.degenerate);
    CHECK(b.chord_length == Approx(2.0).epsilon(1e-10));
    CHECK(circular_distance(b.params[0], b.params[1]) == Approx(kPi).epsilon(1e-8));
  }
}

TEST_CASE("estimate_width") {
  CHECK(estimate_width(fixtures::unit_circle(), 16) == Approx(2.0).epsilon(1e-8));
  const double we = estimate_width(fixtures::ellipse21(), 16);
  CHECK(we <= 2.0 + 1e-3);
  CHECK(we >= 2.0 - 1e-8);
  const auto c = test::blob();
  const double w1 = estimate_width(c, 16);
  CHECK(estimate_width(c.transformed(2.5, 0.0), 16) == Approx(2.5 * w1).epsilon(1e-6));
  CHECK_THROWS_AS(estimate_width(c, 8), Error);
}
