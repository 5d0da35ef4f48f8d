#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "peglab/error.hpp"
#include "peglab/fixtures.hpp"
#include "peglab/sweep.hpp"
#include "support.hpp"

using namespace peglab;
using doctest::Approx;

namespace {

void check_diagram_samples(const JordanCurve& c, const SpectrumDiagram& d) {
  const double step = d.theta_grid[1] - d.theta_grid[0];
  for (const auto& b : d.branches) {
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
      const auto& s = b.samples[i];
      CHECK(residual_norm(c, s.theta, s.params) <= 1e-10);
      if (i == 0) continue;
      const auto& p = b.samples[i - 1];
      CHECK(s.theta >= p.theta);
      CHECK(std::abs(s.action - p.action) < 10.0 * step * d.curve_rad * d.curve_rad);
      CHECK(quad_distance(s.params, p.params) < 0.5);
    }
  }
}

// Per grid index, sorted (canonical params, action) of every node.
std::vector<std::vector<std::pair<Quad, double>>> columns(const SpectrumDiagram& d) {
  std::vector<std::vector<std::pair<Quad, double>>> out(d.theta_grid.size());
  for (std::size_t i = 0; i < d.theta_grid.size(); ++i) {
    for (const auto& [id, s] : d.column(i)) out[i].emplace_back(canonical_generator(s.params), s.action);
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

}  // namespace

TEST_CASE("circle branch follows the action law") {
  const auto c = fixtures::unit_circle();
  const auto seed = find_rectangles(c, kPi / 2).front();
  const auto b = continue_branch(c, seed, {0.1, 3.0});
  CHECK(b.birth == EndKind::Boundary);
  CHECK(b.death == EndKind::Boundary);
  CHECK(b.samples.front().theta == Approx(0.1).epsilon(1e-9));
  CHECK(b.samples.back().theta == Approx(3.0).epsilon(1e-9));
  for (const auto& s : b.samples) {
    CHECK(std::abs(s.action - s.theta) <= 1e-6);
    CHECK(s.rad == Approx(1.0).epsilon(1e-9));
    CHECK(residual_norm(c, s.theta, s.params) <= 1e-10);
  }
}

TEST_CASE("ellipse square branch spans the range with increasing action") {
  const auto e = fixtures::ellipse21();
  const auto seed = find_rectangles(e, kPi / 2).front();
  const auto b = continue_branch(e, seed, {0.1, kPi - 0.1});
  CHECK(b.birth == EndKind::Boundary);
  CHECK(b.death == EndKind::Boundary);
  CHECK(b.samples.front().theta == Approx(0.1).epsilon(1e-9));
  CHECK(b.samples.back().theta == Approx(kPi - 0.1).epsilon(1e-9));
  for (std::size_t i = 1; i < b.samples.size(); ++i) CHECK(b.samples[i].action > b.samples[i - 1].action);
  // Oracle: the fixed-theta solver finds every sample.
  for (std::size_t i = 0; i < b.samples.size(); i += 7) {
    const auto& s = b.samples[i];
    const auto found = find_rectangles(e, s.theta);
    const bool hit = std::any_of(found.begin(), found.end(),
                                 [&](const InscribedRectangle& r) { return generator_distance(r.params, s.params) < 1e-7; });
    CHECK(hit);
  }
}

TEST_CASE("a branch that folds meets a second branch at the fold") {
  const auto c = fixtures::smoothed_square();
  std::optional<BranchSample> fold;
  for (const auto& seed : find_rectangles(c, 0.25)) {
    const auto b = continue_branch(c, seed, {0.1, kPi - 0.1});
    if (b.death == EndKind::Fold) {
      fold = b.samples.back();
      break;
    }
  }
  REQUIRE(fold);
  CHECK(fold->event == BranchEvent::Death);
  CHECK(residual_norm(c, fold->theta, fold->params) <= 1e-10);
  std::vector<Quad> sheets;
  for (const auto& r : find_rectangles(c, fold->theta - 2e-3)) {
    if (generator_distance(r.params, fold->params) > 0.2) continue;
    const auto o = continue_branch(c, r, {0.1, kPi - 0.1});
    if (o.death != EndKind::Fold) continue;
    const auto& end = o.samples.back();
    if (std::abs(end.theta - fold->theta) <= 1e-4 && generator_distance(end.params, fold->params) <= 1e-4) {
      CHECK(end.event == BranchEvent::Death);
      CHECK(std::abs(end.action - fold->action) <= 1e-4);
      sheets.push_back(r.params);
    }
  }
  REQUIRE(sheets.size() >= 2);
  CHECK(generator_distance(sheets[0], sheets[1]) > 1e-3);
}

TEST_CASE("continuation input checks and clamping") {
  const auto c = fixtures::unit_circle();
  auto seed = find_rectangles(c, 1.0).front();
  const auto b = continue_branch(c, seed, {-1.0, 4.0});
  CHECK(b.samples.front().theta >= 1e-3 - 1e-12);
  CHECK(b.samples.back().theta <= kPi - 1e-3 + 1e-12);
  CHECK_THROWS_AS(continue_branch(c, seed, {2.0, 1.0}), Error);
  seed.residual = 1e-3;
  CHECK_THROWS_AS(continue_branch(c, seed, {0.5, 1.5}), Error);
}

TEST_CASE("circle sweep") {
  const auto c = fixtures::unit_circle();
  const auto d = sweep_spectrum(c, 0.1, 3.0, 64);
  REQUIRE(d.theta_grid.size() == 64);
  CHECK(d.curve_area == Approx(kPi));
  CHECK(d.curve_rad == Approx(1.0));
  for (std::size_t i = 0; i < d.theta_grid.size(); ++i) CHECK_FALSE(d.column(i).empty());
  for (const auto& b : d.branches) {
    for (const auto& s : b.samples) CHECK(std::abs(s.action - s.theta) <= 1e-6);
  }
  check_diagram_samples(c, d);
}

TEST_CASE("ellipse sweep is complete, continuous and order independent") {
  const auto e = fixtures::ellipse21();
  const auto up = sweep_spectrum(e, 0.1, kPi - 0.1, 64);
  for (std::size_t i = 0; i < up.theta_grid.size(); ++i) CHECK_FALSE(up.column(i).empty());
  CHECK(up.consistency.mismatches == 0);
  CHECK(up.consistency.checked_thetas.size() >= 6);
  check_diagram_samples(e, up);
  std::vector<std::size_t> all(up.theta_grid.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(check_diagram_consistency(e, up, all) == 0);

  SweepOptions desc;
  desc.descending = true;
  const auto down = sweep_spectrum(e, 0.1, kPi - 0.1, 64, desc);
  CHECK(down.branches.size() == up.branches.size());
  const auto a = columns(up), b = columns(down);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].size() == b[i].size());
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      CHECK(quad_distance(a[i][k].first, b[i][k].first) <= 1e-8);
      CHECK(std::abs(a[i][k].second - b[i][k].second) <= 1e-8);
    }
  }
}

TEST_CASE("smoothed square sweep respects the quarter-turn symmetry") {
  const auto c = fixtures::smoothed_square();
  // The fixture satisfies gamma(s + pi/2) = i gamma(s).
  for (double s : {0.0, 0.4, 2.0}) CHECK(std::abs(c.eval(s + kPi / 2) - Complex(0, 1) * c.eval(s)) < 1e-12);
  const auto d = sweep_spectrum(c, 0.1, kPi - 0.1, 64);
  CHECK(d.consistency.mismatches == 0);
  for (std::size_t i = 0; i < d.theta_grid.size(); ++i) {
    const auto col = d.column(i);
    CHECK_FALSE(col.empty());
    for (const auto& [id, s] : col) {
      const Quad turned{s.params[0] + kPi / 2, s.params[1] + kPi / 2, s.params[2] + kPi / 2, s.params[3] + kPi / 2};
      const bool hit = std::any_of(col.begin(), col.end(), [&](const auto& o) {
        return generator_distance(o.second.params, turned) <= 1e-6 && std::abs(o.second.action - s.action) <= 1e-6;
      });
      CHECK(hit);
    }
  }
  check_diagram_samples(c, d);
}

TEST_CASE("sweep input checks") {
  const auto c = fixtures::unit_circle();
  CHECK_THROWS_AS(sweep_spectrum(c, 2.0, 1.0, 64), Error);
}

TEST_CASE("enum labels") {
  CHECK(std::string(to_string(BranchEvent::None)) == "none");
  CHECK(std::string(to_string(BranchEvent::Birth)) == "birth");
  CHECK(std::string(to_string(BranchEvent::Death)) == "death");
}
