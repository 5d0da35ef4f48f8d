#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "peglab/error.hpp"
#include "peglab/fixtures.hpp"
#include "peglab/shrinkout.hpp"
#include "peglab/verify/oracles.hpp"

using namespace peglab;
using doctest::Approx;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoFailure;
}

void check_run_invariants(const ApproximationRun& run, int levels) {
  REQUIRE(run.levels.size() == static_cast<std::size_t>(levels));
  REQUIRE(run.approximants.size() == static_cast<std::size_t>(levels));
  for (std::size_t j = 0; j < run.levels.size(); ++j) {
    const auto& lv = run.levels[j];
    CHECK(std::abs(lv.area - run.polygon_area) <= 1e-10 * run.polygon_area);
    CHECK(lv.length <= 1.1 * run.polygon_perimeter);
    CHECK(enclosed_area(run.approximants[j]) == Approx(lv.area).epsilon(1e-14));
    if (j > 0) CHECK(lv.smoothing < run.levels[j - 1].smoothing);
    if (lv.best) {
      CHECK(lv.best->action > run.epsilon);
      CHECK(lv.best->action < lv.area - run.epsilon);
      CHECK(lv.best->diameter == Approx(2.0 * lv.best->rect.rad));
      CHECK(lv.best->rect.residual <= 1e-10);
    }
  }
  CHECK(run.max_area_error <= 1e-10 * run.polygon_area);
}

}  // namespace

TEST_CASE("disk area bound") {
  CHECK(disk_area_bound(5.0, 0.1) == Approx(0.25));
  CHECK(disk_area_bound(5.0, 1e-9) < 1e-8);
  CHECK(disk_area_bound(6.0, 0.1) > disk_area_bound(5.0, 0.1));
  CHECK(disk_area_bound(5.0, 0.2) > disk_area_bound(5.0, 0.1));
  // The Lemma-style bound, L' / (2 pi r) * pi r^2, evaluated directly.
  const double lp = 7.3, r = 0.37;
  CHECK(disk_area_bound(lp, r) == Approx(lp / (kTwoPi * r) * kPi * r * r));
  CHECK(code_of([] { disk_area_bound(0.0, 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { disk_area_bound(1.0, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mode count follows the damping") {
  CHECK(mode_count_for(4e-3) == 87);
  CHECK(mode_count_for(1.0) == 64);
  CHECK(mode_count_for(1e-7) == 1024);
  for (double s : {1e-3, 2.5e-4, 6.25e-5}) {
    const int k = mode_count_for(s);
    if (k < 1024) CHECK(std::exp(-s * k * k) <= std::exp(-30.0) * (1 + 1e-9));
  }
}

TEST_CASE("square run: bounded diameters and convergence to the polygon's square") {
  const auto square = fixtures::square_polygon();
  const auto run = approximate_and_track(square, kPi / 2, 4, 0.1);
  check_run_invariants(run, 4);
  CHECK(run.polygon_area == Approx(4.0));
  CHECK(run.polygon_perimeter == Approx(8.0));
  for (const auto& lv : run.levels) {
    REQUIRE(lv.best);
    CHECK(lv.best->diameter >= 0.5);
  }
  CHECK(run.diameters_bounded);
  CHECK(run.min_diameter >= 0.5);
  CHECK(run.cauchy);
  for (std::size_t j = 1; j < run.levels.size(); ++j) CHECK(run.levels[j].vertex_gap >= 0.0);
  CHECK(run.levels[0].vertex_gap < 0.0);

  // Oracle: brute-force widest square on the polygon itself.
  const auto target = oracle::widest_polygon_rectangle(square, kPi / 2, 256);
  REQUIRE(target);
  const auto& fin = run.levels.back().best->rect.vertices;
  CHECK(hausdorff_distance(*target, fin) <= 0.05);
  for (const Complex v : *target) CHECK(std::abs(std::abs(v.real()) - 1.0) < 0.02);
}

TEST_CASE("hexagon run keeps its invariants") {
  const auto hex = fixtures::hexagon_polygon();
  const double area = std::abs(polygon_area(hex));
  const auto run = approximate_and_track(hex, kPi / 3, 3, 0.1 * area);
  check_run_invariants(run, 3);
  CHECK(run.diameters_bounded);
  for (const auto& lv : run.levels) {
    REQUIRE(lv.best);
    CHECK(lv.best->diameter >= 1e-2 * 1.0);
  }
  // Clockwise input describes the same polygon.
  auto cw = hex;
  std::reverse(cw.vertices.begin(), cw.vertices.end());
  const auto run_cw = approximate_and_track(cw, kPi / 3, 3, 0.1 * area);
  CHECK(run_cw.polygon_area == Approx(run.polygon_area));
  CHECK(run_cw.levels.back().best->diameter == Approx(run.levels.back().best->diameter).epsilon(1e-6));
}

TEST_CASE("levels without a filtered rectangle are reported, not thrown") {
  const auto run = approximate_and_track(fixtures::square_polygon(), 0.3, 3, 2.0 - 1e-9);
  CHECK_FALSE(run.diameters_bounded);
  CHECK_FALSE(run.cauchy);
  for (const auto& lv : run.levels) {
    CHECK(lv.filtered == 0);
    CHECK_FALSE(lv.best);
  }
  CHECK(run.log.size() == 3);
  CHECK(run.log.front().find("no filtered rectangle") != std::string::npos);
}

TEST_CASE("input checks") {
  const auto square = fixtures::square_polygon();
  CHECK(code_of([&] { approximate_and_track(square, kPi / 2, 2, 0.1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { approximate_and_track(square, kPi / 2, 3, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { approximate_and_track(square, kPi / 2, 3, 2.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { approximate_and_track(square, 0.0, 3, 0.1); }) == ErrorCode::InvalidArgument);
  const PolygonCurve bowtie{{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}, "bowtie"};
  CHECK(code_of([&] { approximate_and_track(bowtie, 1.0, 3, 0.1); }) == ErrorCode::InvalidCurve);
}

TEST_CASE("widest member of a degenerate family") {
  const auto circle = fixtures::unit_circle();
  const auto r = find_rectangles(circle, 1.0).front();
  const auto w = widest_family_member(circle, r, 0.2);
  CHECK(w.rad == Approx(1.0).epsilon(1e-9));
  CHECK(w.residual <= 1e-10);

  const auto sq = fixtures::smoothed_square();
  int degenerate = 0;
  for (const auto& rect : find_rectangles(sq, kPi / 2)) {
    if (!rect.degenerate) continue;
    ++degenerate;
    const auto wide = widest_family_member(sq, rect, kTwoPi / 32);
    CHECK(wide.residual <= 1e-10);
    CHECK(wide.rad >= rect.rad - 1e-12);
  }
  CHECK(degenerate > 0);
  // Nondegenerate rectangles come back unchanged.
  const auto e = fixtures::ellipse21();
  const auto es = find_rectangles(e, kPi / 2).front();
  CHECK(widest_family_member(e, es, 0.1).params == es.params);
}
