#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "peglab/error.hpp"
#include "peglab/fixtures.hpp"
#include "peglab/spectral.hpp"

using namespace peglab;
using doctest::Approx;

namespace {

const SpectrumDiagram& diagram_for(const std::string& name) {
  static std::map<std::string, SpectrumDiagram> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    JordanCurve c = name == "ellipse_x2" ? fixtures::ellipse21().transformed(2.0, 0.0) : fixtures::by_name(name);
    it = cache.emplace(name, sweep_spectrum(c, 0.1, kPi - 0.1, 64)).first;
  }
  return it->second;
}

// Diagram with one branch per row of values on a shared grid.
SpectrumDiagram synthetic(const std::vector<double>& grid, const std::vector<std::vector<double>>& rows, double area,
                          double rad) {
  SpectrumDiagram d;
  d.theta_grid = grid;
  d.curve_area = area;
  d.curve_rad = rad;
  for (std::size_t b = 0; b < rows.size(); ++b) {
    SpectrumBranch br;
    br.id = static_cast<int>(b);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      BranchSample s;
      s.theta = grid[i];
      s.action = rows[b][i];
      s.grid_index = static_cast<int>(i);
      br.samples.push_back(s);
    }
    d.branches.push_back(br);
  }
  return d;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoFailure;
}

void check_spectrality(const SpectrumDiagram& d, const SpectralFunction& f) {
  REQUIRE(f.samples.size() == d.theta_grid.size());
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const auto& s = f.samples[i];
    CHECK(s.theta == d.theta_grid[i]);
    const auto col = d.column(i);
    const bool exact = std::any_of(col.begin(), col.end(),
                                   [&](const auto& p) { return p.first == s.branch_id && p.second.action == s.value; });
    CHECK(exact);
  }
}

}  // namespace

TEST_CASE("circle spectral function is the identity") {
  const auto& d = diagram_for("circle");
  const auto f = select_spectral_function(d);
  check_spectrality(d, f);
  CHECK(f.status == "candidate");
  CHECK(f.penalty <= 1e-9);
  for (const auto& s : f.samples) CHECK(std::abs(s.value - s.theta) <= 1e-6);
  CHECK(f.validation.passed());
  CHECK(f.validation.max_slope <= 1.0 + 1e-6);
  const auto ext = f.extended();
  CHECK(ext.front().theta == 0.0);
  CHECK(ext.front().value == 0.0);
  CHECK(ext.back().theta == kPi);
  CHECK(ext.back().value == Approx(kPi));

  const auto i = inscription_interval(f, 0.1);
  CHECK(i.a == Approx(0.1).epsilon(1e-6));
  CHECK(i.b == Approx(kPi - 0.1).epsilon(1e-6));
  CHECK(i.length() >= (kPi - 0.2) - 1e-6);
  CHECK(i.bound == Approx(kPi - 0.2));
  CHECK(i.meets_bound);

  const auto tight = inscription_interval(f, kPi / 2 - 1e-3);
  CHECK(tight.length() >= 0.0);
  CHECK(tight.bound == Approx(2e-3));
}

TEST_CASE("ellipse spectral function") {
  const auto& d = diagram_for("ellipse21");
  const auto f = select_spectral_function(d);
  check_spectrality(d, f);
  const auto& v = f.validation;
  CHECK(v.monotone);
  CHECK(v.max_decrease <= 1e-4 * kTwoPi);
  CHECK(v.max_slope <= 4.0 * 1.01);
  CHECK(v.bounded);
  CHECK(v.passed());
  // Endpoint limits: within one Lipschitz step of 0 and of the area.
  CHECK(f.samples.front().value <= 4.0 * 0.1);
  CHECK(f.samples.back().value >= kTwoPi - 4.0 * 0.1);

  const auto i = inscription_interval(f, 0.05);
  CHECK(i.bound == Approx((kTwoPi - 0.1) / 4.0));
  CHECK(i.length() >= i.bound - i.slack);
  CHECK(i.length() >= 1.546 - 0.02);
  CHECK(i.meets_bound);

  const auto sweep = epsilon_sweep(f);
  REQUIRE(sweep.size() == 9);
  CHECK(sweep.front().epsilon == Approx(0.25 * kTwoPi));
  CHECK(sweep.back().epsilon == Approx(1e-3 * kTwoPi));
  for (std::size_t k = 1; k < sweep.size(); ++k) CHECK(sweep[k].length() >= sweep[k - 1].length());
  for (const auto& s : sweep) CHECK(s.meets_bound);
  CHECK(sweep.back().length() >= kTwoPi / 4.0 - 0.05);
}

TEST_CASE("spectral values scale with the square of the curve") {
  const auto f1 = select_spectral_function(diagram_for("ellipse21"));
  const auto f2 = select_spectral_function(diagram_for("ellipse_x2"));
  REQUIRE(f1.samples.size() == f2.samples.size());
  for (std::size_t i = 0; i < f1.samples.size(); ++i) {
    CHECK(f2.samples[i].theta == Approx(f1.samples[i].theta).epsilon(1e-14));
    CHECK(std::abs(f2.samples[i].value - 4.0 * f1.samples[i].value) <= 1e-6 * 4.0 * std::abs(f1.samples[i].value));
  }
}

TEST_CASE("validation of degenerate inputs") {
  SpectralFunction zero;
  zero.area = kPi;
  zero.rad = 1.0;
  for (int i = 1; i <= 10; ++i) zero.samples.push_back({0.3 * i, 0.0, 0});
  const auto r = validate_properties(zero, kPi, 1.0);
  CHECK(r.monotone);
  CHECK(r.lipschitz);
  CHECK(r.bounded);
  CHECK_FALSE(r.endpoints);
  CHECK_FALSE(r.passed());

  SpectralFunction one = zero;
  one.samples.resize(1);
  CHECK(code_of([&] { validate_properties(one, kPi, 1.0); }) == ErrorCode::InvalidArgument);

  SpectralFunction steep = zero;
  for (auto& s : steep.samples) s.value = s.theta * 1.5;
  const auto rs = validate_properties(steep, 10.0, 1.0);
  CHECK_FALSE(rs.lipschitz);
  CHECK(rs.max_slope == Approx(1.5));

  SpectralFunction over = zero;
  over.samples.back().value = 4.0;
  CHECK_FALSE(validate_properties(over, kPi, 2.0).bounded);
}

TEST_CASE("interval errors") {
  SpectralFunction f;
  f.area = kPi;
  f.rad = 1.0;
  for (int i = 1; i <= 10; ++i) f.samples.push_back({0.3 * i, 0.3 * i, 0});
  CHECK(code_of([&] { inscription_interval(f, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { inscription_interval(f, kPi / 2); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { epsilon_sweep(f, 1e-3, 0.25); }) == ErrorCode::InvalidArgument);
  // Out-of-order samples: the function already fails validation.
  SpectralFunction bad;
  bad.area = kPi;
  bad.rad = 1.0;
  bad.samples = {{3.1, 0.0, 0}, {3.11, kPi, 0}, {0.01, 0.0, 0}};
  CHECK_FALSE(validate_properties(bad, kPi, 1.0).passed());
  CHECK(code_of([&] { inscription_interval(bad, 0.1); }) == ErrorCode::IntervalEmpty);
}

TEST_CASE("dynamic program: ties go to the smaller values, penalties decide otherwise") {
  const std::vector<double> grid{1.0, 1.5, 2.0};
  const double area = kPi, rad = std::sqrt(2.0);
  {
    const auto d = synthetic(grid, {{0.6, 0.9, 1.2}, {0.5, 0.8, 1.1}}, area, rad);
    const auto f = select_spectral_function(d);
    CHECK(f.penalty == Approx(0.0));
    for (const auto& s : f.samples) CHECK(s.branch_id == 1);
  }
  {
    // The smallest start is kept, then the path switches branch to avoid a
    // Lipschitz excess at the last step.
    const auto d = synthetic(grid, {{0.5, 0.6, 3.0}, {0.6, 1.2, 1.8}}, area, rad);
    const auto f = select_spectral_function(d);
    CHECK(f.samples[0].value == 0.5);
    CHECK(f.samples[1].value == 1.2);
    CHECK(f.samples[2].value == 1.8);
    CHECK(f.penalty == Approx(0.0));
  }
  {
    // Only a decreasing path exists.
    const auto d = synthetic(grid, {{0.5 * area, 0.1 * area, 0.2 * area}}, area, rad);
    CHECK(code_of([&] { select_spectral_function(d); }) == ErrorCode::NoAdmissiblePath);
  }
  {
    // A decrease inside the tolerance is admissible but penalised.
    const auto d = synthetic(grid, {{1.0, 1.0 - 1e-5, 1.5}}, area, rad);
    const auto f = select_spectral_function(d);
    CHECK(f.penalty == Approx(1e-5).epsilon(1e-6));
    CHECK(f.validation.monotone);
  }
  {
    // Actions outside [0, area] are not candidates.
    const auto d = synthetic(grid, {{0.5, 5.0, 1.0}}, area, rad);
    CHECK(code_of([&] { select_spectral_function(d); }) == ErrorCode::NoAdmissiblePath);
  }
  SpectrumDiagram empty;
  CHECK(code_of([&] { select_spectral_function(empty); }) == ErrorCode::EmptySpectrum);
}
