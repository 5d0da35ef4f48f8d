#include "peglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "peglab/error.hpp"

namespace peglab {

std::vector<SpectralSample> SpectralFunction::extended() const {
  std::vector<SpectralSample> out;
  out.reserve(samples.size() + 2);
  out.push_back({0.0, 0.0, -1});
  out.insert(out.end(), samples.begin(), samples.end());
  out.push_back({kPi, area, -1});
  return out;
}

namespace {

struct Node {
  double value;
  int branch;
};

}  // namespace

SpectralFunction select_spectral_function(const SpectrumDiagram& diagram, const SpectralOptions& options) {
  const double area = diagram.curve_area;
  const double lip = diagram.curve_rad * diagram.curve_rad;
  const auto& grid = diagram.theta_grid;
  const std::size_t n = grid.size();
  if (n == 0) throw Error(ErrorCode::EmptySpectrum, "diagram has no theta grid");

  std::vector<std::vector<Node>> cols(n);
  for (const auto& b : diagram.branches) {
    for (const auto& s : b.samples) {
      if (s.grid_index < 0 || static_cast<std::size_t>(s.grid_index) >= n) continue;
      if (s.action < 0.0 || s.action > area) continue;
      cols[s.grid_index].push_back({s.action, b.id});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cols[i].empty()) {
      std::ostringstream msg;
      msg << "no admissible action at theta = " << grid[i];
      throw Error(ErrorCode::NoAdmissiblePath, msg.str());
    }
    // Order fixes the tie-break among equal values.
    std::sort(cols[i].begin(), cols[i].end(), [](const Node& x, const Node& y) {
      return x.value != y.value ? x.value < y.value : x.branch < y.branch;
    });
  }

  const double drop_tol = options.monotone_tol * area;
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto edge = [&](std::size_t i, const Node& u, const Node& v) {
    const double dv = v.value - u.value;
    if (-dv > drop_tol) return inf;
    const double dth = grid[i + 1] - grid[i];
    return options.weight_monotone * std::max(0.0, -dv) +
           options.weight_lipschitz * std::max(0.0, std::abs(dv) - lip * dth);
  };
  auto start_cost = [&](const Node& u) {
    return options.weight_endpoint * std::max(0.0, u.value - lip * grid.front());
  };
  auto end_cost = [&](const Node& v) {
    return options.weight_endpoint * std::max(0.0, (area - v.value) - lip * (kPi - grid.back()));
  };

  std::vector<std::vector<double>> togo(n);
  togo[n - 1].resize(cols[n - 1].size());
  for (std::size_t j = 0; j < cols[n - 1].size(); ++j) togo[n - 1][j] = end_cost(cols[n - 1][j]);
  for (std::size_t i = n - 1; i-- > 0;) {
    togo[i].assign(cols[i].size(), inf);
    for (std::size_t j = 0; j < cols[i].size(); ++j) {
      for (std::size_t k = 0; k < cols[i + 1].size(); ++k) {
        const double c = edge(i, cols[i][j], cols[i + 1][k]) + togo[i + 1][k];
        togo[i][j] = std::min(togo[i][j], c);
      }
    }
  }

  const double tie = options.tie_tol * std::max(area, 1e-300);
  double best = inf;
  for (std::size_t j = 0; j < cols[0].size(); ++j) best = std::min(best, start_cost(cols[0][j]) + togo[0][j]);
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::NoAdmissiblePath,
                "every path through the spectrum decreases by more than the monotonicity tolerance");
  }

  // Columns are sorted by value, so the first candidate within the tie band is
  // the smallest value.
  std::size_t cur = 0;
  while (start_cost(cols[0][cur]) + togo[0][cur] > best + tie) ++cur;

  SpectralFunction f;
  f.area = area;
  f.rad = diagram.curve_rad;
  f.samples.reserve(n);
  f.samples.push_back({grid[0], cols[0][cur].value, cols[0][cur].branch});
  double penalty = start_cost(cols[0][cur]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double target = togo[i][cur];
    std::size_t next = 0;
    for (; next < cols[i + 1].size(); ++next) {
      if (edge(i, cols[i][cur], cols[i + 1][next]) + togo[i + 1][next] <= target + tie) break;
    }
    penalty += edge(i, cols[i][cur], cols[i + 1][next]);
    cur = next;
    f.samples.push_back({grid[i + 1], cols[i + 1][cur].value, cols[i + 1][cur].branch});
  }
  penalty += end_cost(cols[n - 1][cur]);
  f.penalty = penalty;
  f.validation = validate_properties(f, area, diagram.curve_rad, options);
  return f;
}

SpectralReport validate_properties(const SpectralFunction& f, double area, double rad, const SpectralOptions& options) {
  if (f.samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "validation needs at least two samples");
  const double lip = rad * rad * (1.0 + options.slope_slack);
  SpectralReport r;
  r.min_value = r.max_value = f.samples.front().value;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const auto& s = f.samples[i];
    r.min_value = std::min(r.min_value, s.value);
    r.max_value = std::max(r.max_value, s.value);
    if (i == 0) continue;
    const auto& p = f.samples[i - 1];
    const double dv = s.value - p.value;
    r.max_decrease = std::max(r.max_decrease, -dv);
    const double dth = s.theta - p.theta;
    if (dth > 0.0) r.max_slope = std::max(r.max_slope, std::abs(dv) / dth);
  }
  r.monotone = r.max_decrease <= options.monotone_tol * area;
  r.lipschitz = r.max_slope <= lip;
  const double eps = 1e-12 * std::max(area, 1.0);
  r.bounded = r.min_value >= -eps && r.max_value <= area + eps;
  const auto& first = f.samples.front();
  const auto& last = f.samples.back();
  r.endpoints = first.value <= lip * first.theta + eps && area - last.value <= lip * (kPi - last.theta) + eps;
  return r;
}

InscriptionInterval inscription_interval(const SpectralFunction& f, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < f.area / 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, area/2)");
  }
  const auto ext = f.extended();
  InscriptionInterval out;
  out.epsilon = epsilon;
  out.bound = (f.area - 2.0 * epsilon) / (f.rad * f.rad);
  for (std::size_t i = 0; i + 1 < ext.size(); ++i) out.slack = std::max(out.slack, ext[i + 1].theta - ext[i].theta);

  auto crossing = [&](std::size_t i, double level) {
    const double v0 = ext[i].value, v1 = ext[i + 1].value;
    const double r = v1 == v0 ? 0.0 : (level - v0) / (v1 - v0);
    return ext[i].theta + std::clamp(r, 0.0, 1.0) * (ext[i + 1].theta - ext[i].theta);
  };

  const double lo = epsilon;
  const double hi = f.area - epsilon;
  bool found_a = false;
  for (std::size_t i = 0; i + 1 < ext.size() && !found_a; ++i) {
    if (ext[i + 1].value >= lo) {
      out.a = ext[i].value >= lo ? ext[i].theta : crossing(i, lo);
      found_a = true;
    }
  }
  bool found_b = false;
  for (std::size_t i = ext.size() - 1; i-- > 0 && !found_b;) {
    if (ext[i].value <= hi) {
      out.b = ext[i + 1].value <= hi ? ext[i + 1].theta : crossing(i, hi);
      found_b = true;
    }
  }
  if (!found_a || !found_b || out.a >= out.b) {
    std::ostringstream msg;
    msg << "empty inscription interval at epsilon = " << epsilon;
    throw Error(ErrorCode::IntervalEmpty, msg.str());
  }
  out.meets_bound = out.length() >= out.bound - out.slack;
  return out;
}

std::vector<InscriptionInterval> epsilon_sweep(const SpectralFunction& f, double start_fraction,
                                               double end_fraction, int steps) {
  if (steps < 2 || !(start_fraction > end_fraction) || !(end_fraction > 0.0) || !(start_fraction < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "bad epsilon sweep range");
  }
  std::vector<InscriptionInterval> out;
  const double ratio = std::log(end_fraction / start_fraction) / (steps - 1);
  for (int j = 0; j < steps; ++j) {
    const double frac = j + 1 == steps ? end_fraction : start_fraction * std::exp(ratio * j);
    out.push_back(inscription_interval(f, frac * f.area));
  }
  return out;
}

}  // namespace peglab
