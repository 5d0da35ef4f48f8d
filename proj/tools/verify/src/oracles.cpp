#include "peglab/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace peglab::oracle {

SignedDistance::SignedDistance(const std::vector<Complex>& polyline, double cell) : cell_(cell) {
  for (std::size_t k = 0; k < polyline.size(); ++k) {
    const Complex a = polyline[k];
    const Complex b = polyline[(k + 1) % polyline.size()];
    const auto i = static_cast<long long>(std::floor(a.real() / cell_));
    const auto j = static_cast<long long>(std::floor(a.imag() / cell_));
    buckets_[key(i, j)].emplace_back(a, b);
  }
}

std::optional<double> SignedDistance::operator()(Complex p, double cap) const {
  const auto ci = static_cast<long long>(std::floor(p.real() / cell_));
  const auto cj = static_cast<long long>(std::floor(p.imag() / cell_));
  // A segment starting outside the scanned block can still pass close to p,
  // so the block reaches one cell past the cap.
  const auto r = static_cast<long long>(std::ceil(cap / cell_)) + 1;
  double best = cap * cap;
  double sign = 0.0;
  for (long long i = ci - r; i <= ci + r; ++i) {
    for (long long j = cj - r; j <= cj + r; ++j) {
      const auto it = buckets_.find(key(i, j));
      if (it == buckets_.end()) continue;
      for (const auto& [a, b] : it->second) {
        const Complex d = b - a;
        const double u = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
        const double dist2 = std::norm(a + u * d - p);
        if (dist2 < best) {
          best = dist2;
          sign = (std::conj(d) * (p - a)).imag() >= 0.0 ? 1.0 : -1.0;
        }
      }
    }
  }
  if (sign == 0.0) return std::nullopt;
  return sign * std::sqrt(best);
}

std::vector<ParamPoint> grid_roots(int n, const std::vector<std::optional<std::array<double, 2>>>& values) {
  auto at = [&](int i, int j) -> const std::optional<std::array<double, 2>>& {
    return values[static_cast<std::size_t>(((i % n) + n) % n) * n + ((j % n) + n) % n];
  };
  static constexpr int tri[2][3][2] = {{{0, 0}, {1, 0}, {1, 1}}, {{0, 0}, {1, 1}, {0, 1}}};
  std::vector<ParamPoint> roots;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (const auto& t : tri) {
        double x[3], y[3];
        bool ok = true;
        for (int v = 0; v < 3 && ok; ++v) {
          const auto& val = at(i + t[v][0], j + t[v][1]);
          if (!val) {
            ok = false;
          } else {
            x[v] = (*val)[0];
            y[v] = (*val)[1];
          }
        }
        if (!ok) continue;
        const double a11 = x[1] - x[0], a12 = x[2] - x[0];
        const double a21 = y[1] - y[0], a22 = y[2] - y[0];
        const double det = a11 * a22 - a12 * a21;
        if (det == 0.0) continue;
        const double l1 = (-x[0] * a22 + y[0] * a12) / det;
        const double l2 = (-a11 * y[0] + a21 * x[0]) / det;
        if (l1 < 0.0 || l2 < 0.0 || l1 + l2 > 1.0) continue;
        const double u = i + l1 * t[1][0] + l2 * t[2][0];
        const double v = j + l1 * t[1][1] + l2 * t[2][1];
        roots.push_back({std::fmod(u, n), std::fmod(v, n)});
      }
    }
  }
  auto cdist = [n](double a, double b) {
    const double d = std::fmod(std::abs(a - b), n);
    return std::min(d, n - d);
  };
  std::vector<ParamPoint> merged;
  for (const auto& r : roots) {
    const bool dup = std::any_of(merged.begin(), merged.end(), [&](const ParamPoint& q) {
      return std::max(cdist(r[0], q[0]), cdist(r[1], q[1])) < 0.25;
    });
    if (!dup) merged.push_back(r);
  }
  return merged;
}

namespace {

double max_speed(const JordanCurve& curve, int samples) {
  double m = 0.0;
  for (int j = 0; j < samples; ++j) m = std::max(m, std::abs(curve.derivative(kTwoPi * j / samples)));
  return m;
}

double sampled_radius(const std::vector<Complex>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
  }
  return d / 2.0;
}

std::vector<ParamPoint> to_params(std::vector<ParamPoint> pts, int n) {
  const double h = kTwoPi / n;
  for (auto& p : pts) p = {p[0] * h, p[1] * h};
  return pts;
}

}  // namespace

std::vector<ParamPoint> rectangle_roots(const JordanCurve& curve, double theta, int n, int polyline_n) {
  const double h = kTwoPi / n;
  const auto polyline = curve.sample(polyline_n);
  const auto vals = curve.sample(n);
  const double cap = 2.0 * max_speed(curve, polyline_n) * h;
  const double min_chord = 0.1 * sampled_radius(curve.sample(512));
  const SignedDistance dist(polyline, cap / 2.0);
  const Complex rot = std::polar(1.0, -theta);

  std::vector<std::optional<std::array<double, 2>>> grid(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex z = vals[i], w = vals[j];
      if (std::abs(z - w) < min_chord) continue;
      const Complex m = (z + w) / 2.0, d = rot * (z - w) / 2.0;
      const auto a = dist(m + d, cap);
      if (!a) continue;
      const auto b = dist(m - d, cap);
      if (!b) continue;
      grid[static_cast<std::size_t>(i) * n + j] = std::array<double, 2>{*a, *b};
    }
  }
  return to_params(grid_roots(n, grid), n);
}

std::vector<ParamPoint> binormal_roots(const JordanCurve& curve, int n) {
  std::vector<Complex> pos(n), vel(n);
  for (int i = 0; i < n; ++i) {
    pos[i] = curve.eval(kTwoPi * i / n);
    vel[i] = curve.derivative(kTwoPi * i / n);
  }
  const double min_chord = 0.1 * sampled_radius(curve.sample(512));
  std::vector<std::optional<std::array<double, 2>>> grid(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex chord = pos[i] - pos[j];
      if (std::abs(chord) < min_chord) continue;
      grid[static_cast<std::size_t>(i) * n + j] =
          std::array<double, 2>{(std::conj(vel[i]) * chord).real(), (std::conj(vel[j]) * chord).real()};
    }
  }
  return to_params(grid_roots(n, grid), n);
}

std::optional<std::array<Complex, 4>> widest_polygon_rectangle(const PolygonCurve& polygon, double theta,
                                                               int per_side) {
  const auto& v = polygon.vertices;
  const std::size_t m = v.size();
  std::vector<Complex> pts;
  double spacing = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Complex a = v[k], b = v[(k + 1) % m];
    spacing = std::max(spacing, std::abs(b - a) / per_side);
    for (int q = 0; q < per_side; ++q) pts.push_back(a + (b - a) * (static_cast<double>(q) / per_side));
  }
  auto boundary_distance = [&](Complex p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      const Complex a = v[k], d = v[(k + 1) % m] - a;
      const double u = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
      best = std::min(best, std::abs(a + u * d - p));
    }
    return best;
  };
  const double tol = 2.0 * spacing;
  const Complex rot = std::polar(1.0, -theta);
  double widest = 0.0;
  std::optional<std::array<Complex, 4>> out;
  for (const Complex z : pts) {
    for (const Complex w : pts) {
      const double diag = std::abs(z - w);
      if (diag <= widest) continue;
      const Complex mid = (z + w) / 2.0, d = rot * (z - w) / 2.0;
      if (boundary_distance(mid + d) > tol || boundary_distance(mid - d) > tol) continue;
      widest = diag;
      out = std::array<Complex, 4>{mid + d, z, mid - d, w};
    }
  }
  return out;
}

namespace {

double torus_distance(const ParamPoint& a, const ParamPoint& b) {
  return std::max(circular_distance(a[0], b[0]), circular_distance(a[1], b[1]));
}

}  // namespace

MatchReport match_points(const std::vector<ParamPoint>& oracle, const std::vector<ParamPoint>& solver, double radius) {
  MatchReport r;
  r.oracle_count = static_cast<int>(oracle.size());
  r.solver_count = static_cast<int>(solver.size());
  for (const auto& o : oracle) {
    int hits = 0;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& s : solver) {
      const double d = torus_distance(o, s);
      nearest = std::min(nearest, d);
      if (d <= radius) ++hits;
    }
    r.worst = std::max(r.worst, nearest);
    if (hits != 1) ++r.oracle_unmatched;
  }
  for (const auto& s : solver) {
    int hits = 0;
    for (const auto& o : oracle) {
      if (torus_distance(o, s) <= radius) ++hits;
    }
    if (hits != 1) ++r.solver_unmatched;
  }
  return r;
}

CoverageReport cover_points(const std::vector<ParamPoint>& oracle, const std::vector<ParamPoint>& solver, int bins,
                            double radius) {
  auto bin = [bins](double x) { return static_cast<int>(std::floor(wrap_angle(x) / (kTwoPi / bins))) % bins; };
  std::set<std::pair<int, int>> occupied;
  for (const auto& s : solver) occupied.insert({bin(s[0]), bin(s[1])});
  CoverageReport r;
  for (const auto& o : oracle) {
    bool covered = false;
    for (int di = -1; di <= 1 && !covered; ++di) {
      for (int dj = -1; dj <= 1 && !covered; ++dj) {
        covered = occupied.count({(bin(o[0]) + di + bins) % bins, (bin(o[1]) + dj + bins) % bins}) > 0;
      }
    }
    if (!covered) ++r.uncovered;
  }
  for (const auto& s : solver) {
    const bool near = std::any_of(oracle.begin(), oracle.end(),
                                  [&](const ParamPoint& o) { return torus_distance(o, s) <= radius; });
    if (!near) ++r.unsupported;
  }
  return r;
}

std::vector<ParamPoint> ordered_pairs(const std::vector<InscribedRectangle>& rects) {
  std::vector<ParamPoint> out;
  for (const auto& r : rects) {
    out.push_back({r.params[0], r.params[1]});
    out.push_back({r.params[1], r.params[0]});
  }
  return out;
}

}  // namespace peglab::oracle
