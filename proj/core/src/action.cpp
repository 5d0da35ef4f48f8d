#include "peglab/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "peglab/error.hpp"

namespace peglab {

namespace {

double smooth_f(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = smooth_f(x), b = smooth_f(1.0 - x);
  return a / (a + b);
}

// Twice the signed area contribution of the segment p -> q.
double cross(Complex p, Complex q) { return p.real() * q.imag() - q.real() * p.imag(); }

std::optional<BoundaryPath> same_direction_path(const Quad& q, int dir) {
  const double s = q[0], t = q[1], s2 = q[2], t2 = q[3];
  double da = wrap_angle(s2 - s);
  double db0 = wrap_angle(t2 - t);
  if (dir < 0) {
    if (da > 0.0) da -= kTwoPi;
    if (db0 > 0.0) db0 -= kTwoPi;
  }
  for (double db : {db0, db0 + dir * kTwoPi}) {
    // delta(r) = a(r) - b(r) must stay inside one open interval (2pi k, 2pi (k+1)).
    const double d0 = s - t;
    const double d1 = d0 + da - db;
    const double k0 = std::floor(d0 / kTwoPi), k1 = std::floor(d1 / kTwoPi);
    const double lo = std::min(d0, d1), hi = std::max(d0, d1);
    const double margin = 1e-12;
    if (k0 == k1 && lo - k0 * kTwoPi > margin && (k0 + 1) * kTwoPi - hi > margin) {
      return BoundaryPath{s, da, t, db};
    }
  }
  return std::nullopt;
}

BoundaryPath choose_path(const InscribedRectangle& rect, CappingPath kind) {
  const Quad& q = rect.params;
  const int preferred = wrap_angle(q[2] - q[0]) <= kPi ? 1 : -1;
  std::optional<BoundaryPath> path = same_direction_path(q, preferred);
  if (!path) path = same_direction_path(q, -preferred);
  if (!path) {
    throw Error(ErrorCode::DiagonalHit, "no same-direction boundary path avoids the diagonal");
  }
  if (kind == CappingPath::Reversed) {
    const double dir = path->da > 0.0 || (path->da == 0.0 && path->db >= 0.0) ? 1.0 : -1.0;
    path->da -= dir * kTwoPi;
    path->db -= dir * kTwoPi;
  }
  return *path;
}

// Sum of the shoelace areas of the two projected loops with n intervals per piece.
double projected_area_sum(const JordanCurve& curve, const InscribedRectangle& rect, const BoundaryPath& path,
                          SpeedProfile profile, int n) {
  double twice = 0.0;
  const Complex zw0 = rect.z2(), ww0 = rect.w2();
  Complex prev_z = zw0, prev_w = ww0;
  for (int j = 1; j <= n; ++j) {
    const PointPair p = rot_theta({zw0, ww0}, rect.theta * profile_value(profile, static_cast<double>(j) / n));
    twice += cross(prev_z, p.z) + cross(prev_w, p.w);
    prev_z = p.z;
    prev_w = p.w;
  }
  for (int j = 0; j <= n; ++j) {
    const double r = static_cast<double>(j) / n;
    Complex z, w;
    if (j == 0) {
      z = rect.z();
      w = rect.w();
    } else if (j == n) {
      z = zw0;
      w = ww0;
    } else {
      z = curve.eval(path.a0 + r * path.da);
      w = curve.eval(path.b0 + r * path.db);
    }
    twice += cross(prev_z, z) + cross(prev_w, w);
    prev_z = z;
    prev_w = w;
  }
  return 0.5 * twice;
}

}  // namespace

double profile_value(SpeedProfile profile, double u) {
  if (profile == SpeedProfile::Uniform) return u;
  return smooth_step((u - 0.1) / 0.8);
}

std::vector<PointPair> build_trajectory(const InscribedRectangle& rect, int samples, SpeedProfile profile) {
  if (samples < 64) throw Error(ErrorCode::InvalidArgument, "trajectory needs at least 64 samples");
  std::vector<PointPair> out(static_cast<std::size_t>(samples));
  const PointPair start{rect.z2(), rect.w2()};
  for (int j = 0; j < samples; ++j) {
    const double u = static_cast<double>(j) / (samples - 1);
    out[static_cast<std::size_t>(j)] = rot_theta(start, rect.theta * profile_value(profile, u));
  }
  out.back() = {rect.z(), rect.w()};
  return out;
}

CappedTrajectory build_capping(const JordanCurve& curve, const InscribedRectangle& rect, int samples,
                               CappingPath kind, SpeedProfile profile) {
  CappedTrajectory cap;
  cap.rect = rect;
  cap.path = choose_path(rect, kind);
  cap.arc_samples = build_trajectory(rect, std::max(64, samples), profile);

  // Enough boundary samples that consecutive differences turn by well under pi.
  int n = std::max(64, samples);
  std::vector<Complex> diff;
  double min_dist = std::numeric_limits<double>::infinity();
  for (const auto& p : cap.arc_samples) min_dist = std::min(min_dist, std::abs(p.z - p.w));
  for (int attempt = 0; attempt < 8; ++attempt, n *= 2) {
    cap.boundary_samples.assign(static_cast<std::size_t>(n + 1), {});
    double bmin = std::numeric_limits<double>::infinity();
    double max_turn = 0.0;
    Complex prev = rect.z() - rect.w();
    for (int j = 0; j <= n; ++j) {
      const double r = static_cast<double>(j) / n;
      const Complex z = curve.eval(cap.path.a0 + r * cap.path.da);
      const Complex w = curve.eval(cap.path.b0 + r * cap.path.db);
      cap.boundary_samples[static_cast<std::size_t>(j)] = {z, w};
      const Complex d = z - w;
      bmin = std::min(bmin, std::abs(d));
      if (j > 0 && std::abs(d) > 0.0 && std::abs(prev) > 0.0) max_turn = std::max(max_turn, std::abs(std::arg(d / prev)));
      prev = d;
    }
    if (!(bmin > 1e-6)) {
      throw Error(ErrorCode::DiagonalHit, "boundary path passes within 1e-6 of the diagonal");
    }
    if (max_turn < kPi / 4) {
      min_dist = std::min(min_dist, bmin);
      break;
    }
  }
  cap.min_diagonal_distance = min_dist;

  diff.reserve(cap.arc_samples.size() + cap.boundary_samples.size());
  for (const auto& p : cap.arc_samples) diff.push_back(p.z - p.w);
  for (const auto& p : cap.boundary_samples) diff.push_back(p.z - p.w);
  cap.winding_correction = winding_number(SampledLoop::from_path(diff), 0.0);
  return cap;
}

std::vector<Complex> corrected_difference_loop(const JordanCurve& curve, const CappedTrajectory& capped) {
  std::vector<Complex> diff;
  for (const auto& p : capped.arc_samples) diff.push_back(p.z - p.w);
  for (const auto& p : capped.boundary_samples) diff.push_back(p.z - p.w);
  const int k = capped.winding_correction;
  if (k != 0) {
    const double a_end = capped.path.a0 + capped.path.da;
    const double b_end = capped.path.b0 + capped.path.db;
    const int per_loop = std::max<int>(256, static_cast<int>(capped.boundary_samples.size()));
    const int total = per_loop * std::abs(k);
    for (int j = 1; j <= total; ++j) {
      const double shift = -kTwoPi * k * static_cast<double>(j) / total;
      diff.push_back(curve.eval(a_end + shift) - curve.eval(b_end + shift));
    }
  }
  return diff;
}

ActionValue action_value(const JordanCurve& curve, const InscribedRectangle& rect, const ActionOptions& options) {
  if (options.initial_samples < 4 || options.max_samples < options.initial_samples) {
    throw Error(ErrorCode::InvalidArgument, "bad sample bounds for action refinement");
  }
  const CappedTrajectory cap = build_capping(curve, rect, 1024, options.path, options.profile);
  const double scale = std::max(1.0, rect.rad * rect.rad);

  // Romberg table on h = 1/n; the segment-wise chord error is odd in h, so
  // the total error expands in even powers.
  std::vector<std::vector<double>> table;
  int n = options.initial_samples;
  double best = 0.0;
  int used = n;
  for (int level = 0; n <= options.max_samples; ++level, n *= 2) {
    std::vector<double> row{projected_area_sum(curve, rect, cap.path, options.profile, n)};
    for (int m = 1; m <= level; ++m) {
      const double f = std::pow(4.0, m);
      row.push_back(row[static_cast<std::size_t>(m - 1)] +
                    (row[static_cast<std::size_t>(m - 1)] - table.back()[static_cast<std::size_t>(m - 1)]) / (f - 1.0));
    }
    best = row.back();
    used = n;
    const bool done = level >= 2 && std::abs(row.back() - table.back().back()) <= options.tol * scale;
    table.push_back(std::move(row));
    if (done) break;
  }

  ActionValue out;
  out.term_hamiltonian = rect.theta * rect.rad * rect.rad;
  out.winding_correction = cap.winding_correction;
  out.term_area = best - cap.winding_correction * 2.0 * enclosed_area(curve);
  out.value = out.term_hamiltonian - out.term_area;
  out.samples_used = used;
  return out;
}

namespace {

// Half the integral of Im(conj(gamma) gamma') over [a, b], which is the
// boundary contribution of the curve arc to the enclosed signed area.
double arc_area_term(const JordanCurve& curve, double a, double b) {
  auto f = [&](double s) {
    const CurveJet j = curve.jet(s);
    return 0.5 * cross(j.value, j.d1);
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-14);
}

std::vector<Complex> arc_loop(const JordanCurve& curve, double from, double length, int n) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) pts.push_back(curve.eval(from + length * j / n));
  return pts;
}

bool loop_is_simple(const std::vector<Complex>& pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool vertex_order_ok(const Quad& q) {
  const double os = wrap_angle(q[0] - q[2]);
  const double ot2 = wrap_angle(q[3] - q[2]);
  const double ot = wrap_angle(q[1] - q[2]);
  return 0.0 < os && os < ot2 && ot2 < ot;
}

}  // namespace

double ice_cream_area(const JordanCurve& curve, const InscribedRectangle& rect) {
  if (!is_elegant(curve, rect)) {
    throw Error(ErrorCode::NotElegant, "ice cream regions are not embedded for this rectangle");
  }
  const Quad& q = rect.params;
  const Complex c = rect.center;
  auto cone = [&](double from, double to, Complex p_from, Complex p_to) {
    const double len = wrap_angle(to - from);
    double twice = cross(c, p_from) + cross(p_to, c);
    return 0.5 * twice + arc_area_term(curve, from, from + len);
  };
  return cone(q[2], q[0], rect.z2(), rect.z()) + cone(q[3], q[1], rect.w2(), rect.w());
}

bool is_elegant(const JordanCurve& curve, const InscribedRectangle& rect) {
  const Quad& q = rect.params;
  if (!vertex_order_ok(q)) return false;
  // Vertex parameters in cyclic order z', z, w', w.
  const std::array<double, 4> vp{q[2], q[0], q[3], q[1]};
  const auto& vx = rect.vertices;
  constexpr int kArc = 192;
  std::array<std::vector<Complex>, 4> loops;
  for (std::size_t i = 0; i < 4; ++i) {
    loops[i] = arc_loop(curve, vp[i], wrap_angle(vp[(i + 1) % 4] - vp[i]), kArc);
    if (!loop_is_simple(loops[i])) return false;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const Complex side_a = vx[(i + 1) % 4], side_b = vx[i];
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      // Arc j may not cut the side that closes loop i (away from shared endpoints).
      const auto& arc = loops[j];
      for (std::size_t k = 1; k + 2 < arc.size(); ++k) {
        if (segments_intersect(arc[k], arc[k + 1], side_a, side_b)) return false;
      }
      if (point_in_loop(loops[i], arc[arc.size() / 2])) return false;
    }
    for (std::size_t v = 0; v < 4; ++v) {
      if (v == i || v == (i + 1) % 4) continue;
      if (point_in_loop(loops[i], vx[v])) return false;
    }
  }
  return true;
}

}  // namespace peglab
