#include "peglab/inscribe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "peglab/error.hpp"
#include "peglab/parallel.hpp"
#include "rect_system.hpp"

namespace peglab {

namespace detail {

void rectangle_system(const JordanCurve& curve, double theta, const Quad& params, Vec4& residual,
                      Mat45* jacobian) {
  const CurveJet js = curve.jet(params[0]);
  const CurveJet jt = curve.jet(params[1]);
  const CurveJet js2 = curve.jet(params[2]);
  const CurveJet jt2 = curve.jet(params[3]);
  const Complex e = std::polar(1.0, theta);
  const Complex a = 0.5 * (1.0 + e);
  const Complex b = 0.5 * (1.0 - e);
  const Complex r1 = a * js2.value + b * jt2.value - js.value;
  const Complex r2 = b * js2.value + a * jt2.value - jt.value;
  residual << r1.real(), r1.imag(), r2.real(), r2.imag();
  if (jacobian == nullptr) return;
  auto put = [&](int col, Complex c1, Complex c2) {
    (*jacobian)(0, col) = c1.real();
    (*jacobian)(1, col) = c1.imag();
    (*jacobian)(2, col) = c2.real();
    (*jacobian)(3, col) = c2.imag();
  };
  const Complex dtheta = Complex(0.0, 0.5) * e * (js2.value - jt2.value);
  put(0, dtheta, -dtheta);
  put(1, -js.d1, 0.0);
  put(2, 0.0, -jt.d1);
  put(3, a * js2.d1, b * js2.d1);
  put(4, b * jt2.d1, a * jt2.d1);
}

}  // namespace detail

namespace {

using detail::Mat45;
using detail::Vec4;

double max_abs(const Vec4& r) { return r.cwiseAbs().maxCoeff(); }

double quad_condition(const Mat45& jac) {
  const Eigen::Matrix4d j4 = jac.rightCols<4>();
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(j4);
  const auto& sv = svd.singularValues();
  if (!(sv(3) > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(3);
}

// Curve samples with a coarse bucket index for nearest-parameter lookups.
struct SampleIndex {
  std::vector<Complex> pts;
  int n = 0;

  SampleIndex(const JordanCurve& curve, int count) : pts(curve.sample(count)), n(count) {}

  // Brute force; the sample count is small and this runs once per seed.
  std::pair<int, double> nearest(Complex p) const {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double d = std::norm(pts[static_cast<std::size_t>(j)] - p);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    return {best, std::sqrt(bd)};
  }
};

double crude_radius(const std::vector<Complex>& pts) {
  const std::size_t stride = std::max<std::size_t>(1, pts.size() / 256);
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); i += stride) {
    for (std::size_t j = i + stride; j < pts.size(); j += stride) best = std::max(best, std::abs(pts[i] - pts[j]));
  }
  return 0.5 * best;
}

// Same geometric rectangle: the vertex parameter multisets agree.
bool same_vertex_set(const Quad& a, const Quad& b, double eps) {
  std::array<bool, 4> used{};
  for (double x : a) {
    bool found = false;
    for (std::size_t j = 0; j < 4; ++j) {
      if (!used[j] && circular_distance(x, b[j]) <= eps) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool params_less(const Quad& a, const Quad& b) { return a < b; }

}  // namespace

std::array<double, 4> rectangle_residual(const JordanCurve& curve, double theta, const Quad& params) {
  Vec4 r;
  detail::rectangle_system(curve, theta, params, r, nullptr);
  return {r(0), r(1), r(2), r(3)};
}

double residual_norm(const JordanCurve& curve, double theta, const Quad& params) {
  Vec4 r;
  detail::rectangle_system(curve, theta, params, r, nullptr);
  return max_abs(r);
}

InscribedRectangle make_rectangle(const JordanCurve& curve, double theta, const Quad& params) {
  InscribedRectangle rect;
  rect.theta = theta;
  rect.params = params;
  const Complex z = curve.eval(params[0]);
  const Complex w = curve.eval(params[1]);
  const Complex z2 = curve.eval(params[2]);
  const Complex w2 = curve.eval(params[3]);
  rect.vertices = {z2, z, w2, w};
  rect.center = 0.5 * (z + w);
  rect.rad = 0.5 * std::abs(z - w);
  Vec4 r;
  Mat45 jac;
  detail::rectangle_system(curve, theta, params, r, &jac);
  rect.residual = max_abs(r);
  rect.condition = quad_condition(jac);
  rect.degenerate = !(rect.condition <= 1e10);
  return rect;
}

std::optional<InscribedRectangle> refine_rectangle(const JordanCurve& curve, double theta, const Quad& guess,
                                                   double tol) {
  Eigen::Vector4d x(guess[0], guess[1], guess[2], guess[3]);
  auto to_quad = [](const Eigen::Vector4d& v) { return Quad{v(0), v(1), v(2), v(3)}; };
  Vec4 r;
  Mat45 jac;
  detail::rectangle_system(curve, theta, to_quad(x), r, &jac);
  double norm2 = r.squaredNorm();
  int polish = 0;
  for (int it = 0; it < 50; ++it) {
    Eigen::Vector4d dx = detail::pinv_solve(jac.rightCols<4>(), -r);
    const double big = dx.cwiseAbs().maxCoeff();
    if (big > 0.5) dx *= 0.5 / big;
    const double step = dx.cwiseAbs().maxCoeff();
    if (max_abs(r) <= tol && (step < 1e-12 || ++polish > 3)) break;
    double lambda = 1.0;
    Eigen::Vector4d trial;
    Vec4 rt;
    for (;;) {
      trial = x + lambda * dx;
      detail::rectangle_system(curve, theta, to_quad(trial), rt, nullptr);
      if (rt.squaredNorm() < (1.0 - 1e-4 * lambda) * norm2 || lambda < 1.0 / 64) break;
      lambda *= 0.5;
    }
    if (!(rt.squaredNorm() <= norm2) && max_abs(r) <= tol) break;
    x = trial;
    detail::rectangle_system(curve, theta, to_quad(x), r, &jac);
    norm2 = r.squaredNorm();
    if (!std::isfinite(norm2)) return std::nullopt;
  }
  if (!(max_abs(r) <= tol)) return std::nullopt;
  Quad q = to_quad(x);
  for (auto& v : q) v = wrap_angle(v);
  return make_rectangle(curve, theta, q);
}

Quad swap_generator(const Quad& q) { return {q[1], q[0], q[3], q[2]}; }

Quad partner_generator(const Quad& q) { return {q[2], q[3], q[1], q[0]}; }

double quad_distance(const Quad& a, const Quad& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, circular_distance(a[i], b[i]));
  return d;
}

double generator_distance(const Quad& a, const Quad& b) {
  return std::min(quad_distance(a, b), quad_distance(swap_generator(a), b));
}

Quad canonical_generator(const Quad& q) {
  Quad out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = wrap_angle(q[i]);
  if (out[0] > out[1]) out = swap_generator(out);
  return out;
}

std::vector<InscribedRectangle> find_rectangles(const JordanCurve& curve, double theta, int grid_n, double tol,
                                                const FindOptions& options) {
  if (!(theta > 0.0 && theta < kPi)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, pi)");
  if (grid_n < 32) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 32");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");

  const int sample_count = std::max({1024, 16 * curve.max_frequency(), 4 * grid_n});
  const SampleIndex index(curve, sample_count);
  double speed = 0.0;
  for (int j = 0; j < sample_count; ++j) speed = std::max(speed, std::abs(curve.derivative(kTwoPi * j / sample_count)));
  const double rad = crude_radius(index.pts);
  const double h = kTwoPi / grid_n;
  const double hs = kTwoPi / sample_count;
  const double gate = 1.5 * h * speed + hs * speed;

  struct Seed {
    int i, j;
  };
  std::vector<Seed> seeds;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = i + 1; j < grid_n; ++j) seeds.push_back({i, j});
  }

  std::vector<std::optional<InscribedRectangle>> solved(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t n) {
    const double s = (seeds[n].i + 0.5) * h;
    const double t = (seeds[n].j + 0.5) * h;
    const PointPair back = rot_theta({curve.eval(s), curve.eval(t)}, -theta);
    const auto [iz, dz] = index.nearest(back.z);
    if (dz > gate) return;
    const auto [iw, dw] = index.nearest(back.w);
    if (dw > gate) return;
    auto sol = refine_rectangle(curve, theta, {s, t, iz * hs, iw * hs}, tol);
    if (!sol || 2.0 * sol->rad < 1e-4 * rad) return;
    solved[n] = std::move(sol);
  });

  std::vector<InscribedRectangle> all;
  for (auto& s : solved) {
    if (!s) continue;
    all.push_back(make_rectangle(curve, theta, canonical_generator(s->params)));
  }
  std::sort(all.begin(), all.end(), [](const InscribedRectangle& a, const InscribedRectangle& b) {
    return std::tie(a.residual, a.params) < std::tie(b.residual, b.params);
  });

  std::vector<InscribedRectangle> kept;
  for (auto& cand : all) {
    bool dup = false;
    for (const auto& k : kept) {
      if (generator_distance(cand.params, k.params) <= 1e-6) {
        dup = true;
        break;
      }
      if (!options.include_partner && same_vertex_set(cand.params, k.params, 1e-6)) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(cand));
  }

  if (options.thin_families) {
    std::map<std::pair<int, int>, std::size_t> bins;
    std::vector<InscribedRectangle> thinned;
    const double bin = kTwoPi / options.family_bins;
    for (auto& r : kept) {
      if (!r.degenerate) {
        thinned.push_back(std::move(r));
        continue;
      }
      const std::pair<int, int> key{static_cast<int>(r.params[0] / bin), static_cast<int>(r.params[1] / bin)};
      // kept is residual-ordered, so the first arrival in a bin is the best.
      if (bins.emplace(key, thinned.size()).second) thinned.push_back(std::move(r));
    }
    kept = std::move(thinned);
  }

  std::sort(kept.begin(), kept.end(),
            [](const InscribedRectangle& a, const InscribedRectangle& b) { return params_less(a.params, b.params); });
  return kept;
}

namespace {

double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

struct BinormalSystem {
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
  double chord;
};

BinormalSystem binormal_system(const JordanCurve& curve, double s, double t) {
  const CurveJet a = curve.jet(s), b = curve.jet(t);
  const Complex d = a.value - b.value;
  BinormalSystem out;
  out.grad << dot(a.d1, d), -dot(b.d1, d);
  out.hess(0, 0) = dot(a.d2, d) + std::norm(a.d1);
  out.hess(1, 1) = -dot(b.d2, d) + std::norm(b.d1);
  out.hess(0, 1) = out.hess(1, 0) = -dot(a.d1, b.d1);
  out.chord = std::abs(d);
  return out;
}

}  // namespace

std::vector<Binormal> find_binormals(const JordanCurve& curve, int grid_n, double tol) {
  if (grid_n < 32) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 32");
  const double rad = crude_radius(curve.sample(std::max(1024, 16 * curve.max_frequency())));
  const double h = kTwoPi / grid_n;
  const double det_floor = 1e-12 * std::max(1.0, std::pow(rad, 4));

  std::vector<std::pair<int, int>> seeds;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const int gap = std::abs(i - j);
      if (std::min(gap, grid_n - gap) >= 2) seeds.push_back({i, j});
    }
  }

  std::vector<std::optional<Binormal>> solved(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t n) {
    double s = (seeds[n].first + 0.5) * h, t = (seeds[n].second + 0.5) * h;
    BinormalSystem sys = binormal_system(curve, s, t);
    // The gradient components carry a chord factor; scale the test accordingly.
    auto res = [&](const BinormalSystem& b) { return b.grad.cwiseAbs().maxCoeff(); };
    int polish = 0;
    for (int it = 0; it < 50; ++it) {
      Eigen::Vector2d dx = detail::pinv_solve(sys.hess, -sys.grad);
      const double big = dx.cwiseAbs().maxCoeff();
      if (big > 0.5) dx *= 0.5 / big;
      if (res(sys) <= tol && (dx.cwiseAbs().maxCoeff() < 1e-12 || ++polish > 3)) break;
      double lambda = 1.0;
      BinormalSystem trial;
      for (;;) {
        trial = binormal_system(curve, s + lambda * dx(0), t + lambda * dx(1));
        if (trial.grad.squaredNorm() < sys.grad.squaredNorm() || lambda < 1.0 / 64) break;
        lambda *= 0.5;
      }
      if (!(trial.grad.squaredNorm() <= sys.grad.squaredNorm()) && res(sys) <= tol) break;
      s += lambda * dx(0);
      t += lambda * dx(1);
      sys = trial;
    }
    if (!(res(sys) <= tol) || sys.chord < 2e-4 * rad) return;
    Binormal b;
    b.params = {wrap_angle(s), wrap_angle(t)};
    b.chord_length = sys.chord;
    b.residual = res(sys);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(sys.hess);
    b.morse_index = static_cast<int>((eig.eigenvalues().array() < 0.0).count());
    b.degenerate = std::abs(sys.hess.determinant()) < det_floor;
    solved[n] = b;
  });

  std::vector<Binormal> all;
  for (auto& b : solved) {
    if (b) all.push_back(*b);
  }
  std::sort(all.begin(), all.end(), [](const Binormal& a, const Binormal& b) {
    return std::tie(a.residual, a.params) < std::tie(b.residual, b.params);
  });
  std::vector<Binormal> kept;
  for (const auto& cand : all) {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Binormal& k) {
      return std::max(circular_distance(cand.params[0], k.params[0]),
                      circular_distance(cand.params[1], k.params[1])) <= 1e-6;
    });
    if (!dup) kept.push_back(cand);
  }

  // Degenerate families: one representative per (s, t) bin, mirrored so that
  // both orders stay present.
  std::map<std::pair<int, int>, bool> bins;
  const double bin = kTwoPi / 32;
  std::vector<Binormal> out;
  for (const auto& b : kept) {
    if (!b.degenerate) {
      out.push_back(b);
      continue;
    }
    if (b.params[0] > b.params[1]) continue;
    const std::pair<int, int> key{static_cast<int>(b.params[0] / bin), static_cast<int>(b.params[1] / bin)};
    if (!bins.emplace(key, true).second) continue;
    out.push_back(b);
    Binormal mirror = b;
    mirror.params = {b.params[1], b.params[0]};
    out.push_back(mirror);
  }
  std::sort(out.begin(), out.end(), [](const Binormal& a, const Binormal& b) { return a.params < b.params; });
  return out;
}

double estimate_width(const JordanCurve& curve, int theta_steps) {
  if (theta_steps < 16) throw Error(ErrorCode::InvalidArgument, "theta_steps must be >= 16");
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int j = 0; j < theta_steps; ++j) {
    const double theta = kPi * (j + 0.5) / theta_steps;
    for (const auto& r : find_rectangles(curve, theta)) {
      best = std::min(best, 2.0 * r.rad);
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::EmptySpectrum, "no inscribed rectangle found at any theta");
  for (const auto& b : find_binormals(curve)) best = std::min(best, b.chord_length);
  return best;
}

}  // namespace peglab
