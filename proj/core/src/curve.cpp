#include "peglab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Dense>

#include "peglab/error.hpp"

namespace peglab {

namespace {

// Hand-rolled complex multiply; std::complex operator* carries NaN recovery
// branches that dominate the Fourier loops.
inline void cmul(double ar, double ai, double br, double bi, double& outr, double& outi) {
  outr = ar * br - ai * bi;
  outi = ar * bi + ai * br;
}

}  // namespace

std::vector<Complex> JordanCurve::densify(const std::vector<FourierMode>& modes, int& max_k) {
  max_k = 0;
  for (const auto& m : modes) max_k = std::max(max_k, std::abs(m.k));
  std::vector<Complex> dense(2 * static_cast<std::size_t>(max_k) + 1, Complex{});
  for (const auto& m : modes) dense[static_cast<std::size_t>(m.k + max_k)] += m.c;
  return dense;
}

JordanCurve::JordanCurve(std::vector<Complex> dense, int max_k, std::string name)
    : max_k_(max_k), coeffs_(std::move(dense)), name_(std::move(name)) {}

JordanCurve JordanCurve::unchecked(const std::vector<FourierMode>& modes, std::string name) {
  int max_k = 0;
  auto dense = densify(modes, max_k);
  return JordanCurve(std::move(dense), max_k, std::move(name));
}

JordanCurve::JordanCurve(const std::vector<FourierMode>& modes, std::string name) {
  *this = unchecked(modes, std::move(name));
  if (enclosed_area(*this) < 0.0) {
    // Reverse the parameter: c_k <-> c_{-k}.
    std::reverse(coeffs_.begin(), coeffs_.end());
  }
  const double scale = std::max(1e-300, std::abs(coefficient(1)) + std::abs(coefficient(-1)));
  if (!(enclosed_area(*this) > 0.0)) {
    throw Error(ErrorCode::InvalidCurve, "curve '" + name_ + "' encloses no area");
  }
  if (!(min_speed(*this, 4096) > 1e-12 * scale)) {
    throw Error(ErrorCode::InvalidCurve, "curve '" + name_ + "' is not immersed");
  }
  if (!is_simple(*this)) {
    throw Error(ErrorCode::InvalidCurve, "curve '" + name_ + "' is not simple");
  }
}

Complex JordanCurve::coefficient(int k) const {
  if (std::abs(k) > max_k_) return {};
  return coeffs_[static_cast<std::size_t>(k + max_k_)];
}

std::vector<FourierMode> JordanCurve::modes() const {
  std::vector<FourierMode> out;
  for (int k = -max_k_; k <= max_k_; ++k) {
    const Complex c = coefficient(k);
    if (c != Complex{}) out.push_back({k, c});
  }
  return out;
}

Complex JordanCurve::eval(double s) const {
  const double er = std::cos(s), ei = std::sin(s);
  const Complex* c = coeffs_.data() + max_k_;
  double vr = c[0].real(), vi = c[0].imag();
  double pr = 1.0, pi = 0.0;
  for (int k = 1; k <= max_k_; ++k) {
    double nr, ni;
    cmul(pr, pi, er, ei, nr, ni);
    pr = nr;
    pi = ni;
    const Complex cp = c[k], cn = c[-k];
    // c_k p + c_{-k} conj(p)
    vr += cp.real() * pr - cp.imag() * pi + cn.real() * pr + cn.imag() * pi;
    vi += cp.real() * pi + cp.imag() * pr - cn.real() * pi + cn.imag() * pr;
  }
  return {vr, vi};
}

CurveJet JordanCurve::jet(double s) const {
  const double er = std::cos(s), ei = std::sin(s);
  const Complex* c = coeffs_.data() + max_k_;
  double vr = c[0].real(), vi = c[0].imag();
  double d1r = 0, d1i = 0, d2r = 0, d2i = 0;
  double pr = 1.0, pi = 0.0;
  for (int k = 1; k <= max_k_; ++k) {
    double nr, ni;
    cmul(pr, pi, er, ei, nr, ni);
    pr = nr;
    pi = ni;
    const Complex cp = c[k], cn = c[-k];
    const double posr = cp.real() * pr - cp.imag() * pi;
    const double posi = cp.real() * pi + cp.imag() * pr;
    const double negr = cn.real() * pr + cn.imag() * pi;
    const double negi = -cn.real() * pi + cn.imag() * pr;
    const double kd = k;
    vr += posr + negr;
    vi += posi + negi;
    d1r += kd * (posr - negr);
    d1i += kd * (posi - negi);
    d2r += kd * kd * (posr + negr);
    d2i += kd * kd * (posi + negi);
  }
  // d/ds exp(iks) = ik exp(iks)
  return {{vr, vi}, {-d1i, d1r}, {-d2r, -d2i}};
}

Complex JordanCurve::derivative(double s) const { return jet(s).d1; }

Complex JordanCurve::second_derivative(double s) const { return jet(s).d2; }

JordanCurve JordanCurve::transformed(Complex a, Complex b) const {
  std::vector<Complex> dense = coeffs_;
  for (auto& c : dense) c *= a;
  dense[static_cast<std::size_t>(max_k_)] += b;
  return JordanCurve(std::move(dense), max_k_, name_);
}

JordanCurve JordanCurve::reparametrized(double shift) const {
  std::vector<Complex> dense = coeffs_;
  for (int k = -max_k_; k <= max_k_; ++k) {
    dense[static_cast<std::size_t>(k + max_k_)] *= std::polar(1.0, k * shift);
  }
  return JordanCurve(std::move(dense), max_k_, name_);
}

JordanCurve JordanCurve::renamed(std::string name) const {
  return JordanCurve(coeffs_, max_k_, std::move(name));
}

std::vector<Complex> JordanCurve::sample(int n) const {
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = eval(kTwoPi * j / n);
  return out;
}

double enclosed_area(const JordanCurve& curve) {
  double acc = 0.0;
  for (int k = 1; k <= curve.max_frequency(); ++k) {
    acc += k * (std::norm(curve.coefficient(k)) - std::norm(curve.coefficient(-k)));
  }
  return kPi * acc;
}

double curve_radius(const JordanCurve& curve) {
  const int n = std::max(256, 8 * curve.max_frequency());
  const auto pts = curve.sample(n);

  // Coarse grid: best partner for every sample.
  std::vector<std::pair<double, std::pair<int, int>>> best;
  best.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double bd = -1.0;
    int bj = 0;
    for (int j = 0; j < n; ++j) {
      const double d = std::norm(pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]);
      if (d > bd) {
        bd = d;
        bj = j;
      }
    }
    best.push_back({bd, {i, bj}});
  }
  std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  // Local ascent of f(s,t) = |gamma(s) - gamma(t)|^2 from the top candidates.
  double result = std::sqrt(best.front().first);
  const int candidates = std::min<int>(16, static_cast<int>(best.size()));
  for (int c = 0; c < candidates; ++c) {
    double s = kTwoPi * best[static_cast<std::size_t>(c)].second.first / n;
    double t = kTwoPi * best[static_cast<std::size_t>(c)].second.second / n;
    for (int it = 0; it < 40; ++it) {
      const CurveJet a = curve.jet(s), b = curve.jet(t);
      const Complex d = a.value - b.value;
      const auto dot = [](Complex x, Complex y) { return x.real() * y.real() + x.imag() * y.imag(); };
      Eigen::Vector2d g(2 * dot(a.d1, d), -2 * dot(b.d1, d));
      Eigen::Matrix2d h;
      h(0, 0) = 2 * (dot(a.d2, d) + std::norm(a.d1));
      h(1, 1) = 2 * (-dot(b.d2, d) + std::norm(b.d1));
      h(0, 1) = h(1, 0) = -2 * dot(a.d1, b.d1);
      Eigen::Vector2d step;
      if (h.determinant() > 0 && h(0, 0) < 0) {
        step = -h.ldlt().solve(g);
      } else {
        step = 1e-2 * g;
      }
      if (step.norm() > 0.1) step *= 0.1 / step.norm();
      const double f0 = std::norm(d);
      double lambda = 1.0;
      bool moved = false;
      while (lambda > 1e-6) {
        const double s1 = s + lambda * step(0), t1 = t + lambda * step(1);
        if (std::norm(curve.eval(s1) - curve.eval(t1)) >= f0) {
          s = s1;
          t = t1;
          moved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!moved || lambda * step.norm() < 1e-14) break;
    }
    result = std::max(result, std::abs(curve.eval(s) - curve.eval(t)));
  }
  return 0.5 * result;
}

double curve_length(const JordanCurve& curve) {
  auto trapezoid = [&](int n) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += std::abs(curve.derivative(kTwoPi * j / n));
    return acc * kTwoPi / n;
  };
  int n = std::max(64, 4 * curve.max_frequency());
  double prev = trapezoid(n);
  for (int level = 0; level < 14; ++level) {
    n *= 2;
    const double next = trapezoid(n);
    if (std::abs(next - prev) <= 1e-12 * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

double min_speed(const JordanCurve& curve, int grid) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid; ++j) m = std::min(m, std::abs(curve.derivative(kTwoPi * j / grid)));
  return m;
}

namespace {

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  void add(Complex p) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  void add(const Box& b) {
    x0 = std::min(x0, b.x0);
    x1 = std::max(x1, b.x1);
    y0 = std::min(y0, b.y0);
    y1 = std::max(y1, b.y1);
  }
  bool overlaps(const Box& b) const {
    return x0 <= b.x1 && b.x0 <= x1 && y0 <= b.y1 && b.y0 <= y1;
  }
};

// Segment-range tree over the closed polyline pts[0..n), segment i = (i, i+1 mod n).
class CrossingFinder {
 public:
  explicit CrossingFinder(const std::vector<Complex>& pts) : pts_(pts), n_(static_cast<int>(pts.size())) {
    build(0, n_);
  }

  // Calls on_hit(i, j) for non-adjacent segment pairs whose segments intersect;
  // stops when on_hit returns true.
  template <class F>
  bool find(F&& on_hit) {
    return visit(0, 0, on_hit);
  }

 private:
  struct Node {
    int lo, hi;
    Box box;
    int left = -1, right = -1;
  };

  int build(int lo, int hi) {
    const int idx = static_cast<int>(nodes_.size());
    nodes_.push_back({lo, hi, {}, -1, -1});
    Box b;
    if (hi - lo <= kLeaf) {
      for (int i = lo; i < hi; ++i) {
        b.add(pts_[static_cast<std::size_t>(i)]);
        b.add(pts_[static_cast<std::size_t>((i + 1) % n_)]);
      }
    } else {
      const int mid = (lo + hi) / 2;
      const int l = build(lo, mid);
      const int r = build(mid, hi);
      nodes_[static_cast<std::size_t>(idx)].left = l;
      nodes_[static_cast<std::size_t>(idx)].right = r;
      b = nodes_[static_cast<std::size_t>(l)].box;
      b.add(nodes_[static_cast<std::size_t>(r)].box);
    }
    nodes_[static_cast<std::size_t>(idx)].box = b;
    return idx;
  }

  bool adjacent(int i, int j) const {
    const int d = std::abs(i - j);
    return d <= 1 || d == n_ - 1;
  }

  template <class F>
  bool visit(int a, int b, F& on_hit) {
    const Node& na = nodes_[static_cast<std::size_t>(a)];
    const Node& nb = nodes_[static_cast<std::size_t>(b)];
    if (!na.box.overlaps(nb.box)) return false;
    const bool leaf_a = na.left < 0, leaf_b = nb.left < 0;
    if (leaf_a && leaf_b) {
      for (int i = na.lo; i < na.hi; ++i) {
        for (int j = (a == b ? i + 1 : nb.lo); j < nb.hi; ++j) {
          if (adjacent(i, j)) continue;
          const Complex p0 = pts_[static_cast<std::size_t>(i)], p1 = pts_[static_cast<std::size_t>((i + 1) % n_)];
          const Complex q0 = pts_[static_cast<std::size_t>(j)], q1 = pts_[static_cast<std::size_t>((j + 1) % n_)];
          if (segments_intersect(p0, p1, q0, q1) && on_hit(i, j)) return true;
        }
      }
      return false;
    }
    if (a == b) {
      return visit(na.left, na.left, on_hit) || visit(na.left, na.right, on_hit) ||
             visit(na.right, na.right, on_hit);
    }
    if (!leaf_a && (leaf_b || (na.hi - na.lo) >= (nb.hi - nb.lo))) {
      return visit(na.left, b, on_hit) || visit(na.right, b, on_hit);
    }
    return visit(a, nb.left, on_hit) || visit(a, nb.right, on_hit);
  }

  static constexpr int kLeaf = 8;
  const std::vector<Complex>& pts_;
  int n_;
  std::vector<Node> nodes_;
};

}  // namespace

bool is_simple(const JordanCurve& curve) {
  const int n = std::max(2048, 32 * curve.max_frequency());
  const auto pts = curve.sample(n);
  const double h = kTwoPi / n;
  CrossingFinder finder(pts);
  const bool crossed = finder.find([&](int i, int j) {
    // Newton on gamma(s) - gamma(t) = 0 from the two segment midpoints.
    double s = (i + 0.5) * h, t = (j + 0.5) * h;
    for (int it = 0; it < 30; ++it) {
      const CurveJet a = curve.jet(s), b = curve.jet(t);
      const Complex r = a.value - b.value;
      if (std::abs(r) < 1e-10) break;
      Eigen::Matrix2d jac;
      jac << a.d1.real(), -b.d1.real(), a.d1.imag(), -b.d1.imag();
      const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(Eigen::Vector2d(-r.real(), -r.imag()));
      if (!step.allFinite()) break;
      s += step(0);
      t += step(1);
    }
    return std::abs(curve.eval(s) - curve.eval(t)) < 1e-10 && circular_distance(s, t) > 2 * h;
  });
  return !crossed;
}

double polygon_area(const PolygonCurve& polygon) {
  return signed_area(SampledLoop::from_path(polygon.vertices));
}

double polygon_perimeter(const PolygonCurve& polygon) {
  const auto& v = polygon.vertices;
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::abs(v[(i + 1) % v.size()] - v[i]);
  return acc;
}

bool polygon_is_simple(const PolygonCurve& polygon) {
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == v[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

JordanCurve smooth_approximate(const PolygonCurve& polygon, int mode_count, double smoothing) {
  if (mode_count < 8) throw Error(ErrorCode::InvalidArgument, "mode_count must be >= 8");
  if (!(smoothing > 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing must be positive");
  if (!polygon_is_simple(polygon)) {
    throw Error(ErrorCode::InvalidArgument, "polygon '" + polygon.name + "' is not simple");
  }
  std::vector<Complex> v = polygon.vertices;
  if (polygon_area(polygon) < 0.0) std::reverse(v.begin(), v.end());
  const std::size_t n = v.size();

  // Constant-speed knots s_j.
  std::vector<double> knots(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) knots[j + 1] = knots[j] + std::abs(v[(j + 1) % n] - v[j]);
  const double total = knots[n];
  for (auto& s : knots) s *= kTwoPi / total;

  // Exact Fourier coefficients of the piecewise-linear path:
  // c_k = 1/(2 pi k^2) * sum_j m_j (e^{-i k s_{j+1}} - e^{-i k s_j}), m_j the edge slope.
  std::vector<FourierMode> modes;
  Complex c0{};
  for (std::size_t j = 0; j < n; ++j) {
    c0 += (knots[j + 1] - knots[j]) * 0.5 * (v[j] + v[(j + 1) % n]);
  }
  modes.push_back({0, c0 / kTwoPi});
  for (int k = -mode_count; k <= mode_count; ++k) {
    if (k == 0) continue;
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const Complex slope = (v[(j + 1) % n] - v[j]) / (knots[j + 1] - knots[j]);
      acc += slope * (std::polar(1.0, -k * knots[j + 1]) - std::polar(1.0, -k * knots[j]));
    }
    const double kk = static_cast<double>(k) * k;
    modes.push_back({k, acc / (kTwoPi * kk) * std::exp(-smoothing * kk)});
  }

  const double target = std::abs(polygon_area(polygon));
  JordanCurve raw = JordanCurve::unchecked(modes);
  const double raw_area = enclosed_area(raw);
  if (!(raw_area > 0.0)) {
    throw Error(ErrorCode::NotSimpleAfterSmoothing, "smoothed polygon encloses no area");
  }
  const double lambda = std::sqrt(target / raw_area);
  for (auto& m : modes) {
    if (m.k != 0) m.c *= lambda;
  }
  std::string name = polygon.name.empty() ? std::string("smoothed") : polygon.name + "-smoothed";
  JordanCurve out = JordanCurve::unchecked(modes, name);
  const double scale = std::sqrt(target);
  if (!(min_speed(out, 4096) > 1e-9 * scale) || !is_simple(out)) {
    throw Error(ErrorCode::NotSimpleAfterSmoothing,
                "smoothing " + std::to_string(smoothing) + " is too small for polygon '" + polygon.name + "'");
  }
  return out;
}

}  // namespace peglab
