#include "peglab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "peglab/error.hpp"

namespace peglab {

PointPair rot_theta(PointPair p, double theta) {
  const Complex mid = 0.5 * (p.z + p.w);
  const Complex half = 0.5 * (p.z - p.w) * std::polar(1.0, theta);
  return {mid + half, mid - half};
}

Complex diff_projection(PointPair p) { return p.z - p.w; }

SampledLoop::SampledLoop(std::vector<Complex> points) : points_(std::move(points)) {
  if (points_.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "sampled loop needs at least 3 points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == points_[(i + 1) % points_.size()]) {
      throw Error(ErrorCode::InvalidArgument, "sampled loop has repeated consecutive points");
    }
  }
}

SampledLoop SampledLoop::from_path(std::span<const Complex> path) {
  std::vector<Complex> pts;
  pts.reserve(path.size());
  for (const Complex& p : path) {
    if (pts.empty() || pts.back() != p) pts.push_back(p);
  }
  while (pts.size() > 1 && pts.back() == pts.front()) pts.pop_back();
  return SampledLoop(std::move(pts));
}

int winding_number(const SampledLoop& loop, Complex center) {
  const auto& pts = loop.points();
  for (const Complex& p : pts) {
    if (std::abs(p - center) <= 1e-9) {
      throw Error(ErrorCode::CenterOnLoop, "loop sample within 1e-9 of the winding center");
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex a = pts[i] - center;
    const Complex b = pts[(i + 1) % pts.size()] - center;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

double signed_area(const SampledLoop& loop) {
  const auto& pts = loop.points();
  // Shift to the first point to keep the cross products well conditioned.
  const Complex o = pts.front();
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex a = pts[i] - o;
    const Complex b = pts[(i + 1) % pts.size()] - o;
    acc += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * acc;
}

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double circular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
  auto directed = [](std::span<const Complex> from, std::span<const Complex> to) {
    double worst = 0.0;
    for (const Complex& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Complex& q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

bool point_in_loop(std::span<const Complex> loop, Complex p) {
  double total = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Complex a = loop[i] - p;
    const Complex b = loop[(i + 1) % loop.size()] - p;
    if (a == 0.0 || b == 0.0) return false;
    total += std::arg(b / a);
  }
  return std::lround(total / kTwoPi) != 0;
}

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

}  // namespace

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(d - c, a - c);
  const double d2 = cross(d - c, b - c);
  const double d3 = cross(b - a, c - a);
  const double d4 = cross(b - a, d - a);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

}  // namespace peglab
