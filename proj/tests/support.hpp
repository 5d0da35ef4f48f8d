#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "peglab/curve.hpp"
#include "peglab/inscribe.hpp"

namespace peglab::test {

// Square with a thin finger reaching in from the right side, smoothed.
inline PolygonCurve tentacle_polygon() {
  return {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, -0.12}, {-0.6, -0.12}, {-0.6, 0.12}, {1, 0.12}}, "tentacle"};
}

inline JordanCurve tentacle_curve() { return smooth_approximate(tentacle_polygon(), 256, 2e-4); }

// A non-circular, non-symmetric test curve.
inline JordanCurve blob() {
  return JordanCurve({{1, {1.0, 0.0}}, {-1, {0.2, 0.05}}, {2, {0.04, -0.03}}, {-2, {0.06, 0.0}}, {3, {0.0, 0.02}}},
                     "blob");
}

inline double max_vertex_gap(const InscribedRectangle& a, const InscribedRectangle& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.vertices[i] - b.vertices[i]));
  return d;
}

// Smallest distance from each point of `a` to the set `b`, maximised: the
// one-sided Hausdorff distance, computed by brute force.
inline double directed_hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0.0;
  for (const Complex p : a) {
    double best = 1e300;
    for (const Complex q : b) best = std::min(best, std::abs(p - q));
    worst = std::max(worst, best);
  }
  return worst;
}

inline std::vector<Complex> polygon_samples(const PolygonCurve& p, int per_side) {
  std::vector<Complex> out;
  const auto& v = p.vertices;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Complex a = v[k], b = v[(k + 1) % v.size()];
    for (int q = 0; q < per_side; ++q) out.push_back(a + (b - a) * (static_cast<double>(q) / per_side));
  }
  return out;
}

}  // namespace peglab::test
