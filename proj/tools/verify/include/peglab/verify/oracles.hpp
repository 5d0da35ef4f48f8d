#pragma once

// Brute-force references used to check the solvers. They share nothing with
// the library's root finders beyond curve evaluation.

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "peglab/curve.hpp"
#include "peglab/inscribe.hpp"

namespace peglab::oracle {

using ParamPoint = std::array<double, 2>;

/// Distance to a closed polyline, positive on the left of its direction
/// (inside, for a counterclockwise curve). Segments are bucketed on a grid.
class SignedDistance {
 public:
  SignedDistance(const std::vector<Complex>& polyline, double cell);
  /// Empty when no segment lies within cap of p.
  std::optional<double> operator()(Complex p, double cap) const;

 private:
  long long key(long long i, long long j) const { return (i << 32) ^ (j & 0xffffffffLL); }
  double cell_;
  std::unordered_map<long long, std::vector<std::pair<Complex, Complex>>> buckets_;
};

/// Zeros of a map from the n x n periodic grid to R^2, found on the
/// piecewise linear interpolant over two triangles per cell and returned in
/// grid units. Nodes with no value are holes. Roots closer than 1/4 cell are
/// merged.
std::vector<ParamPoint> grid_roots(int n, const std::vector<std::optional<std::array<double, 2>>>& values);

/// Ordered pairs (s, t) whose rotation by -theta lands both points on the
/// curve: every generator, including swapped and other-diagonal ones.
/// Signed distances to a polyline of polyline_n points, grid n x n, pairs
/// with |z - w| < 0.1 Rad skipped.
std::vector<ParamPoint> rectangle_roots(const JordanCurve& curve, double theta, int n = 512, int polyline_n = 16384);

/// Ordered binormal pairs as zeros of the two tangent-chord inner products.
std::vector<ParamPoint> binormal_roots(const JordanCurve& curve, int n = 1024);

/// The widest inscribed theta-rectangle of a polygon, found by pairing
/// samples (per_side per edge, corners included) as one diagonal and asking
/// the rotated diagonal to land within tolerance of the boundary. Vertices
/// are in the order z', z, w', w.
std::optional<std::array<Complex, 4>> widest_polygon_rectangle(const PolygonCurve& polygon, double theta,
                                                               int per_side = 256);

struct MatchReport {
  int oracle_count = 0;
  int solver_count = 0;
  /// Oracle points with no solver point within radius, or more than one.
  int oracle_unmatched = 0;
  int solver_unmatched = 0;
  /// Largest distance from an oracle point to its nearest solver point.
  double worst = 0.0;
  bool exact() const { return oracle_unmatched == 0 && solver_unmatched == 0 && oracle_count == solver_count; }
};

/// One-to-one comparison in the circular max-distance on the torus.
MatchReport match_points(const std::vector<ParamPoint>& oracle, const std::vector<ParamPoint>& solver, double radius);

struct CoverageReport {
  /// Oracle points with no solver point in the same or a neighbouring bin.
  int uncovered = 0;
  /// Solver points with no oracle point within radius.
  int unsupported = 0;
  bool ok() const { return uncovered == 0 && unsupported == 0; }
};

/// Comparison for Morse-Bott families, where the solver keeps one
/// representative per bin of a bins x bins partition of the torus.
CoverageReport cover_points(const std::vector<ParamPoint>& oracle, const std::vector<ParamPoint>& solver, int bins,
                            double radius);

/// (s, t) and (t, s) of every rectangle.
std::vector<ParamPoint> ordered_pairs(const std::vector<InscribedRectangle>& rects);

}  // namespace peglab::oracle
