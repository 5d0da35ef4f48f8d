#pragma once

#include <vector>

#include "peglab/curve.hpp"
#include "peglab/inscribe.hpp"

namespace peglab {

/// Monotone reparametrization B of the flow time, B(0) = 0 and B(1) = 1.
enum class SpeedProfile {
  Uniform,
  /// Smooth step that is flat on [0, 0.1] and [0.9, 1].
  Bump,
};

double profile_value(SpeedProfile profile, double u);

/// rot_theta((z', w'), theta * B(u)) for u = j / (samples - 1).
std::vector<PointPair> build_trajectory(const InscribedRectangle& rect, int samples,
                                        SpeedProfile profile = SpeedProfile::Uniform);

/// Linear parameter paths a(r) = a0 + r*da, b(r) = b0 + r*db on the curve,
/// running from (s, t) to (s2, t2).
struct BoundaryPath {
  double a0 = 0.0;
  double da = 0.0;
  double b0 = 0.0;
  double db = 0.0;
};

enum class CappingPath {
  /// Shorter parameter interval for a; b follows in the same direction.
  Shortest,
  /// Both parameter paths run the long way round. Differs from Shortest by
  /// one core loop; used to exercise the winding correction.
  Reversed,
};

struct CappedTrajectory {
  InscribedRectangle rect;
  std::vector<PointPair> arc_samples;
  BoundaryPath path;
  std::vector<PointPair> boundary_samples;
  /// Winding of z - w around 0 along the uncorrected loop; the same number of
  /// backward core loops is appended, so the corrected winding is 0.
  int winding_correction = 0;
  /// Smallest |z - w| over the sampled trajectory and boundary path.
  double min_diagonal_distance = 0.0;
};

/// Throws DiagonalHit when no same-direction path keeps away from the diagonal.
CappedTrajectory build_capping(const JordanCurve& curve, const InscribedRectangle& rect, int samples = 2048,
                               CappingPath kind = CappingPath::Shortest,
                               SpeedProfile profile = SpeedProfile::Uniform);

/// The loop z - w along trajectory, boundary path and the appended core loops.
std::vector<Complex> corrected_difference_loop(const JordanCurve& curve, const CappedTrajectory& capped);

struct ActionOptions {
  int initial_samples = 256;
  int max_samples = 1 << 16;
  /// Agreement between consecutive extrapolated values, relative to max(1, rad^2).
  double tol = 1e-11;
  SpeedProfile profile = SpeedProfile::Uniform;
  CappingPath path = CappingPath::Shortest;
};

struct ActionValue {
  double value = 0.0;
  double term_hamiltonian = 0.0;
  double term_area = 0.0;
  int winding_correction = 0;
  int samples_used = 0;
};

/// theta * rad^2 minus the corrected capping area. The shoelace areas of the
/// two projected loops are refined by doubling with Richardson extrapolation.
ActionValue action_value(const JordanCurve& curve, const InscribedRectangle& rect, const ActionOptions& options = {});

/// Sum of the two regions bounded by the segments center -> z', the curve arc
/// z' -> z, and z -> center (and likewise for w', w). Throws NotElegant.
double ice_cream_area(const JordanCurve& curve, const InscribedRectangle& rect);

/// Vertex parameters in cyclic order s2, s, t2, t and the four arc-plus-side
/// loops simple, mutually exterior and free of the other vertices.
bool is_elegant(const JordanCurve& curve, const InscribedRectangle& rect);

}  // namespace peglab
