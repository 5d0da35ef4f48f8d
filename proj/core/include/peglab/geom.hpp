#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace peglab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point (z, w) of C^2. The diagonal is the locus z == w.
struct PointPair {
  Complex z;
  Complex w;
};

/// Rotation of C^2 by theta about the diagonal: the midpoint (z+w)/2 is kept
/// and the half-difference (z-w)/2 is multiplied by exp(i*theta). This is the
/// time-theta flow of H(z,w) = |z-w|^2 / 4.
PointPair rot_theta(PointPair p, double theta);

/// The difference coordinate z - w; zero exactly on the diagonal.
Complex diff_projection(PointPair p);

/// Closed polygonal loop; the closing edge from back() to front() is implicit.
class SampledLoop {
 public:
  /// Throws InvalidArgument unless there are at least 3 points and consecutive
  /// points (including last/first) are distinct.
  explicit SampledLoop(std::vector<Complex> points);

  /// Drops consecutive duplicates (and a repeated closing point) first.
  static SampledLoop from_path(std::span<const Complex> path);

  const std::vector<Complex>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  std::vector<Complex> points_;
};

/// Total argument change of (p - center) around the loop divided by 2*pi.
/// Throws CenterOnLoop if a sample lies within 1e-9 of the center.
int winding_number(const SampledLoop& loop, Complex center);

/// Shoelace area, counterclockwise positive.
double signed_area(const SampledLoop& loop);

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double a);

/// Distance on the circle R / 2piZ, in [0, pi].
double circular_distance(double a, double b);

/// Symmetric Hausdorff distance between two finite point sets.
double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

/// Winding-number point-in-polygon test: true when the loop winds around p.
bool point_in_loop(std::span<const Complex> loop, Complex p);

/// Proper or touching intersection of closed segments [a,b] and [c,d].
bool segments_intersect(Complex a, Complex b, Complex c, Complex d);

}  // namespace peglab
