#pragma once

#include <string>
#include <vector>

#include "peglab/geom.hpp"

namespace peglab {

struct FourierMode {
  int k = 0;
  Complex c;
};

/// Value and first two parameter derivatives at one point of a curve.
struct CurveJet {
  Complex value;
  Complex d1;
  Complex d2;
};

/// A real analytic Jordan curve gamma(s) = sum_k c_k exp(i k s), s in [0, 2pi).
///
/// The checking constructor canonicalizes orientation to counterclockwise
/// (reversing the parameter when the signed area is negative) and rejects
/// curves that are not immersed or not simple. Values are immutable.
class JordanCurve {
 public:
  JordanCurve(const std::vector<FourierMode>& modes, std::string name = {});

  /// Builds the trigonometric polynomial as given, with no orientation fix and
  /// no validation. Used to probe arbitrary polynomials (e.g. with is_simple).
  static JordanCurve unchecked(const std::vector<FourierMode>& modes, std::string name = {});

  Complex eval(double s) const;
  Complex derivative(double s) const;
  Complex second_derivative(double s) const;
  CurveJet jet(double s) const;

  /// Largest |k| with storage; coefficients outside are zero.
  int max_frequency() const noexcept { return max_k_; }
  Complex coefficient(int k) const;
  /// Nonzero modes in increasing k.
  std::vector<FourierMode> modes() const;
  const std::string& name() const noexcept { return name_; }

  /// Image under the similarity z -> a*z + b (a != 0). Orientation is kept
  /// because a similarity with complex a preserves it.
  JordanCurve transformed(Complex a, Complex b) const;
  /// gamma(s + shift): same point set, shifted parameter origin.
  JordanCurve reparametrized(double shift) const;
  JordanCurve renamed(std::string name) const;

  /// n uniformly spaced samples gamma(2 pi j / n).
  std::vector<Complex> sample(int n) const;

 private:
  JordanCurve(std::vector<Complex> dense, int max_k, std::string name);
  static std::vector<Complex> densify(const std::vector<FourierMode>& modes, int& max_k);

  int max_k_ = 0;
  std::vector<Complex> coeffs_;  // index k + max_k_
  std::string name_;
};

/// Closed polygon, vertices in order; the closing edge is implicit.
struct PolygonCurve {
  std::vector<Complex> vertices;
  std::string name;
};

/// Signed area via the closed-form pi * sum_k k |c_k|^2 (counterclockwise > 0).
double enclosed_area(const JordanCurve& curve);

/// Half the diameter, max_{s,t} |gamma(s) - gamma(t)| / 2.
double curve_radius(const JordanCurve& curve);

/// Arc length by the periodic trapezoid rule, refined until relative change < 1e-12.
double curve_length(const JordanCurve& curve);

/// False when two parameter values, bounded away from each other, map to the
/// same point. Sampled polyline crossings found by box subdivision are
/// confirmed by Newton on gamma(s) = gamma(t).
bool is_simple(const JordanCurve& curve);

/// Minimum of |gamma'| over a uniform grid of the given size.
double min_speed(const JordanCurve& curve, int grid = 4096);

double polygon_area(const PolygonCurve& polygon);
double polygon_perimeter(const PolygonCurve& polygon);
/// At least 3 vertices, consecutive vertices distinct, no crossing edges.
bool polygon_is_simple(const PolygonCurve& polygon);

/// Fourier smoothing of a simple polygon: constant-speed parametrization,
/// truncation to |k| <= mode_count with damping exp(-smoothing * k^2), then a
/// homothety about c_0 so that the enclosed area equals the polygon's.
/// Throws NotSimpleAfterSmoothing if the result is not a Jordan curve.
JordanCurve smooth_approximate(const PolygonCurve& polygon, int mode_count, double smoothing);

}  // namespace peglab
