#pragma once

#include <array>
#include <optional>
#include <vector>

#include "peglab/curve.hpp"

namespace peglab {

/// Parameters (s, t, s2, t2) of an ordered generator: R_theta(gamma(s2), gamma(t2)) = (gamma(s), gamma(t)).
using Quad = std::array<double, 4>;

struct InscribedRectangle {
  double theta = 0.0;
  Quad params{};
  /// z', z, w', w: counterclockwise for theta in (0, pi).
  std::array<Complex, 4> vertices{};
  Complex center;
  double rad = 0.0;
  double residual = 0.0;
  /// Condition number of the 4x4 parameter Jacobian at the solution.
  double condition = 1.0;
  /// Set when condition > 1e10 (Morse-Bott families such as the circle).
  bool degenerate = false;

  Complex z() const { return vertices[1]; }
  Complex w() const { return vertices[3]; }
  Complex z2() const { return vertices[0]; }
  Complex w2() const { return vertices[2]; }
};

/// Real and imaginary parts of R_theta(gamma(s2), gamma(t2)) - (gamma(s), gamma(t)).
std::array<double, 4> rectangle_residual(const JordanCurve& curve, double theta, const Quad& params);

/// Max-norm of rectangle_residual.
double residual_norm(const JordanCurve& curve, double theta, const Quad& params);

/// Fills every derived field from the parameters (no solving).
InscribedRectangle make_rectangle(const JordanCurve& curve, double theta, const Quad& params);

/// Damped Newton at fixed theta from a parameter guess; nullopt if it does
/// not reach residual <= tol within 50 iterations.
std::optional<InscribedRectangle> refine_rectangle(const JordanCurve& curve, double theta, const Quad& guess,
                                                   double tol = 1e-10);

/// (t, s, t2, s2): the same generator read with z and w exchanged.
Quad swap_generator(const Quad& q);
/// (s2, t2, t, s): the generator built on the other diagonal. It solves the
/// same system only when theta = pi/2.
Quad partner_generator(const Quad& q);
/// Largest circular distance between corresponding entries.
double quad_distance(const Quad& a, const Quad& b);
/// quad_distance modulo the swap symmetry.
double generator_distance(const Quad& a, const Quad& b);
/// Wraps into [0, 2pi)^4 and swaps so that s < t.
Quad canonical_generator(const Quad& q);

struct FindOptions {
  /// Keep the other-diagonal generator of a rectangle as a separate entry.
  bool include_partner = false;
  /// Reduce degenerate (Morse-Bott) solutions to one per (s, t) bin.
  bool thin_families = true;
  int family_bins = 32;
};

/// Multi-start Newton over a grid_n x grid_n seed grid. Results are in
/// canonical form (s < t), deduplicated, and sorted by parameters.
std::vector<InscribedRectangle> find_rectangles(const JordanCurve& curve, double theta, int grid_n = 64,
                                                double tol = 1e-10, const FindOptions& options = {});

struct Binormal {
  std::array<double, 2> params{};
  double chord_length = 0.0;
  /// Negative eigenvalues of the Hessian of |gamma(s) - gamma(t)|^2 / 2.
  int morse_index = 0;
  /// Hessian determinant below 1e-12 (scaled by rad^4).
  bool degenerate = false;
  double residual = 0.0;
};

/// Critical points of the chord length off the diagonal, both orders listed.
std::vector<Binormal> find_binormals(const JordanCurve& curve, int grid_n = 64, double tol = 1e-10);

/// Smallest diagonal seen over a theta grid of inscribed rectangles and over
/// the binormal chords (the theta -> 0 limit). Throws EmptySpectrum.
double estimate_width(const JordanCurve& curve, int theta_steps = 32);

}  // namespace peglab
