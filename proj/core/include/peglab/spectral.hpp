#pragma once

#include <string>
#include <vector>

#include "peglab/sweep.hpp"

namespace peglab {

struct SpectralSample {
  double theta = 0.0;
  double value = 0.0;
  int branch_id = -1;
};

struct SpectralReport {
  double max_decrease = 0.0;
  bool monotone = true;
  double max_slope = 0.0;
  bool lipschitz = true;
  double min_value = 0.0;
  double max_value = 0.0;
  bool bounded = true;
  /// Slopes to the endpoint values 0 at theta = 0 and Area at theta = pi.
  bool endpoints = true;
  bool passed() const { return monotone && lipschitz && bounded && endpoints; }
};

struct SpectralOptions {
  /// Adjacent decreases above this fraction of the area are not allowed.
  double monotone_tol = 1e-4;
  double slope_slack = 1e-2;
  /// Penalty weights. The endpoint terms measure how far the first and last
  /// samples are from being reachable from (0, 0) and (pi, Area) at slope Rad^2.
  double weight_monotone = 1.0;
  double weight_lipschitz = 1.0;
  double weight_endpoint = 1.0;
  /// Two paths whose penalties differ by less than this fraction of the area
  /// are treated as tied; ties go to the pointwise smaller values.
  double tie_tol = 1e-9;
};

/// Interior samples on the diagram's theta grid. The endpoints 0 -> 0 and
/// pi -> area are implicit.
struct SpectralFunction {
  std::vector<SpectralSample> samples;
  double area = 0.0;
  double rad = 0.0;
  double penalty = 0.0;
  /// Always "candidate": the value is selected from the action spectrum, not
  /// computed from Floer data.
  std::string status = "candidate";
  SpectralReport validation;

  /// Samples with the two endpoints added.
  std::vector<SpectralSample> extended() const;
};

/// Minimal-penalty path through the diagram nodes, one node per grid theta.
/// Throws EmptySpectrum for an empty grid, and NoAdmissiblePath when a grid
/// theta has no action in [0, area] or every path has an adjacent decrease
/// above monotone_tol * area.
SpectralFunction select_spectral_function(const SpectrumDiagram& diagram, const SpectralOptions& options = {});

SpectralReport validate_properties(const SpectralFunction& f, double area, double rad,
                                   const SpectralOptions& options = {});

struct InscriptionInterval {
  double a = 0.0;
  double b = 0.0;
  double epsilon = 0.0;
  /// (area - 2 epsilon) / rad^2.
  double bound = 0.0;
  /// Largest grid step, the resolution of the interpolated a and b.
  double slack = 0.0;
  bool meets_bound = false;
  double length() const { return b - a; }
};

/// a = inf{theta : f >= epsilon}, b = sup{theta : f <= area - epsilon} on the
/// piecewise linear interpolant of the extended samples. Throws IntervalEmpty
/// when a >= b.
InscriptionInterval inscription_interval(const SpectralFunction& f, double epsilon);

/// inscription_interval for epsilon = area * fraction, fractions running
/// geometrically from start_fraction down to end_fraction.
std::vector<InscriptionInterval> epsilon_sweep(const SpectralFunction& f, double start_fraction = 0.25,
                                               double end_fraction = 1e-3, int steps = 9);

}  // namespace peglab
