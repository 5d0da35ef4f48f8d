#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peglab/action.hpp"
#include "peglab/curve.hpp"
#include "peglab/inscribe.hpp"

namespace peglab {

struct TrackedRectangle {
  InscribedRectangle rect;
  double action = 0.0;
  double diameter = 0.0;
};

struct ApproximationLevel {
  int level = 0;
  double smoothing = 0.0;
  int mode_count = 0;
  double area = 0.0;
  double length = 0.0;
  double rad = 0.0;
  int found = 0;
  /// Rectangles with action in (epsilon, area - epsilon).
  int filtered = 0;
  /// Largest filtered rectangle; empty when nothing passes the filter.
  std::optional<TrackedRectangle> best;
  /// Hausdorff distance between this level's vertices and the previous
  /// level's; negative when either is missing.
  double vertex_gap = -1.0;
};

struct ApproximationRun {
  PolygonCurve target;
  double theta = 0.0;
  double epsilon = 0.0;
  double polygon_area = 0.0;
  double polygon_perimeter = 0.0;
  std::vector<JordanCurve> approximants;
  std::vector<ApproximationLevel> levels;

  double max_area_error = 0.0;
  double max_length_ratio = 0.0;
  double min_diameter = 0.0;
  /// Every level has a filtered rectangle with diameter >= diameter_floor.
  bool diameters_bounded = false;
  double diameter_floor = 0.0;
  /// vertex_gap at level j (j >= 2) stays below factor * gap(1) * 2^-(j-1).
  bool cauchy = false;
  std::vector<std::string> log;
};

struct ShrinkoutOptions {
  double initial_smoothing = 4e-3;
  double smoothing_ratio = 0.25;
  /// Modes kept: enough that exp(-smoothing k^2) < exp(-30), within these limits.
  int min_modes = 64;
  int max_modes = 1024;
  int grid_n = 64;
  double tol = 1e-10;
  /// diameter_floor = this times the polygon's radius.
  double floor_fraction = 1e-2;
  double cauchy_factor = 4.0;
  ActionOptions action;
};

int mode_count_for(double smoothing, const ShrinkoutOptions& options = {});

/// Smooths the polygon at geometrically decreasing smoothing and tracks the
/// largest action-filtered theta-rectangle at each level. A level with no
/// filtered rectangle is logged, not thrown.
ApproximationRun approximate_and_track(const PolygonCurve& polygon, double theta, int levels, double epsilon,
                                       const ShrinkoutOptions& options = {});

/// Area bound length * r / 2 for a curve of the given length inside a disk of
/// radius r.
double disk_area_bound(double length_bound, double disk_radius);

/// Among the degenerate family through rect (one member per value of s near
/// rect.params[0]), the member with the largest diagonal; golden-section
/// search over s in [s - half_width, s + half_width].
InscribedRectangle widest_family_member(const JordanCurve& curve, const InscribedRectangle& rect,
                                        double half_width, double tol = 1e-10);

}  // namespace peglab
