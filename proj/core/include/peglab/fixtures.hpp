#pragma once

#include <string>
#include <vector>

#include "peglab/curve.hpp"

namespace peglab::fixtures {

/// {c_1 = 1}.
JordanCurve unit_circle();
/// Semi-axes a (along x) and b: c_1 = (a+b)/2, c_-1 = (a-b)/2.
JordanCurve ellipse(double a, double b, std::string name = {});
/// Semi-axes (2, 1); area 2 pi, Rad 2.
JordanCurve ellipse21();
/// Fourier smoothing of square_polygon() with 64 modes and smoothing 1e-3,
/// pinned coefficient by coefficient.
JordanCurve smoothed_square();

/// Corners (+-1, +-1), counterclockwise from (1, 1).
PolygonCurve square_polygon();
/// Regular hexagon with circumradius 1.
PolygonCurve hexagon_polygon();

/// The curves run by the acceptance suite, in a fixed order.
std::vector<JordanCurve> acceptance_curves();
/// Lookup by name among the curves above; throws InvalidArgument.
JordanCurve by_name(const std::string& name);

}  // namespace peglab::fixtures
