#include "peglab/fixtures.hpp"

#include <cmath>

#include "peglab/error.hpp"

namespace peglab::fixtures {

JordanCurve unit_circle() { return JordanCurve({{1, {1.0, 0.0}}}, "circle"); }

JordanCurve ellipse(double a, double b, std::string name) {
  return JordanCurve({{-1, {(a - b) / 2.0, 0.0}}, {1, {(a + b) / 2.0, 0.0}}}, std::move(name));
}

JordanCurve ellipse21() { return ellipse(2.0, 1.0, "ellipse21"); }

JordanCurve smoothed_square() {
  static const std::vector<FourierMode> modes = {
#include "smoothed_square_modes.inc"
  };
  return JordanCurve(modes, "smoothed_square");
}

PolygonCurve square_polygon() { return {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}, "square"}; }

PolygonCurve hexagon_polygon() {
  PolygonCurve p{{}, "hexagon"};
  for (int j = 0; j < 6; ++j) p.vertices.push_back(std::polar(1.0, kPi * j / 3.0));
  return p;
}

std::vector<JordanCurve> acceptance_curves() { return {unit_circle(), ellipse21(), smoothed_square()}; }

JordanCurve by_name(const std::string& name) {
  if (name == "circle") return unit_circle();
  if (name == "ellipse21") return ellipse21();
  if (name == "smoothed_square") return smoothed_square();
  throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "'");
}

}  // namespace peglab::fixtures
