#include "peglab/shrinkout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "peglab/error.hpp"
#include "rect_system.hpp"

namespace peglab {

int mode_count_for(double smoothing, const ShrinkoutOptions& options) {
  const int k = static_cast<int>(std::ceil(std::sqrt(30.0 / smoothing)));
  return std::clamp(k, options.min_modes, options.max_modes);
}

double disk_area_bound(double length_bound, double disk_radius) {
  if (!(length_bound > 0.0) || !(disk_radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "disk_area_bound needs positive inputs");
  }
  return length_bound * disk_radius / 2.0;
}

namespace {

using detail::Mat45;
using detail::Vec4;

// Unit tangent of the family in parameter space, oriented so that ds > 0.
Eigen::Vector4d family_tangent(const JordanCurve& curve, double theta, const Quad& q) {
  Vec4 r;
  Mat45 jac;
  detail::rectangle_system(curve, theta, q, r, &jac);
  const Eigen::Matrix4d jp = jac.rightCols<4>();
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(jp, Eigen::ComputeFullV);
  Eigen::Vector4d v = svd.matrixV().col(3);
  if (v(0) < 0.0) v = -v;
  return v;
}

// Newton in (t, s2, t2) with s held fixed.
std::optional<Quad> member_at(const JordanCurve& curve, double theta, double s, Quad q, double tol) {
  q[0] = s;
  for (int it = 0; it < 40; ++it) {
    Vec4 r;
    Mat45 jac;
    detail::rectangle_system(curve, theta, q, r, &jac);
    const double res = r.cwiseAbs().maxCoeff();
    const Eigen::Matrix<double, 4, 3> j3 = jac.rightCols<3>();
    const Eigen::VectorXd dx = detail::pinv_solve(j3, -r);
    const double step = dx.cwiseAbs().maxCoeff();
    const double scale = std::min(1.0, 0.5 / std::max(step, 1e-300));
    for (int k = 0; k < 3; ++k) q[k + 1] += scale * dx(k);
    if (res <= tol && step < 1e-12) return q;
  }
  if (residual_norm(curve, theta, q) <= tol) return q;
  return std::nullopt;
}

}  // namespace

InscribedRectangle widest_family_member(const JordanCurve& curve, const InscribedRectangle& rect, double half_width,
                                        double tol) {
  if (!rect.degenerate) return rect;
  const double theta = rect.theta;
  const double s0 = rect.params[0];

  struct Solved {
    double s;
    Quad q;
    double rad;
  };
  std::vector<Solved> cache{{s0, rect.params, rect.rad}};

  auto evaluate = [&](double s) {
    const Solved* near = &cache.front();
    for (const auto& c : cache) {
      if (std::abs(c.s - s) < std::abs(near->s - s)) near = &c;
    }
    const Eigen::Vector4d v = family_tangent(curve, theta, near->q);
    Quad guess = near->q;
    if (std::abs(v(0)) > 1e-8) {
      const double h = (s - near->s) / v(0);
      for (int k = 0; k < 4; ++k) guess[k] += h * v(k);
    }
    const auto q = member_at(curve, theta, s, guess, tol);
    if (!q) return -1.0;
    const double rad = std::abs(curve.eval((*q)[0]) - curve.eval((*q)[1])) / 2.0;
    cache.push_back({s, *q, rad});
    return rad;
  };

  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = s0 - half_width;
  double hi = s0 + half_width;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = evaluate(x1);
  double f2 = evaluate(x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = evaluate(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = evaluate(x1);
    }
  }
  const auto best = std::max_element(cache.begin(), cache.end(),
                                     [](const Solved& a, const Solved& b) { return a.rad < b.rad; });
  InscribedRectangle out = make_rectangle(curve, theta, best->q);
  return out.residual <= tol ? out : rect;
}

ApproximationRun approximate_and_track(const PolygonCurve& polygon, double theta, int levels, double epsilon,
                                       const ShrinkoutOptions& options) {
  if (!polygon_is_simple(polygon)) throw Error(ErrorCode::InvalidCurve, "polygon is not simple");
  if (levels < 3) throw Error(ErrorCode::InvalidArgument, "at least 3 levels are required");
  if (!(theta > 0.0 && theta < kPi)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, pi)");

  ApproximationRun run;
  run.target = polygon;
  run.theta = theta;
  run.epsilon = epsilon;
  run.polygon_area = std::abs(polygon_area(polygon));
  run.polygon_perimeter = polygon_perimeter(polygon);
  if (!(epsilon > 0.0 && epsilon < run.polygon_area / 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, area/2)");
  }

  double poly_rad = 0.0;
  for (const auto& a : polygon.vertices) {
    for (const auto& b : polygon.vertices) poly_rad = std::max(poly_rad, std::abs(a - b) / 2.0);
  }
  run.diameter_floor = options.floor_fraction * poly_rad;
  run.min_diameter = std::numeric_limits<double>::infinity();
  run.diameters_bounded = true;

  double smoothing = options.initial_smoothing;
  std::optional<std::array<Complex, 4>> prev_vertices;
  for (int j = 0; j < levels; ++j, smoothing *= options.smoothing_ratio) {
    ApproximationLevel lv;
    lv.level = j;
    lv.smoothing = smoothing;
    lv.mode_count = mode_count_for(smoothing, options);
    run.approximants.push_back(smooth_approximate(polygon, lv.mode_count, smoothing));
    const JordanCurve& curve = run.approximants.back();
    lv.area = enclosed_area(curve);
    lv.length = curve_length(curve);
    lv.rad = curve_radius(curve);
    run.max_area_error = std::max(run.max_area_error, std::abs(lv.area - run.polygon_area));
    run.max_length_ratio = std::max(run.max_length_ratio, lv.length / run.polygon_perimeter);

    FindOptions find;
    const auto rects = find_rectangles(curve, theta, options.grid_n, options.tol, find);
    lv.found = static_cast<int>(rects.size());
    for (const auto& r : rects) {
      const double action = action_value(curve, r, options.action).value;
      if (!(action > epsilon && action < lv.area - epsilon)) continue;
      ++lv.filtered;
      const double diameter = 2.0 * r.rad;
      if (!lv.best || diameter > lv.best->diameter) lv.best = TrackedRectangle{r, action, diameter};
    }

    if (lv.best && lv.best->rect.degenerate) {
      const double width = kTwoPi / find.family_bins;
      const InscribedRectangle wide = widest_family_member(curve, lv.best->rect, width, options.tol);
      const double action = action_value(curve, wide, options.action).value;
      if (action > epsilon && action < lv.area - epsilon && wide.rad > lv.best->rect.rad) {
        lv.best = TrackedRectangle{wide, action, 2.0 * wide.rad};
      }
    }

    std::ostringstream note;
    note << "level " << j << ": smoothing " << smoothing << ", " << lv.mode_count << " modes, " << lv.found
         << " rectangles, " << lv.filtered << " filtered";
    if (!lv.best) {
      note << " (no filtered rectangle)";
      run.diameters_bounded = false;
      prev_vertices.reset();
    } else {
      run.min_diameter = std::min(run.min_diameter, lv.best->diameter);
      if (lv.best->diameter < run.diameter_floor) run.diameters_bounded = false;
      if (prev_vertices) {
        lv.vertex_gap = hausdorff_distance(*prev_vertices, lv.best->rect.vertices);
      }
      prev_vertices = lv.best->rect.vertices;
    }
    run.log.push_back(note.str());
    run.levels.push_back(lv);
  }

  run.cauchy = levels >= 2 && run.levels[1].vertex_gap >= 0.0;
  if (run.cauchy) {
    const double g1 = run.levels[1].vertex_gap;
    for (int j = 2; j < levels; ++j) {
      const double g = run.levels[j].vertex_gap;
      if (g < 0.0 || g > options.cauchy_factor * g1 * std::pow(0.5, j - 1)) run.cauchy = false;
    }
  }
  if (!std::isfinite(run.min_diameter)) run.min_diameter = 0.0;
  return run;
}

}  // namespace peglab
