#include "peglab/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "peglab/action.hpp"
#include "peglab/error.hpp"
#include "peglab/fixtures.hpp"
#include "peglab/shrinkout.hpp"
#include "peglab/verify/oracles.hpp"

namespace peglab::verify {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed checks; the criterion passes when none were recorded.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_.size() < 6) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool passed() const { return failed_ == 0; }
  std::string detail() const {
    std::ostringstream s;
    if (failed_ == 0) {
      s << count_ << " checks";
    } else {
      s << failed_ << " of " << count_ << " checks failed";
    }
    for (const auto& n : notes_) s << "; " << n;
    for (const auto& f : failures_) s << "; FAILED " << f;
    return s.str();
  }

 private:
  int count_ = 0;
  int failed_ = 0;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

std::string fmt(double x, const char* spec = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

template <class Body>
CriterionResult run_criterion(int number, std::string title, double time_limit, Body&& body) {
  CriterionResult r;
  r.number = number;
  r.title = std::move(title);
  const auto t0 = Clock::now();
  Checks checks;
  double charged = 0.0;
  try {
    body(checks, charged);
  } catch (const std::exception& e) {
    checks.expect(false, std::string("exception: ") + e.what());
  }
  r.seconds = since(t0) + charged;
  if (time_limit > 0.0) {
    checks.expect(r.seconds <= time_limit, "runtime " + fmt(r.seconds, "%.1f") + " s over " + fmt(time_limit, "%.0f") + " s");
  }
  r.passed = checks.passed();
  r.detail = checks.detail();
  return r;
}

const char* const kAcceptanceFixtures[] = {"circle", "ellipse21", "smoothed_square"};

}  // namespace

AcceptanceSuite::AcceptanceSuite(AcceptanceOptions options) : options_(options) {}

const AcceptanceSuite::SweepRecord& AcceptanceSuite::sweep(const std::string& fixture) {
  auto it = sweeps_.find(fixture);
  if (it != sweeps_.end()) return it->second;
  const auto t0 = Clock::now();
  JordanCurve curve = fixtures::by_name(fixture);
  SpectrumDiagram diagram = sweep_spectrum(curve, options_.theta_min, options_.theta_max, options_.sweep_steps);
  SpectralFunction ell = select_spectral_function(diagram);
  SweepRecord rec{std::move(curve), std::move(diagram), std::move(ell), since(t0)};
  return sweeps_.emplace(fixture, std::move(rec)).first->second;
}

const std::vector<AcceptanceSuite::RectangleSet>& AcceptanceSuite::fixture_rectangles() {
  if (!rectangles_) {
    std::vector<RectangleSet> sets;
    for (const auto& curve : fixtures::acceptance_curves()) {
      RectangleSet set{curve, {}};
      for (double theta : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
        auto rects = find_rectangles(curve, theta);
        set.rects.insert(set.rects.end(), rects.begin(), rects.end());
      }
      sets.push_back(std::move(set));
    }
    rectangles_ = std::move(sets);
  }
  return *rectangles_;
}

CriterionResult AcceptanceSuite::circle_law() {
  return run_criterion(1, "circle law", 30.0, [&](Checks& c, double& charged) {
    const JordanCurve circle = fixtures::unit_circle();
    for (double theta : {0.3, 0.9, kPi / 2, 2.4}) {
      const auto rects = find_rectangles(circle, theta);
      c.expect(rects.size() >= 8, "at least 8 representatives at theta " + fmt(theta));
      double rad_err = 0.0, act_err = 0.0;
      for (const auto& r : rects) {
        rad_err = std::max({rad_err, std::abs(r.rad - 1.0), std::abs(r.center)});
        act_err = std::max(act_err, std::abs(action_value(circle, r).value - theta));
      }
      c.expect(rad_err <= 1e-8, "rad = 1 at theta " + fmt(theta) + " (err " + fmt(rad_err) + ")");
      c.expect(act_err <= 1e-6, "action = theta at theta " + fmt(theta) + " (err " + fmt(act_err) + ")");
    }
    const auto t0 = Clock::now();
    const bool cached = sweeps_.count("circle") > 0;
    const auto& rec = sweep("circle");
    if (cached) charged += rec.seconds - since(t0);
    double dev = 0.0;
    for (const auto& s : rec.ell.samples) dev = std::max(dev, std::abs(s.value - s.theta));
    c.expect(rec.ell.samples.size() == static_cast<std::size_t>(options_.sweep_steps), "one value per grid theta");
    c.expect(dev <= 1e-6, "ell(theta) = theta on the sweep (err " + fmt(dev) + ")");
    const auto ext = rec.ell.extended();
    c.expect(ext.front().theta == 0.0 && ext.front().value == 0.0, "ell(0) = 0");
    c.expect(ext.back().theta == kPi && std::abs(ext.back().value - kPi) <= 1e-12, "ell(pi) = Area = pi");
    c.note("max |ell - theta| " + fmt(dev));
  });
}

CriterionResult AcceptanceSuite::ellipse_square() {
  return run_criterion(2, "ellipse (2,1) square", 10.0, [&](Checks& c, double&) {
    const JordanCurve e = fixtures::ellipse21();
    const double u = 2.0 / std::sqrt(5.0);
    const std::vector<Complex> expected{{u, u}, {-u, u}, {-u, -u}, {u, -u}};
    const auto rects = find_rectangles(e, kPi / 2);
    c.expect(rects.size() == 1, "exactly one geometric square (found " + std::to_string(rects.size()) + ")");
    if (!rects.empty()) {
      const auto& r = rects.front();
      const double gap = hausdorff_distance(expected, std::vector<Complex>(r.vertices.begin(), r.vertices.end()));
      c.expect(gap <= 1e-8, "vertices (+-2/sqrt5, +-2/sqrt5) (gap " + fmt(gap) + ")");
      c.expect(std::abs(r.rad - 2.0 * std::sqrt(2.0 / 5.0)) <= 1e-8, "rad = 2 sqrt(2/5)");
      c.note("vertex gap " + fmt(gap));
    }
    // Grid oracle: every ordered generator maps to the closed-form vertices.
    const auto roots = oracle::rectangle_roots(e, kPi / 2, options_.oracle_grid);
    c.expect(roots.size() == 4, "oracle finds 4 ordered generators (found " + std::to_string(roots.size()) + ")");
    std::vector<Complex> oracle_vertices;
    for (const auto& p : roots) {
      oracle_vertices.push_back(e.eval(p[0]));
      oracle_vertices.push_back(e.eval(p[1]));
    }
    const double og = oracle_vertices.empty() ? 1e9 : hausdorff_distance(expected, oracle_vertices);
    c.expect(og <= 0.02, "oracle vertices match the closed form (gap " + fmt(og) + ")");
    c.note("oracle gap " + fmt(og));
  });
}

CriterionResult AcceptanceSuite::ellipse_binormals() {
  return run_criterion(3, "ellipse binormals", 10.0, [&](Checks& c, double&) {
    const JordanCurve e = fixtures::ellipse21();
    const auto bins = find_binormals(e);
    c.expect(bins.size() == 4, "4 ordered binormals (found " + std::to_string(bins.size()) + ")");
    std::multiset<int> indices;
    std::vector<double> chords;
    int index2 = 0, index1 = 0;
    for (const auto& b : bins) {
      indices.insert(b.morse_index);
      chords.push_back(b.chord_length);
      const Complex chord = e.eval(b.params[0]) - e.eval(b.params[1]);
      const double o1 = (std::conj(e.derivative(b.params[0])) * chord).real();
      const double o2 = (std::conj(e.derivative(b.params[1])) * chord).real();
      c.expect(std::abs(o1) <= 1e-10 && std::abs(o2) <= 1e-10, "orthogonality residual");
      const bool major = std::abs(b.chord_length - 4.0) <= 1e-9;
      const bool minor = std::abs(b.chord_length - 2.0) <= 1e-9;
      c.expect(major || minor, "chord is 4 or 2 (got " + fmt(b.chord_length, "%.12g") + ")");
      if (major) c.expect(b.morse_index == 2, "major axis has index 2");
      if (minor) c.expect(b.morse_index == 1, "minor axis has index 1");
      // Each geometric binormal is counted once, from its (s < t) ordering.
      if (b.params[0] < b.params[1]) (b.morse_index == 2 ? index2 : index1) += 1;
    }
    c.expect(indices == std::multiset<int>{1, 1, 2, 2}, "index multiset {2,2,1,1}");
    c.expect(index2 == 1 && index1 == 1, "one geometric binormal in degree 2 and one in degree 1");
    const auto roots = oracle::binormal_roots(e, 1024);
    std::vector<oracle::ParamPoint> solver;
    for (const auto& b : bins) solver.push_back(b.params);
    const auto m = oracle::match_points(roots, solver, 2 * kTwoPi / 1024);
    c.expect(m.exact(), "1024^2 grid oracle agrees (oracle " + std::to_string(m.oracle_count) + ", solver " +
                            std::to_string(m.solver_count) + ")");
    c.note("degree ranks (2:" + std::to_string(index2) + ", 1:" + std::to_string(index1) + ")");
  });
}

CriterionResult AcceptanceSuite::spectral_properties() {
  return run_criterion(4, "spectral function properties", 300.0, [&](Checks& c, double& charged) {
    for (const char* name : kAcceptanceFixtures) {
      const auto t0 = Clock::now();
      const bool cached = sweeps_.count(name) > 0;
      const auto& rec = sweep(name);
      if (cached) charged += rec.seconds - since(t0);
      const auto& f = rec.ell;
      const auto& v = f.validation;
      const double area = rec.diagram.curve_area;
      const double rad2 = rec.diagram.curve_rad * rec.diagram.curve_rad;
      const std::string tag = std::string(name) + ": ";
      c.expect(v.max_decrease <= 1e-4 * area, tag + "monotone (max decrease " + fmt(v.max_decrease) + ")");
      c.expect(v.max_slope <= rad2 * 1.01, tag + "slope " + fmt(v.max_slope) + " <= 1.01 Rad^2");
      c.expect(v.min_value >= 0.0 && v.max_value <= area, tag + "values in [0, Area]");
      bool spectral = f.samples.size() == rec.diagram.theta_grid.size();
      for (std::size_t i = 0; spectral && i < f.samples.size(); ++i) {
        const auto col = rec.diagram.column(i);
        spectral = std::any_of(col.begin(), col.end(), [&](const auto& node) {
          return node.first == f.samples[i].branch_id && node.second.action == f.samples[i].value;
        });
      }
      c.expect(spectral, tag + "every value is a diagram action at its theta");
      c.note(tag + "slope " + fmt(v.max_slope) + "/" + fmt(rad2) + ", decrease " + fmt(v.max_decrease));
    }
  });
}

CriterionResult AcceptanceSuite::inscription_intervals() {
  return run_criterion(5, "inscription intervals", 300.0, [&](Checks& c, double& charged) {
    for (const char* name : kAcceptanceFixtures) {
      const auto t0 = Clock::now();
      const bool cached = sweeps_.count(name) > 0;
      const auto& rec = sweep(name);
      if (cached) charged += rec.seconds - since(t0);
      const double area = rec.diagram.curve_area;
      const double rad2 = rec.diagram.curve_rad * rec.diagram.curve_rad;
      const std::string tag = std::string(name) + ": ";
      if (std::string(name) == "ellipse21") {
        const auto iv = inscription_interval(rec.ell, 0.05);
        const double need = (2 * kPi - 0.1) / 4 - 0.02;
        c.expect(iv.length() >= need, tag + "eps 0.05 length " + fmt(iv.length(), "%.4f") + " >= " + fmt(need, "%.4f"));
        c.note(tag + "eps 0.05 interval [" + fmt(iv.a, "%.4f") + ", " + fmt(iv.b, "%.4f") + "]");
      }
      const auto sweep_eps = epsilon_sweep(rec.ell, 0.25, 1e-3, 9);
      for (const auto& iv : sweep_eps) c.expect(iv.meets_bound, tag + "bound at eps " + fmt(iv.epsilon));
      const double last = sweep_eps.back().length();
      const double need = area / rad2 - 0.05;
      c.expect(last >= need, tag + "length " + fmt(last, "%.4f") + " >= Area/Rad^2 - 0.05 = " + fmt(need, "%.4f"));
      c.note(tag + "length " + fmt(last, "%.4f") + " vs Area/Rad^2 " + fmt(area / rad2, "%.4f"));
    }
  });
}

CriterionResult AcceptanceSuite::action_cross_validation() {
  return run_criterion(6, "action cross-validation", 0.0, [&](Checks& c, double&) {
    const Complex rot = std::polar(1.0, 0.7);
    const Complex shift{0.3, -0.2};
    int elegant = 0, total = 0;
    double ice_err = 0.0, rigid_err = 0.0, scale_err = 0.0, profile_err = 0.0;
    for (const auto& set : fixture_rectangles()) {
      const JordanCurve moved = set.curve.transformed(rot, shift);
      const JordanCurve half = set.curve.transformed(0.5, 0.0);
      const JordanCurve twice = set.curve.transformed(2.0, 0.0);
      for (const auto& r : set.rects) {
        ++total;
        const double a = action_value(set.curve, r).value;
        if (is_elegant(set.curve, r)) {
          ++elegant;
          ice_err = std::max(ice_err, std::abs(a - ice_cream_area(set.curve, r)));
        }
        const double am = action_value(moved, make_rectangle(moved, r.theta, r.params)).value;
        rigid_err = std::max(rigid_err, std::abs(am - a));
        for (const auto& [lambda, curve] : {std::pair<double, const JordanCurve*>{0.5, &half}, {2.0, &twice}}) {
          const double as = action_value(*curve, make_rectangle(*curve, r.theta, r.params)).value;
          scale_err = std::max(scale_err, std::abs(as / (lambda * lambda) - a) / std::abs(a));
        }
        ActionOptions bump;
        bump.profile = SpeedProfile::Bump;
        profile_err = std::max(profile_err, std::abs(action_value(set.curve, r, bump).value - a));
      }
    }
    c.expect(elegant > 0, "some fixture inscriptions are elegant");
    c.expect(ice_err <= 1e-6, "|action - ice cream| <= 1e-6 (max " + fmt(ice_err) + ")");
    c.expect(rigid_err <= 1e-8, "rigid motion invariance (max " + fmt(rigid_err) + ")");
    c.expect(scale_err <= 1e-9, "lambda^2 scaling (max rel " + fmt(scale_err) + ")");
    c.expect(profile_err <= 1e-9, "speed profile independence (max " + fmt(profile_err) + ")");
    c.note(std::to_string(total) + " rectangles, " + std::to_string(elegant) + " elegant");
    c.note("errors ice " + fmt(ice_err) + ", rigid " + fmt(rigid_err) + ", scale " + fmt(scale_err) + ", profile " +
           fmt(profile_err));
  });
}

CriterionResult AcceptanceSuite::capping_invariants() {
  return run_criterion(7, "capping invariants", 0.0, [&](Checks& c, double&) {
    int total = 0, bad_winding = 0, bad_distance = 0, bad_reversed = 0;
    double min_dist = std::numeric_limits<double>::infinity();
    double rev_err = 0.0;
    for (const auto& set : fixture_rectangles()) {
      for (const auto& r : set.rects) {
        ++total;
        const auto cap = build_capping(set.curve, r);
        const auto loop = SampledLoop::from_path(corrected_difference_loop(set.curve, cap));
        if (winding_number(loop, 0.0) != 0) ++bad_winding;
        if (!(cap.min_diagonal_distance > 1e-6)) ++bad_distance;
        min_dist = std::min(min_dist, cap.min_diagonal_distance);

        const auto rev = build_capping(set.curve, r, 2048, CappingPath::Reversed);
        const auto rloop = SampledLoop::from_path(corrected_difference_loop(set.curve, rev));
        if (std::abs(rev.winding_correction - cap.winding_correction) != 1 || winding_number(rloop, 0.0) != 0) {
          ++bad_reversed;
        }
        ActionOptions reversed;
        reversed.path = CappingPath::Reversed;
        const double a = action_value(set.curve, r).value;
        rev_err = std::max(rev_err, std::abs(action_value(set.curve, r, reversed).value - a) / std::max(1.0, r.rad * r.rad));
      }
    }
    c.expect(total > 0, "fixture rectangles available");
    c.expect(bad_winding == 0, "corrected winding 0 (" + std::to_string(bad_winding) + " bad)");
    c.expect(bad_distance == 0, "min |z - w| > 1e-6 (" + std::to_string(bad_distance) + " bad)");
    c.expect(bad_reversed == 0, "reversed path needs exactly one core loop (" + std::to_string(bad_reversed) + " bad)");
    c.expect(rev_err <= 1e-8, "reversed capping gives the same action (max " + fmt(rev_err) + ")");
    c.note(std::to_string(total) + " cappings, min |z - w| " + fmt(min_dist));
  });
}

CriterionResult AcceptanceSuite::no_shrinkout() {
  return run_criterion(8, "no-shrinkout fixture", 120.0, [&](Checks& c, double&) {
    const PolygonCurve square = fixtures::square_polygon();
    const auto run = approximate_and_track(square, kPi / 2, 4, 0.1);
    c.expect(run.max_area_error <= 1e-10, "equal areas (max error " + fmt(run.max_area_error) + ")");
    c.expect(run.max_length_ratio <= 1.1, "length <= 1.1 perimeter (ratio " + fmt(run.max_length_ratio, "%.4f") + ")");
    bool all_levels = run.levels.size() == 4;
    for (const auto& l : run.levels) all_levels = all_levels && l.best.has_value();
    c.expect(all_levels, "a filtered rectangle at every level");
    c.expect(run.min_diameter >= 0.5, "filtered diameters >= 0.5 (min " + fmt(run.min_diameter, "%.4f") + ")");
    c.expect(run.cauchy, "vertex gaps halve within factor 4");
    const auto limit = oracle::widest_polygon_rectangle(square, kPi / 2);
    c.expect(limit.has_value(), "polygon oracle finds an inscribed square");
    if (limit && all_levels) {
      const auto& v = run.levels.back().best->rect.vertices;
      const double gap = hausdorff_distance(std::vector<Complex>(v.begin(), v.end()),
                                            std::vector<Complex>(limit->begin(), limit->end()));
      c.expect(gap <= 0.05, "final Hausdorff gap to the polygon's square " + fmt(gap, "%.4f") + " <= 0.05");
      c.note("final gap " + fmt(gap, "%.4f"));
    }
    std::string gaps;
    for (const auto& l : run.levels) {
      if (l.vertex_gap >= 0.0) gaps += (gaps.empty() ? "" : " ") + fmt(l.vertex_gap, "%.4f");
    }
    c.note("level gaps " + gaps);
  });
}

CriterionResult AcceptanceSuite::oracle_equivalence() {
  return run_criterion(9, "grid oracle equivalence", 0.0, [&](Checks& c, double&) {
    const double radius = 2.0 * kTwoPi / options_.oracle_grid;
    for (const auto& curve : {fixtures::ellipse21(), fixtures::smoothed_square()}) {
      for (double theta : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
        const auto roots = oracle::rectangle_roots(curve, theta, options_.oracle_grid);
        FindOptions find;
        find.include_partner = true;
        const auto rects = find_rectangles(curve, theta, options_.oracle_solver_grid, 1e-10, find);
        const auto solver = oracle::ordered_pairs(rects);
        const std::string tag = curve.name() + " at " + fmt(theta, "%.4f") + ": ";
        const bool family = std::any_of(rects.begin(), rects.end(), [](const auto& r) { return r.degenerate; });
        if (!family) {
          const auto m = oracle::match_points(roots, solver, radius);
          c.expect(m.exact(), tag + "oracle " + std::to_string(m.oracle_count) + " vs solver " +
                                  std::to_string(m.solver_count) + ", unmatched " +
                                  std::to_string(m.oracle_unmatched) + "/" + std::to_string(m.solver_unmatched));
          c.note(tag + std::to_string(m.oracle_count) + " matched, worst " + fmt(m.worst));
        } else {
          // A Morse-Bott family is a curve of roots; the solver keeps one per bin.
          const auto cov = oracle::cover_points(roots, solver, FindOptions{}.family_bins, radius);
          c.expect(cov.ok(), tag + "family coverage (uncovered " + std::to_string(cov.uncovered) + ", unsupported " +
                                 std::to_string(cov.unsupported) + ")");
          std::vector<InscribedRectangle> isolated;
          for (const auto& r : rects) {
            if (!r.degenerate) isolated.push_back(r);
          }
          const auto m = oracle::match_points(roots, oracle::ordered_pairs(isolated), radius);
          c.expect(m.solver_unmatched == 0, tag + "isolated solutions each match one oracle root");
          c.note(tag + "family of " + std::to_string(roots.size()) + " oracle roots covered by " +
                 std::to_string(solver.size()) + " representatives");
        }
      }
    }
  });
}

std::vector<CriterionResult> AcceptanceSuite::run_all() {
  return {circle_law(),           ellipse_square(),          ellipse_binormals(),
          spectral_properties(),  inscription_intervals(),   action_cross_validation(),
          capping_invariants(),   no_shrinkout(),            oracle_equivalence()};
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s << "AC" << r.number << ' ' << (r.passed ? "PASS" : "FAIL") << ' ' << r.title << " (" << fmt(r.seconds, "%.1f")
    << " s): " << r.detail;
  return s.str();
}

}  // namespace peglab::verify
