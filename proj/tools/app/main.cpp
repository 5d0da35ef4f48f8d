#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>

#include "peglab/action.hpp"
#include "peglab/error.hpp"
#include "peglab/fixtures.hpp"
#include "peglab/inscribe.hpp"
#include "peglab/io.hpp"
#include "peglab/shrinkout.hpp"
#include "peglab/spectral.hpp"
#include "peglab/svg.hpp"
#include "peglab/sweep.hpp"
#include "peglab/verify/acceptance.hpp"

namespace fs = std::filesystem;
using namespace peglab;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitValidation = 2;

// Thrown for bad input files; everything else that goes wrong after the
// input loaded is a validation failure.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string curve_path;
  std::string fixture;
  std::string polygon_path;
  std::string output_dir = ".";
  std::vector<std::string> emit{"csv", "json", "svg"};
  double tol = 1e-10;
  int grid_n = 64;

  bool wants(const std::string& kind) const { return std::find(emit.begin(), emit.end(), kind) != emit.end(); }
};

double clamp_theta(double theta) { return std::clamp(theta, 1e-3, kPi - 1e-3); }

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--theta-range", "expected a:b");
  try {
    const double a = std::stod(text.substr(0, colon));
    const double b = std::stod(text.substr(colon + 1));
    if (!(a < b)) throw CLI::ValidationError("--theta-range", "need a < b");
    return {clamp_theta(a), clamp_theta(b)};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--theta-range", "expected numbers a:b");
  }
}

JordanCurve load_input_curve(const Common& c) {
  try {
    if (!c.fixture.empty()) return fixtures::by_name(c.fixture);
    if (c.curve_path.empty()) throw InputError("one of --curve or --fixture is required");
    return io::load_curve(c.curve_path);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

PolygonCurve load_input_polygon(const Common& c) {
  try {
    if (c.polygon_path.empty()) return fixtures::square_polygon();
    return io::load_polygon(c.polygon_path);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

std::string out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  return (fs::path(c.output_dir) / name).string();
}

void add_common(CLI::App* sub, Common& c, bool curve_input) {
  if (curve_input) {
    sub->add_option("--curve", c.curve_path, "Curve JSON file");
    sub->add_option("--fixture", c.fixture, "Built-in curve instead of a file")
        ->check(CLI::IsMember({"circle", "ellipse21", "smoothed_square"}));
  } else {
    sub->add_option("--polygon", c.polygon_path, "Polygon JSON file (default: the square of side 2)");
  }
  sub->add_option("-o,--output-dir", c.output_dir, "Directory for artifacts");
  sub->add_option("--emit", c.emit, "Artifact kinds")->delimiter(',')->check(CLI::IsMember({"csv", "json", "svg"}));
  sub->add_option("--tol", c.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--grid", c.grid_n, "Seed grid size")->check(CLI::Range(32, 4096));
}

void say(const std::string& line) { std::cout << line << '\n'; }

int cmd_inscribe(const Common& c, double theta, bool partner) {
  const JordanCurve curve = load_input_curve(c);
  FindOptions opts;
  opts.include_partner = partner;
  const auto rects = find_rectangles(curve, clamp_theta(theta), c.grid_n, c.tol, opts);
  if (c.wants("csv")) io::write_text_file(out_path(c, "rectangles.csv"), io::rectangles_csv(rects));
  if (c.wants("json")) io::write_text_file(out_path(c, "rectangles.json"), io::dump(io::rectangles_json(rects)));
  if (c.wants("svg")) io::write_text_file(out_path(c, "rectangles.svg"), svg::curve_figure(curve, rects));
  say(std::to_string(rects.size()) + " rectangles at theta " + io::format_double(clamp_theta(theta)));
  return 0;
}

int cmd_binormals(const Common& c) {
  const JordanCurve curve = load_input_curve(c);
  const auto bins = find_binormals(curve, c.grid_n, c.tol);
  if (c.wants("csv")) io::write_text_file(out_path(c, "binormals.csv"), io::binormals_csv(bins));
  if (c.wants("json")) io::write_text_file(out_path(c, "binormals.json"), io::dump(io::binormals_json(bins)));
  int degenerate = 0;
  for (const auto& b : bins) degenerate += b.degenerate ? 1 : 0;
  say(std::to_string(bins.size()) + " ordered binormals, " + std::to_string(degenerate) + " with degenerate Hessian");
  return 0;
}

int cmd_action(const Common& c, double theta) {
  const JordanCurve curve = load_input_curve(c);
  const auto rects = find_rectangles(curve, clamp_theta(theta), c.grid_n, c.tol);
  io::Json reports = io::Json::array();
  for (const auto& r : rects) reports.push_back(io::action_json(r, action_value(curve, r), is_elegant(curve, r)));
  if (c.wants("json")) io::write_text_file(out_path(c, "actions.json"), io::dump(reports));
  if (c.wants("svg")) io::write_text_file(out_path(c, "actions.svg"), svg::curve_figure(curve, rects));
  say(std::to_string(rects.size()) + " actions at theta " + io::format_double(clamp_theta(theta)));
  return 0;
}

SpectrumDiagram run_sweep(const Common& c, const JordanCurve& curve, std::pair<double, double> range, int steps) {
  SweepOptions opts;
  opts.grid_n = c.grid_n;
  opts.tol = c.tol;
  return sweep_spectrum(curve, range.first, range.second, steps, opts);
}

int cmd_sweep(const Common& c, std::pair<double, double> range, int steps) {
  const JordanCurve curve = load_input_curve(c);
  const auto diagram = run_sweep(c, curve, range, steps);
  if (c.wants("csv")) io::write_text_file(out_path(c, "spectrum.csv"), io::spectrum_csv(diagram));
  if (c.wants("json")) io::write_text_file(out_path(c, "spectrum.json"), io::dump(io::spectrum_json(diagram)));
  if (c.wants("svg")) io::write_text_file(out_path(c, "spectrum.svg"), svg::spectrum_figure(diagram));
  std::size_t empty = 0;
  for (std::size_t i = 0; i < diagram.theta_grid.size(); ++i) empty += diagram.column(i).empty() ? 1 : 0;
  say(std::to_string(diagram.branches.size()) + " branches over " + std::to_string(diagram.theta_grid.size()) +
      " thetas, " + std::to_string(empty) + " empty, " + std::to_string(diagram.consistency.mismatches) +
      " consistency mismatches");
  return diagram.consistency.mismatches == 0 && empty == 0 ? 0 : kExitValidation;
}

int cmd_spectral(const Common& c, std::pair<double, double> range, int steps, double epsilon) {
  const JordanCurve curve = load_input_curve(c);
  const auto diagram = run_sweep(c, curve, range, steps);
  const auto f = select_spectral_function(diagram);
  std::vector<InscriptionInterval> intervals;
  if (epsilon > 0.0) {
    intervals.push_back(inscription_interval(f, epsilon));
  } else {
    intervals = epsilon_sweep(f);
  }
  if (c.wants("csv")) io::write_text_file(out_path(c, "spectral.csv"), io::spectral_csv(f));
  if (c.wants("json")) {
    io::write_text_file(out_path(c, "spectral_report.json"), io::dump(io::spectral_report_json(f, intervals)));
  }
  if (c.wants("svg")) io::write_text_file(out_path(c, "spectral.svg"), svg::spectrum_figure(diagram, &f));
  const auto& v = f.validation;
  say(std::string("candidate spectral function: monotone ") + (v.monotone ? "yes" : "no") + ", max slope " +
      io::format_double(v.max_slope) + " (Rad^2 " + io::format_double(f.rad * f.rad) + "), bounds " +
      (v.bounded ? "ok" : "violated") + ", endpoints " + (v.endpoints ? "ok" : "violated"));
  bool intervals_ok = true;
  for (const auto& iv : intervals) {
    say("  eps " + io::format_double(iv.epsilon) + ": [" + io::format_double(iv.a) + ", " + io::format_double(iv.b) +
        "], length " + io::format_double(iv.length()) + ", bound " + io::format_double(iv.bound));
    intervals_ok = intervals_ok && iv.meets_bound;
  }
  return v.passed() && intervals_ok ? 0 : kExitValidation;
}

int cmd_approx(const Common& c, int modes, double smoothing) {
  const PolygonCurve polygon = load_input_polygon(c);
  const JordanCurve curve = smooth_approximate(polygon, modes, smoothing).renamed(polygon.name + "_smoothed");
  io::save_curve(out_path(c, "curve.json"), curve);
  if (c.wants("svg")) io::write_text_file(out_path(c, "curve.svg"), svg::curve_figure(curve, {}));
  say("area " + io::format_double(enclosed_area(curve)) + " (polygon " + io::format_double(polygon_area(polygon)) +
      "), length " + io::format_double(curve_length(curve)) + " (perimeter " +
      io::format_double(polygon_perimeter(polygon)) + ")");
  return 0;
}

int cmd_shrinkout(const Common& c, double theta, int levels, double epsilon) {
  const PolygonCurve polygon = load_input_polygon(c);
  ShrinkoutOptions opts;
  opts.grid_n = c.grid_n;
  opts.tol = c.tol;
  const auto run = approximate_and_track(polygon, clamp_theta(theta), levels, epsilon, opts);
  if (c.wants("csv")) io::write_text_file(out_path(c, "shrinkout.csv"), io::shrinkout_csv(run));
  if (c.wants("json")) io::write_text_file(out_path(c, "shrinkout.json"), io::dump(io::shrinkout_json(run)));
  if (c.wants("svg")) io::write_text_file(out_path(c, "shrinkout.svg"), svg::shrinkout_figure(run));
  for (const auto& line : run.log) say(line);
  say(std::string("diameters bounded: ") + (run.diameters_bounded ? "yes" : "no") +
      ", Cauchy: " + (run.cauchy ? "yes" : "no"));
  return run.diameters_bounded && run.cauchy ? 0 : kExitValidation;
}

int cmd_verify() {
  verify::AcceptanceSuite suite;
  bool all = true;
  for (const auto& r : suite.run_all()) {
    say(verify::format_line(r));
    all = all && r.passed;
  }
  say(all ? "all acceptance criteria pass" : "some acceptance criteria FAILED");
  return all ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"peglab: inscribed theta-rectangles, actions and spectral invariants of Jordan curves"};
  app.require_subcommand(1);

  Common common;
  double theta = kPi / 2;
  std::string range_text = "0.1:3.04";
  int steps = 128;
  double epsilon = 0.0;
  bool partner = false;
  int modes = 64;
  double smoothing = 1e-3;
  int levels = 4;

  auto* inscribe = app.add_subcommand("inscribe", "Inscribed theta-rectangles at one theta");
  add_common(inscribe, common, true);
  inscribe->add_option("--theta", theta, "Diagonal angle in radians");
  inscribe->add_flag("--partner", partner, "Also list other-diagonal generators");

  auto* binormals = app.add_subcommand("binormals", "Binormal chords and their Morse indices");
  add_common(binormals, common, true);

  auto* action = app.add_subcommand("action", "Actions of the rectangles at one theta");
  add_common(action, common, true);
  action->add_option("--theta", theta, "Diagonal angle in radians");

  auto* sweep = app.add_subcommand("sweep", "Action spectrum across a theta range");
  add_common(sweep, common, true);
  sweep->add_option("--theta-range", range_text, "a:b");
  sweep->add_option("--steps", steps, "Grid thetas")->check(CLI::Range(64, 100000));

  auto* spectral = app.add_subcommand("spectral", "Candidate spectral function and inscription intervals");
  add_common(spectral, common, true);
  spectral->add_option("--theta-range", range_text, "a:b");
  spectral->add_option("--steps", steps, "Grid thetas")->check(CLI::Range(64, 100000));
  spectral->add_option("--epsilon", epsilon, "Single epsilon (default: sweep down to 1e-3 Area)")
      ->check(CLI::PositiveNumber);

  auto* approx = app.add_subcommand("approx", "Fourier smoothing of a polygon");
  add_common(approx, common, false);
  approx->add_option("--modes", modes, "Largest frequency kept")->check(CLI::Range(8, 4096));
  approx->add_option("--smoothing", smoothing, "Damping exp(-smoothing k^2)")->check(CLI::PositiveNumber);

  auto* shrink = app.add_subcommand("shrinkout", "Track action-filtered rectangles over smoothing levels");
  add_common(shrink, common, false);
  shrink->add_option("--theta", theta, "Diagonal angle in radians");
  shrink->add_option("--levels", levels, "Smoothing levels")->check(CLI::Range(3, 12));
  shrink->add_option("--epsilon", epsilon, "Action filter margin (default 0.1)")->check(CLI::PositiveNumber);

  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite on the built-in fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (inscribe->parsed()) return cmd_inscribe(common, theta, partner);
    if (binormals->parsed()) return cmd_binormals(common);
    if (action->parsed()) return cmd_action(common, theta);
    if (sweep->parsed()) return cmd_sweep(common, parse_range(range_text), steps);
    if (spectral->parsed()) return cmd_spectral(common, parse_range(range_text), steps, epsilon);
    if (approx->parsed()) return cmd_approx(common, modes, smoothing);
    if (shrink->parsed()) return cmd_shrinkout(common, theta, levels, epsilon > 0.0 ? epsilon : 0.1);
    if (verify_cmd->parsed()) return cmd_verify();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::IoFailure ? kExitInput : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
