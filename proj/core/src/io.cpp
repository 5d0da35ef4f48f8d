#include "peglab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "peglab/error.hpp"

namespace peglab::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json curve_to_json(const JordanCurve& curve) {
  Json modes = Json::array();
  for (const auto& m : curve.modes()) modes.push_back({{"k", m.k}, {"re", m.c.real()}, {"im", m.c.imag()}});
  return {{"name", curve.name()}, {"modes", modes}};
}

JordanCurve curve_from_json(const Json& j) {
  std::vector<FourierMode> modes;
  std::string name;
  try {
    name = j.value("name", std::string{});
    for (const auto& m : j.at("modes")) {
      modes.push_back({m.at("k").get<int>(), {m.at("re").get<double>(), m.at("im").get<double>()}});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("curve file: ") + e.what());
  }
  if (modes.empty()) throw Error(ErrorCode::ParseError, "curve file has no modes");
  return JordanCurve(modes, name);
}

Json polygon_to_json(const PolygonCurve& polygon) {
  Json verts = Json::array();
  for (const auto& v : polygon.vertices) verts.push_back({v.real(), v.imag()});
  return {{"name", polygon.name}, {"vertices", verts}};
}

PolygonCurve polygon_from_json(const Json& j) {
  PolygonCurve p;
  try {
    p.name = j.value("name", std::string{});
    for (const auto& v : j.at("vertices")) p.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("polygon file: ") + e.what());
  }
  if (!polygon_is_simple(p)) throw Error(ErrorCode::InvalidCurve, "polygon is not simple");
  return p;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for '" + path + "'");
}

JordanCurve load_curve(const std::string& path) { return curve_from_json(parse(read_text_file(path))); }

void save_curve(const std::string& path, const JordanCurve& curve) { write_text_file(path, dump(curve_to_json(curve))); }

PolygonCurve load_polygon(const std::string& path) { return polygon_from_json(parse(read_text_file(path))); }

void save_polygon(const std::string& path, const PolygonCurve& polygon) {
  write_text_file(path, dump(polygon_to_json(polygon)));
}

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }
  CsvWriter& operator<<(double x) { return field(format_double(x)); }
  CsvWriter& operator<<(int x) { return field(std::to_string(x)); }
  CsvWriter& operator<<(const char* x) { return field(x); }
  void end_row() {
    out_ << '\n';
    fresh_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  CsvWriter& field(const std::string& s) {
    if (!fresh_) out_ << ',';
    out_ << s;
    fresh_ = false;
    return *this;
  }
  std::ostringstream out_;
  bool fresh_ = true;
};

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

}  // namespace

std::string rectangles_csv(const std::vector<InscribedRectangle>& rects) {
  CsvWriter csv{"theta", "s", "t", "s2", "t2", "z_re", "z_im", "w_re", "w_im", "rad", "residual"};
  for (const auto& r : rects) {
    csv << r.theta << r.params[0] << r.params[1] << r.params[2] << r.params[3] << r.z().real() << r.z().imag()
        << r.w().real() << r.w().imag() << r.rad << r.residual;
    csv.end_row();
  }
  return csv.str();
}

Json rectangles_json(const std::vector<InscribedRectangle>& rects) {
  Json arr = Json::array();
  for (const auto& r : rects) {
    Json verts = Json::array();
    for (const auto& v : r.vertices) verts.push_back(complex_json(v));
    arr.push_back({{"theta", r.theta},
                   {"s", r.params[0]},
                   {"t", r.params[1]},
                   {"s2", r.params[2]},
                   {"t2", r.params[3]},
                   {"z_re", r.z().real()},
                   {"z_im", r.z().imag()},
                   {"w_re", r.w().real()},
                   {"w_im", r.w().imag()},
                   {"rad", r.rad},
                   {"residual", r.residual},
                   {"vertices", verts},
                   {"degenerate", r.degenerate}});
  }
  return arr;
}

std::string binormals_csv(const std::vector<Binormal>& binormals) {
  CsvWriter csv{"s", "t", "chord_length", "morse_index", "degenerate", "residual"};
  for (const auto& b : binormals) {
    csv << b.params[0] << b.params[1] << b.chord_length << b.morse_index << (b.degenerate ? 1 : 0) << b.residual;
    csv.end_row();
  }
  return csv.str();
}

Json binormals_json(const std::vector<Binormal>& binormals) {
  Json arr = Json::array();
  for (const auto& b : binormals) {
    arr.push_back({{"s", b.params[0]},
                   {"t", b.params[1]},
                   {"chord_length", b.chord_length},
                   {"morse_index", b.morse_index},
                   {"degenerate", b.degenerate},
                   {"residual", b.residual}});
  }
  return arr;
}

Json action_json(const InscribedRectangle& rect, const ActionValue& value, bool elegant) {
  return {{"theta", rect.theta},
          {"rad", rect.rad},
          {"term_hamiltonian", value.term_hamiltonian},
          {"term_area", value.term_area},
          {"winding_correction", value.winding_correction},
          {"value", value.value},
          {"elegant", elegant}};
}

std::string spectrum_csv(const SpectrumDiagram& diagram) {
  CsvWriter csv{"theta", "branch_id", "action", "s", "t", "s2", "t2", "rad", "event"};
  for (const auto& b : diagram.branches) {
    for (const auto& s : b.samples) {
      csv << s.theta << b.id << s.action << s.params[0] << s.params[1] << s.params[2] << s.params[3] << s.rad
          << to_string(s.event);
      csv.end_row();
    }
  }
  return csv.str();
}

Json spectrum_json(const SpectrumDiagram& diagram) {
  Json branches = Json::array();
  for (const auto& b : diagram.branches) {
    Json samples = Json::array();
    for (const auto& s : b.samples) {
      samples.push_back({{"theta", s.theta},
                         {"action", s.action},
                         {"params", s.params},
                         {"rad", s.rad},
                         {"event", to_string(s.event)},
                         {"grid_index", s.grid_index}});
    }
    branches.push_back(
        {{"id", b.id}, {"birth", to_string(b.birth)}, {"death", to_string(b.death)}, {"samples", samples}});
  }
  return {{"curve_area", diagram.curve_area},
          {"curve_rad", diagram.curve_rad},
          {"theta_grid", diagram.theta_grid},
          {"consistency",
           {{"checked_thetas", diagram.consistency.checked_thetas}, {"mismatches", diagram.consistency.mismatches}}},
          {"log", diagram.log},
          {"branches", branches}};
}

std::string spectral_csv(const SpectralFunction& f) {
  CsvWriter csv{"theta", "ell", "branch_id"};
  for (const auto& s : f.extended()) {
    csv << s.theta << s.value << s.branch_id;
    csv.end_row();
  }
  return csv.str();
}

Json spectral_report_json(const SpectralFunction& f, const std::vector<InscriptionInterval>& intervals) {
  const auto& v = f.validation;
  Json ints = Json::array();
  for (const auto& i : intervals) {
    ints.push_back({{"epsilon", i.epsilon},
                    {"a", i.a},
                    {"b", i.b},
                    {"length", i.length()},
                    {"bound", i.bound},
                    {"slack", i.slack},
                    {"meets_bound", i.meets_bound}});
  }
  return {{"status", f.status},
          {"area", f.area},
          {"rad", f.rad},
          {"penalty", f.penalty},
          {"validation",
           {{"max_decrease", v.max_decrease},
            {"monotone", v.monotone},
            {"max_slope", v.max_slope},
            {"lipschitz_bound", f.rad * f.rad},
            {"lipschitz", v.lipschitz},
            {"min_value", v.min_value},
            {"max_value", v.max_value},
            {"bounded", v.bounded},
            {"endpoints", v.endpoints},
            {"passed", v.passed()}}},
          {"intervals", ints}};
}

std::string shrinkout_csv(const ApproximationRun& run) {
  CsvWriter csv{"level",  "smoothing", "mode_count", "area", "length", "found", "filtered",
                "diameter", "action",  "vertex_gap", "s",    "t",      "s2",    "t2"};
  for (const auto& l : run.levels) {
    csv << l.level << l.smoothing << l.mode_count << l.area << l.length << l.found << l.filtered;
    if (l.best) {
      const auto& p = l.best->rect.params;
      csv << l.best->diameter << l.best->action << l.vertex_gap << p[0] << p[1] << p[2] << p[3];
    } else {
      csv << "" << "" << "" << "" << "" << "" << "";
    }
    csv.end_row();
  }
  return csv.str();
}

Json shrinkout_json(const ApproximationRun& run) {
  Json levels = Json::array();
  for (const auto& l : run.levels) {
    Json lv = {{"level", l.level},   {"smoothing", l.smoothing}, {"mode_count", l.mode_count},
               {"area", l.area},     {"length", l.length},       {"rad", l.rad},
               {"found", l.found},   {"filtered", l.filtered},   {"vertex_gap", l.vertex_gap}};
    if (l.best) {
      Json verts = Json::array();
      for (const auto& v : l.best->rect.vertices) verts.push_back(complex_json(v));
      lv["best"] = {{"diameter", l.best->diameter},
                    {"action", l.best->action},
                    {"params", l.best->rect.params},
                    {"vertices", verts}};
    } else {
      lv["best"] = nullptr;
    }
    levels.push_back(lv);
  }
  return {{"target", polygon_to_json(run.target)},
          {"theta", run.theta},
          {"epsilon", run.epsilon},
          {"polygon_area", run.polygon_area},
          {"polygon_perimeter", run.polygon_perimeter},
          {"max_area_error", run.max_area_error},
          {"max_length_ratio", run.max_length_ratio},
          {"min_diameter", run.min_diameter},
          {"diameter_floor", run.diameter_floor},
          {"diameters_bounded", run.diameters_bounded},
          {"cauchy", run.cauchy},
          {"levels", levels},
          {"log", run.log}};
}

}  // namespace peglab::io
