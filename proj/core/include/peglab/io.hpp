#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "peglab/action.hpp"
#include "peglab/curve.hpp"
#include "peglab/inscribe.hpp"
#include "peglab/shrinkout.hpp"
#include "peglab/spectral.hpp"
#include "peglab/sweep.hpp"

namespace peglab::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

Json curve_to_json(const JordanCurve& curve);
/// Throws ParseError on malformed input and InvalidCurve when the modes do
/// not describe a Jordan curve.
JordanCurve curve_from_json(const Json& j);
Json polygon_to_json(const PolygonCurve& polygon);
PolygonCurve polygon_from_json(const Json& j);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);
Json parse(const std::string& text);

std::string read_text_file(const std::string& path);
/// Throws IoFailure.
void write_text_file(const std::string& path, const std::string& content);

JordanCurve load_curve(const std::string& path);
void save_curve(const std::string& path, const JordanCurve& curve);
PolygonCurve load_polygon(const std::string& path);
void save_polygon(const std::string& path, const PolygonCurve& polygon);

std::string rectangles_csv(const std::vector<InscribedRectangle>& rects);
Json rectangles_json(const std::vector<InscribedRectangle>& rects);

std::string binormals_csv(const std::vector<Binormal>& binormals);
Json binormals_json(const std::vector<Binormal>& binormals);

Json action_json(const InscribedRectangle& rect, const ActionValue& value, bool elegant);

std::string spectrum_csv(const SpectrumDiagram& diagram);
Json spectrum_json(const SpectrumDiagram& diagram);

std::string spectral_csv(const SpectralFunction& f);
Json spectral_report_json(const SpectralFunction& f, const std::vector<InscriptionInterval>& intervals);

std::string shrinkout_csv(const ApproximationRun& run);
Json shrinkout_json(const ApproximationRun& run);

}  // namespace peglab::io
