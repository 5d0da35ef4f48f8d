#include "peglab/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "peglab/action.hpp"

namespace peglab::svg {

namespace {

constexpr int kCurveSamples = 2048;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

// Plane point to SVG user space (y axis up).
std::string pt(Complex p) { return num(p.real()) + "," + num(-p.imag()); }

struct Box {
  double x0, y0, x1, y1;
};

Box bounds(const std::vector<Complex>& pts) {
  Box b{pts.front().real(), pts.front().imag(), pts.front().real(), pts.front().imag()};
  for (const auto& p : pts) {
    b.x0 = std::min(b.x0, p.real());
    b.x1 = std::max(b.x1, p.real());
    b.y0 = std::min(b.y0, p.imag());
    b.y1 = std::max(b.y1, p.imag());
  }
  return b;
}

std::string open_plane(const Box& b, double& stroke) {
  const double span = std::max(b.x1 - b.x0, b.y1 - b.y0);
  const double pad = 0.08 * span;
  stroke = span / 400.0;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"" << num(b.x0 - pad) << ' '
    << num(-b.y1 - pad) << ' ' << num(span + 2 * pad) << ' ' << num(span + 2 * pad) << "\">\n";
  s << "<rect x=\"" << num(b.x0 - pad) << "\" y=\"" << num(-b.y1 - pad) << "\" width=\"" << num(span + 2 * pad)
    << "\" height=\"" << num(span + 2 * pad) << "\" fill=\"white\"/>\n";
  return s.str();
}

std::string polyline(const std::vector<Complex>& pts, const std::string& cls, const std::string& color,
                     double stroke) {
  std::ostringstream s;
  s << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(stroke)
    << "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) s << (i ? " " : "") << pt(pts[i]);
  s << ' ' << pt(pts.front()) << "\"/>\n";
  return s.str();
}

// Circular arc about the center from a, turning counterclockwise by theta.
std::string arc_command(Complex a, Complex b, double r, double theta) {
  std::ostringstream s;
  s << "M " << pt(a) << " A " << num(r) << ' ' << num(r) << " 0 " << (theta > kPi ? 1 : 0) << " 1 " << pt(b);
  return s.str();
}

std::vector<Complex> curve_arc(const JordanCurve& curve, double from, double to, int n) {
  std::vector<Complex> out;
  for (int j = 0; j <= n; ++j) out.push_back(curve.eval(from + (to - from) * j / n));
  return out;
}

// Parameter of the arc from the first vertex to the second, counterclockwise.
double ccw_span(double from, double to) { return wrap_angle(to - from); }

}  // namespace

std::string curve_figure(const JordanCurve& curve, const std::vector<InscribedRectangle>& rects) {
  const auto samples = curve.sample(kCurveSamples);
  double stroke = 0.0;
  std::ostringstream s;
  s << open_plane(bounds(samples), stroke);
  s << polyline(samples, "curve", "black", stroke);
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const auto& r = rects[i];
    const std::string color = kPalette[i % std::size(kPalette)];
    if (is_elegant(curve, r)) {
      // Regions between each trajectory arc and the curve arc it spans.
      struct Leg {
        Complex a, b;
        double from, to;
      };
      for (const Leg& leg : {Leg{r.z2(), r.z(), r.params[2], r.params[0]}, Leg{r.w2(), r.w(), r.params[3], r.params[1]}}) {
        const auto back = curve_arc(curve, leg.from + ccw_span(leg.from, leg.to), leg.from, 128);
        s << "<path class=\"icecream\" fill=\"" << color << "\" fill-opacity=\"0.25\" stroke=\"none\" d=\""
          << arc_command(leg.a, leg.b, r.rad, r.theta);
        for (const auto& p : back) s << " L " << pt(p);
        s << " Z\"/>\n";
      }
    }
    s << "<polygon class=\"rectangle\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(stroke)
      << "\" points=\"";
    for (int k = 0; k < 4; ++k) s << (k ? " " : "") << pt(r.vertices[k]);
    s << "\"/>\n";
    for (int k = 0; k < 2; ++k) {
      s << "<line class=\"diagonal\" stroke=\"" << color << "\" stroke-dasharray=\"" << num(4 * stroke)
        << "\" stroke-width=\"" << num(stroke) << "\" x1=\"" << num(r.vertices[k].real()) << "\" y1=\""
        << num(-r.vertices[k].imag()) << "\" x2=\"" << num(r.vertices[k + 2].real()) << "\" y2=\""
        << num(-r.vertices[k + 2].imag()) << "\"/>\n";
    }
    s << "<path class=\"arc\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(2 * stroke)
      << "\" d=\"" << arc_command(r.z2(), r.z(), r.rad, r.theta) << "\"/>\n";
    s << "<path class=\"arc\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(2 * stroke)
      << "\" d=\"" << arc_command(r.w2(), r.w(), r.rad, r.theta) << "\"/>\n";
    for (const auto& v : r.vertices) {
      s << "<circle class=\"vertex\" cx=\"" << num(v.real()) << "\" cy=\"" << num(-v.imag()) << "\" r=\""
        << num(3 * stroke) << "\" fill=\"" << color << "\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string spectrum_figure(const SpectrumDiagram& diagram, const SpectralFunction* overlay) {
  constexpr double w = 800.0, h = 500.0, margin = 50.0;
  double top = diagram.curve_area;
  for (const auto& b : diagram.branches) {
    for (const auto& smp : b.samples) top = std::max(top, smp.action);
  }
  top = std::max(top, 1e-12);
  auto X = [&](double th) { return margin + (w - 2 * margin) * th / kPi; };
  auto Y = [&](double a) { return h - margin - (h - 2 * margin) * a / top; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  s << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  s << "<line x1=\"" << num(X(0)) << "\" y1=\"" << num(Y(0)) << "\" x2=\"" << num(X(kPi)) << "\" y2=\"" << num(Y(0))
    << "\"/>\n";
  s << "<line x1=\"" << num(X(0)) << "\" y1=\"" << num(Y(0)) << "\" x2=\"" << num(X(0)) << "\" y2=\"" << num(Y(top))
    << "\"/>\n";
  s << "<line stroke-dasharray=\"4\" x1=\"" << num(X(0)) << "\" y1=\"" << num(Y(diagram.curve_area)) << "\" x2=\""
    << num(X(kPi)) << "\" y2=\"" << num(Y(diagram.curve_area)) << "\"/>\n";
  s << "</g>\n";
  s << "<text x=\"" << num(X(kPi) - 10) << "\" y=\"" << num(Y(0) + 30) << "\" font-size=\"14\">theta</text>\n";
  s << "<text x=\"10\" y=\"" << num(Y(top) - 10) << "\" font-size=\"14\">action</text>\n";

  for (const auto& b : diagram.branches) {
    const std::string color = kPalette[b.id % std::size(kPalette)];
    s << "<path class=\"branch\" data-branch=\"" << b.id << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
      s << (i ? " L " : "M ") << num(X(b.samples[i].theta)) << ',' << num(Y(b.samples[i].action));
    }
    s << "\"/>\n";
  }
  for (const auto& b : diagram.branches) {
    for (const auto& smp : b.samples) {
      if (smp.event == BranchEvent::None) continue;
      s << "<circle class=\"event " << to_string(smp.event) << "\" cx=\"" << num(X(smp.theta)) << "\" cy=\""
        << num(Y(smp.action)) << "\" r=\"4\" fill=\"" << (smp.event == BranchEvent::Birth ? "green" : "red")
        << "\"/>\n";
    }
  }
  if (overlay != nullptr) {
    const auto ext = overlay->extended();
    s << "<path class=\"spectral\" fill=\"none\" stroke=\"black\" stroke-width=\"2.5\" stroke-opacity=\"0.6\" d=\"";
    for (std::size_t i = 0; i < ext.size(); ++i) {
      s << (i ? " L " : "M ") << num(X(ext[i].theta)) << ',' << num(Y(ext[i].value));
    }
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string shrinkout_figure(const ApproximationRun& run) {
  std::vector<Complex> all = run.target.vertices;
  std::vector<std::vector<Complex>> curves;
  for (const auto& c : run.approximants) {
    curves.push_back(c.sample(kCurveSamples));
    all.insert(all.end(), curves.back().begin(), curves.back().end());
  }
  double stroke = 0.0;
  std::ostringstream s;
  s << open_plane(bounds(all), stroke);
  s << polyline(run.target.vertices, "target", "black", 2 * stroke);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const std::string color = kPalette[i % std::size(kPalette)];
    s << polyline(curves[i], "approximant", color, stroke);
    if (i < run.levels.size() && run.levels[i].best) {
      const auto& v = run.levels[i].best->rect.vertices;
      s << polyline({v.begin(), v.end()}, "tracked", color, stroke);
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace peglab::svg
