#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stcut::app {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 80, kRight = 200, kTop = 40, kBottom = 60;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const LogLogPlot& plot) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto extend = [&](double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) return;
    xmin = std::min(xmin, std::log10(x));
    xmax = std::max(xmax, std::log10(x));
    ymin = std::min(ymin, std::log10(y));
    ymax = std::max(ymax, std::log10(y));
  };
  for (const auto& [x, y] : plot.points) extend(x, y);
  for (const PlotLine& l : plot.lines)
    for (const auto& [x, y] : l.points) extend(x, y);
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  xmin = std::floor(xmin), xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin), ymax = std::max(std::ceil(ymax), ymin + 1);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (std::log10(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - std::log10(y)) / (ymax - ymin) * ph; };

  std::ostringstream s;
  s.precision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(plot.title) << "</text>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = xmin; e <= xmax + 0.5; e += 1) {
    const double x = px(std::pow(10.0, e));
    s << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + ph
      << "\" stroke=\"#dddddd\"/>\n";
    s << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">1e" << e
      << "</text>\n";
  }
  for (double e = ymin; e <= ymax + 0.5; e += 1) {
    const double y = py(std::pow(10.0, e));
    s << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
      << "\" stroke=\"#dddddd\"/>\n";
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e
      << "</text>\n";
  }
  s << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
    << escape(plot.x_label) << "</text>\n";
  s << "<text transform=\"translate(20," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(plot.y_label) << "</text>\n";

  auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const std::string& color,
                      bool dashed) {
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dashed) s << " stroke-dasharray=\"6,4\"";
    s << " points=\"";
    for (const auto& [x, y] : pts)
      if (x > 0.0 && y > 0.0) s << px(x) << ',' << py(y) << ' ';
    s << "\"/>\n";
  };
  double legend_y = kTop + 10;
  auto legend = [&](const std::string& label, const std::string& color, bool dashed) {
    s << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << legend_y << "\" x2=\"" << kLeft + pw + 36
      << "\" y2=\"" << legend_y << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
      << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    s << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << legend_y + 4 << "\">" << escape(label)
      << "</text>\n";
    legend_y += 18;
  };

  polyline(plot.points, "#1f77b4", false);
  for (const auto& [x, y] : plot.points)
    if (x > 0.0 && y > 0.0)
      s << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  legend("error", "#1f77b4", false);
  for (const PlotLine& l : plot.lines) {
    polyline(l.points, l.color, l.dashed);
    legend(l.label, l.color, l.dashed);
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace stcut::app
