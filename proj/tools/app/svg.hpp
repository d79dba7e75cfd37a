#pragma once

// Minimal SVG writer for log-log convergence plots.

#include <string>
#include <utility>
#include <vector>

namespace stcut::app {

struct PlotLine {
  std::vector<std::pair<double, double>> points;
  std::string label;
  std::string color = "#000000";
  bool dashed = false;
};

struct LogLogPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;  ///< drawn as markers joined by a line
  std::vector<PlotLine> lines;
};

/// Axes cover all positive coordinates, padded to whole decades.
std::string render_svg(const LogLogPlot& plot);

}  // namespace stcut::app
