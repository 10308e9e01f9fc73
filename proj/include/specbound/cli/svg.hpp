#pragma once

#include <string>
#include <vector>

namespace specbound::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string dash;  // SVG stroke-dasharray; empty for solid
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  std::vector<PlotSeries> series;
};

// Log-y line chart with a legend. Non-positive y values are skipped.
std::string render_svg(const PlotSpec& plot);

}  // namespace specbound::cli
