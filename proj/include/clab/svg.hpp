#pragma once

#include <string>
#include <vector>

namespace clab {

// Hand-emitted log-log scatter plot with reference slope lines. Pure text,
// no renderer dependencies.
struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // raw (x, y), plotted as (ln x, ln y)
};

struct RefSlope {
  std::string label;
  double slope;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "ln eps";
  std::string y_label = "ln value";
  int width = 720;
  int height = 520;
  std::vector<RefSlope> slopes;
};

// Throws if fewer than 2 points are available in total.
std::string plot_loglog_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec);

}  // namespace clab
