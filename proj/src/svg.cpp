#include "clab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "clab/csv.hpp"

namespace clab {

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
const char* kSlopeColors[] = {"#999999", "#bbbbbb", "#777777", "#555555"};

struct Box {
  double xmin, xmax, ymin, ymax;
};

}  // namespace

std::string plot_loglog_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec) {
  size_t total = 0;
  for (const auto& s : series) total += s.points.size();
  if (total < 2) throw std::invalid_argument("plot: need at least 2 points");

  Box box{1e300, -1e300, 1e300, -1e300};
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      if (!(x > 0) || !(y > 0)) throw std::invalid_argument("plot: log-log needs positive data");
      double lx = std::log(x), ly = std::log(y);
      box.xmin = std::min(box.xmin, lx);
      box.xmax = std::max(box.xmax, lx);
      box.ymin = std::min(box.ymin, ly);
      box.ymax = std::max(box.ymax, ly);
    }
  }
  double padx = 0.05 * std::max(1e-9, box.xmax - box.xmin);
  double pady = 0.05 * std::max(1e-9, box.ymax - box.ymin);
  box.xmin -= padx;
  box.xmax += padx;
  box.ymin -= pady;
  box.ymax += pady;

  const double ml = 64, mr = 16, mt = 36, mb = 48;
  double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
  auto X = [&](double lx) { return ml + (lx - box.xmin) / (box.xmax - box.xmin) * pw; };
  auto Y = [&](double ly) { return mt + (box.ymax - ly) / (box.ymax - box.ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
     << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << spec.title << "</text>\n";
  // axes frame
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  // ticks: 5 per axis
  for (int i = 0; i <= 4; ++i) {
    double lx = box.xmin + i * (box.xmax - box.xmin) / 4;
    double ly = box.ymin + i * (box.ymax - box.ymin) / 4;
    os << "<line x1=\"" << X(lx) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(lx) << "\" y2=\""
       << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << X(lx) << "\" y=\"" << mt + ph + 18
       << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_double(lx, 4) << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(ly) << "\" x2=\"" << ml << "\" y2=\"" << Y(ly)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << Y(ly) + 3
       << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_double(ly, 4) << "</text>\n";
  }
  os << "<text x=\"" << spec.width / 2 << "\" y=\"" << spec.height - 10
     << "\" text-anchor=\"middle\" font-size=\"12\">" << spec.x_label << "</text>\n";
  os << "<text x=\"14\" y=\"" << spec.height / 2
     << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
     << spec.height / 2 << ")\">" << spec.y_label << "</text>\n";

  // reference slopes anchored at the data centroid
  double cx = (box.xmin + box.xmax) / 2, cy = (box.ymin + box.ymax) / 2;
  for (size_t i = 0; i < spec.slopes.size(); ++i) {
    double s = spec.slopes[i].slope;
    double x1 = box.xmin, x2 = box.xmax;
    double y1 = cy + s * (x1 - cx), y2 = cy + s * (x2 - cx);
    os << "<line x1=\"" << X(x1) << "\" y1=\"" << Y(y1) << "\" x2=\"" << X(x2) << "\" y2=\""
       << Y(y2) << "\" stroke=\"" << kSlopeColors[i % 4]
       << "\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << X(x2) - 4 << "\" y=\"" << Y(y2) - 4
       << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << kSlopeColors[i % 4] << "\">"
       << spec.slopes[i].label << "</text>\n";
  }

  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kSeriesColors[si % 5];
    for (auto [x, y] : series[si].points) {
      os << "<circle cx=\"" << X(std::log(x)) << "\" cy=\"" << Y(std::log(y))
         << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    os << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 14 + 14 * si << "\" font-size=\"11\" fill=\""
       << color << "\">" << series[si].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace clab
