#pragma once

#include <string>
#include <vector>

namespace qgeo::lab {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

/// Plain line chart: axes, tick labels, one polyline per series and a legend.
std::string render_svg(const Chart& chart);

}  // namespace qgeo::lab
