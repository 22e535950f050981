#pragma once

#include <string>
#include <vector>

#include "rrk/polytope.hpp"

namespace rrk {

struct PlotSeries {
  std::string name;
  std::vector<Point2> vertices;  // counterclockwise hull; 0, 1 or 2 points allowed
};

// 800x600 SVG with R1/R2 axes in bits, one filled outline per series and a
// legend. Output depends only on the input (fixed number formatting).
std::string render_svg(const std::vector<PlotSeries>& series);

}  // namespace rrk
