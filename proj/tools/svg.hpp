#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbd::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Stacks one unstyled polyline panel per series, sharing the x axis label.
void write_svg(std::ostream& out, const std::string& title, const std::string& x_label,
               const std::vector<Series>& panels);

}  // namespace qbd::cli
