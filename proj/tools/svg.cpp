#include "svg.hpp"

#include <algorithm>
#include <ostream>

#include "cli.hpp"

namespace qbd::cli {

namespace {

constexpr double kWidth = 720;
constexpr double kPanelHeight = 200;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kGap = 40;

std::pair<double, double> range_of(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 1.0};
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double a = *lo, b = *hi;
  if (a == b) {
    a -= 0.5;
    b += 0.5;
  }
  return {a, b};
}

}  // namespace

void write_svg(std::ostream& out, const std::string& title, const std::string& x_label,
               const std::vector<Series>& panels) {
  const double height = kTop + static_cast<double>(panels.size()) * (kPanelHeight + kGap) + 20;
  const double plot_w = kWidth - kLeft - kRight;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << height << "\">\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
      << "</text>\n";

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Series& s = panels[i];
    const double y0 = kTop + static_cast<double>(i) * (kPanelHeight + kGap);
    const auto [xmin, xmax] = range_of(s.x);
    const auto [ymin, ymax] = range_of(s.y);
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return y0 + kPanelHeight - (y - ymin) / (ymax - ymin) * kPanelHeight; };

    out << "<rect x=\"" << kLeft << "\" y=\"" << y0 << "\" width=\"" << plot_w
        << "\" height=\"" << kPanelHeight << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"5\" y=\"" << y0 + 12 << "\">" << format_number(ymax) << "</text>\n";
    out << "<text x=\"5\" y=\"" << y0 + kPanelHeight << "\">" << format_number(ymin)
        << "</text>\n";
    out << "<text x=\"" << kLeft + 5 << "\" y=\"" << y0 - 5 << "\">" << s.label << "</text>\n";
    out << "<text x=\"" << kLeft << "\" y=\"" << y0 + kPanelHeight + 15 << "\">"
        << format_number(xmin) << "</text>\n";
    out << "<text x=\"" << kWidth - kRight << "\" y=\"" << y0 + kPanelHeight + 15
        << "\" text-anchor=\"end\">" << format_number(xmax) << " " << x_label << "</text>\n";

    out << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    const std::size_t count = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < count; ++k) out << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace qbd::cli
