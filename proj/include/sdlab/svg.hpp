#pragma once

#include <string>
#include <vector>

namespace sdlab {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Minimal log-log scatter/line plot; points with non-positive coordinates are
// dropped. Returns the SVG document text.
std::string svg_loglog_plot(const std::string& title, const std::string& xlabel,
                            const std::string& ylabel,
                            const std::vector<PlotSeries>& series);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sdlab
