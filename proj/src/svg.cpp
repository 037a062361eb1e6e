#include "sdlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sdlab {

namespace {

constexpr int kWidth = 640, kHeight = 480;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b"};

}  // namespace

std::string svg_loglog_plot(const std::string& title, const std::string& xlabel,
                            const std::string& ylabel,
                            const std::vector<PlotSeries>& series) {
  double xmin = std::numeric_limits<double>::max(), xmax = 0.0;
  double ymin = std::numeric_limits<double>::max(), ymax = 0.0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (x <= 0.0 || y <= 0.0) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax <= 0.0 || ymax <= 0.0) {  // nothing plottable
    xmin = ymin = 0.1;
    xmax = ymax = 10.0;
  }
  if (xmin == xmax) {
    xmin *= 0.5;
    xmax *= 2.0;
  }
  if (ymin == ymax) {
    ymin *= 0.5;
    ymax *= 2.0;
  }

  const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  auto px = [&](double x) {
    return kMarginL + (std::log10(x) - lx0) / (lx1 - lx0) *
                          (kWidth - kMarginL - kMarginR);
  };
  auto py = [&](double y) {
    return kHeight - kMarginB - (std::log10(y) - ly0) / (ly1 - ly0) *
                                    (kHeight - kMarginT - kMarginB);
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"15\">"
    << title << "</text>\n";

  // frame
  o << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
    << kWidth - kMarginL - kMarginR << "\" height=\""
    << kHeight - kMarginT - kMarginB
    << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // decade ticks
  for (int d = static_cast<int>(std::ceil(lx0));
       d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double x = px(std::pow(10.0, d));
    o << "<line x1=\"" << x << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
      << x << "\" y2=\"" << kMarginT << "\" stroke=\"#ddd\"/>\n"
      << "<text x=\"" << x << "\" y=\"" << kHeight - kMarginB + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">1e"
      << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0));
       d <= static_cast<int>(std::floor(ly1)); ++d) {
    const double y = py(std::pow(10.0, d));
    o << "<line x1=\"" << kMarginL << "\" y1=\"" << y << "\" x2=\""
      << kWidth - kMarginR << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n"
      << "<text x=\"" << kMarginL - 6 << "\" y=\"" << y + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">1e"
      << d << "</text>\n";
  }

  o << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
    << xlabel << "</text>\n"
    << "<text x=\"16\" y=\"" << kHeight / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 16 "
    << kHeight / 2 << ")\">" << ylabel << "</text>\n";

  int ci = 0;
  for (const auto& s : series) {
    const char* color = kColors[ci % 6];
    std::ostringstream path;
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (x <= 0.0 || y <= 0.0) continue;
      path << (first ? "M" : "L") << px(x) << " " << py(y) << " ";
      first = false;
      o << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (!first)
      o << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    o << "<text x=\"" << kWidth - kMarginR - 8 << "\" y=\""
      << kMarginT + 16 + 16 * ci
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\""
      << color << "\">" << s.label << "</text>\n";
    ++ci;
  }
  o << "</svg>\n";
  return o.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace sdlab
