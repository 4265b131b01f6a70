#pragma once

#include "boolperc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace boolperc::io {

/// Line plot of one statistic against L, one polyline per u, with
/// interval whiskers.
inline std::string svg_plot(const std::vector<EstimateRow>& rows, const std::string& stat) {
  std::map<double, std::vector<const EstimateRow*>> series;
  for (const auto& r : rows)
    if (r.stat == stat) series[r.u].push_back(&r);

  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& [u, pts] : series)
    for (const auto* r : pts) {
      xmin = std::min(xmin, r->side);
      xmax = std::max(xmax, r->side);
      ymin = std::min(ymin, r->lo);
      ymax = std::max(ymax, r->hi);
    }
  if (series.empty()) xmin = ymin = 0.0, xmax = ymax = 1.0;
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;

  const double w = 640, h = 400, pad = 50;
  auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
  auto py = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << stat << " vs L</text>\n"
     << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
     << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << pad << "\" y=\"" << h - pad + 18 << "\">" << format_number(xmin) << "</text>\n"
     << "<text x=\"" << w - pad << "\" y=\"" << h - pad + 18 << "\" text-anchor=\"end\">"
     << format_number(xmax) << "</text>\n"
     << "<text x=\"" << pad - 4 << "\" y=\"" << h - pad << "\" text-anchor=\"end\">" << format_number(ymin)
     << "</text>\n"
     << "<text x=\"" << pad - 4 << "\" y=\"" << pad + 4 << "\" text-anchor=\"end\">" << format_number(ymax)
     << "</text>\n";
  int idx = 0;
  for (auto& [u, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->side < b->side; });
    const char* c = colors[idx++ % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
    for (const auto* r : pts) os << px(r->side) << "," << py(r->estimate) << " ";
    os << "\"/>\n";
    for (const auto* r : pts)
      os << "<line x1=\"" << px(r->side) << "\" y1=\"" << py(r->lo) << "\" x2=\"" << px(r->side)
         << "\" y2=\"" << py(r->hi) << "\" stroke=\"" << c << "\"/>\n";
    os << "<text x=\"" << w - pad << "\" y=\"" << pad + 16 * idx << "\" text-anchor=\"end\" fill=\"" << c
       << "\">u=" << format_number(u) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace boolperc::io
