// Copyright 2026 The PBACC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pbacc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace pbacc {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string Escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

std::string RenderLineChart(const LineChart& chart) {
  const double inf = std::numeric_limits<double>::infinity();
  double x_min = inf;
  double x_max = -inf;
  double y_min = inf;
  double y_max = -inf;
  auto usable = [&](double y) { return std::isfinite(y) && (!chart.log_y || y > 0.0); };
  for (const ChartSeries& s : chart.series) {
    for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
      if (!usable(s.ys[i]) || !std::isfinite(s.xs[i])) continue;
      const double y = chart.log_y ? std::log10(s.ys[i]) : s.ys[i];
      x_min = std::min(x_min, s.xs[i]);
      x_max = std::max(x_max, s.xs[i]);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!std::isfinite(x_min)) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (chart.log_y) {
    y_min = std::floor(y_min);
    y_max = std::ceil(y_max);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << Num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << Escape(chart.title) << "</text>\n";
  out << "<rect x=\"" << Num(kLeft) << "\" y=\"" << Num(kTop) << "\" width=\"" << Num(plot_w)
      << "\" height=\"" << Num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int y_ticks = chart.log_y ? static_cast<int>(y_max - y_min) : 5;
  for (int t = 0; t <= y_ticks; ++t) {
    const double y = y_min + (y_max - y_min) * t / y_ticks;
    const std::string label = chart.log_y ? "1e" + std::to_string(static_cast<int>(y)) : Tick(y);
    out << "<line x1=\"" << Num(kLeft) << "\" x2=\"" << Num(kLeft + plot_w) << "\" y1=\""
        << Num(py(y)) << "\" y2=\"" << Num(py(y)) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << Num(kLeft - 6) << "\" y=\"" << Num(py(y) + 4)
        << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double x = x_min + (x_max - x_min) * t / 5.0;
    out << "<text x=\"" << Num(px(x)) << "\" y=\"" << Num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << Tick(x) << "</text>\n";
  }
  out << "<text x=\"" << Num(kLeft + plot_w / 2) << "\" y=\"" << Num(kHeight - 16)
      << "\" text-anchor=\"middle\">" << Escape(chart.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << Num(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">"
      << Escape(chart.y_label + (chart.log_y ? " (log scale)" : "")) << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const ChartSeries& s = chart.series[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream points;
    for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
      if (!usable(s.ys[i]) || !std::isfinite(s.xs[i])) continue;
      const double y = chart.log_y ? std::log10(s.ys[i]) : s.ys[i];
      points << Num(px(s.xs[i])) << "," << Num(py(y)) << " ";
      out << "<circle cx=\"" << Num(px(s.xs[i])) << "\" cy=\"" << Num(py(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
        << points.str() << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(k + 1);
    out << "<line x1=\"" << Num(kWidth - kRight + 12) << "\" x2=\"" << Num(kWidth - kRight + 32)
        << "\" y1=\"" << Num(ly - 4) << "\" y2=\"" << Num(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << Num(kWidth - kRight + 38) << "\" y=\"" << Num(ly) << "\">"
        << Escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pbacc
