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

#ifndef PBACC_SVG_HPP_
#define PBACC_SVG_HPP_

#include <string>
#include <vector>

namespace pbacc {

struct ChartSeries {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<ChartSeries> series;
};

/// Standalone SVG document. Non-positive values are dropped on log axes.
std::string RenderLineChart(const LineChart& chart);

}  // namespace pbacc

#endif  // PBACC_SVG_HPP_
