// Copyright 2026 The loadplan Authors
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

#ifndef LOADPLAN_SRC_SVG_HPP_
#define LOADPLAN_SRC_SVG_HPP_

#include <string>
#include <vector>

namespace loadplan::detail {

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional symmetric error bars
};

struct LinePanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

struct StackedPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> layer_names;
  std::vector<std::string> layer_colors;
  // values[bar][layer]
  std::vector<std::vector<double>> values;
  std::vector<std::string> bar_labels;
};

/// Panels laid out in a grid with `columns` columns. Inline styles only.
std::string render_lines(const std::vector<LinePanel>& panels, int columns);
std::string render_stacked(const std::vector<StackedPanel>& panels, int columns);

std::string xml_escape(const std::string& text);

}  // namespace loadplan::detail

#endif  // LOADPLAN_SRC_SVG_HPP_
