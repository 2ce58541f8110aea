// Copyright 2026 The Leakaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic, self-contained SVG rendering for audit heatmaps and
// frontier scatter plots.

#ifndef LEAKAUDIT_SVG_H_
#define LEAKAUDIT_SVG_H_

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace leakaudit {

struct HeatmapSpec {
  std::string title;
  std::vector<std::string> row_labels;     // tasks
  std::vector<std::string> column_labels;  // sensitive attributes
  std::vector<double> values;              // row-major
};

using Rgb = std::array<int, 3>;

// Diverging map anchored at 0: white at 0, red toward +scale, blue toward
// -scale. Values outside [-scale, scale] saturate.
Rgb DivergingColor(double value, double scale);

// InvalidArgument when the value count does not match the labels or a value
// is not finite.
absl::StatusOr<std::string> RenderHeatmapSvg(const HeatmapSpec& spec);

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  bool highlight = false;
};

struct ScatterSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterPoint> points;
};

// Square plot with equal axis ranges and the y = x diagonal drawn.
absl::StatusOr<std::string> RenderScatterSvg(const ScatterSpec& spec);

std::string XmlEscape(std::string_view text);

// Fixed three-decimal label; never prints "-0.000".
std::string Format3(double value);

}  // namespace leakaudit

#endif  // LEAKAUDIT_SVG_H_
