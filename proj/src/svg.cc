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

#include "leakaudit/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "leakaudit/dist_json.h"

namespace leakaudit {
namespace {

constexpr Rgb kWhite = {255, 255, 255};
constexpr Rgb kRed = {178, 24, 43};
constexpr Rgb kBlue = {33, 102, 172};

std::string Hex(const Rgb& c) {
  return absl::StrFormat("#%02x%02x%02x", c[0], c[1], c[2]);
}

std::string Num(double v) { return absl::StrFormat("%.3f", v); }

std::string Header(double width, double height) {
  return absl::StrCat(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"", Num(width),
      "\" height=\"", Num(height), "\" viewBox=\"0 0 ", Num(width), " ",
      Num(height), "\" font-family=\"sans-serif\">\n",
      "<rect x=\"0\" y=\"0\" width=\"", Num(width), "\" height=\"",
      Num(height), "\" fill=\"#ffffff\"/>\n");
}

std::string Text(double x, double y, const std::string& body,
                 const char* anchor, int size, const std::string& extra = "") {
  return absl::StrCat("<text x=\"", Num(x), "\" y=\"", Num(y),
                      "\" text-anchor=\"", anchor, "\" font-size=\"", size,
                      "\"", extra, ">", XmlEscape(body), "</text>\n");
}

}  // namespace

std::string XmlEscape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Format3(double value) {
  std::string s = absl::StrFormat("%.3f", value);
  if (s == "-0.000") s = "0.000";
  return s;
}

Rgb DivergingColor(double value, double scale) {
  const double t =
      scale > 0.0 ? std::clamp(value / scale, -1.0, 1.0) : 0.0;
  const Rgb& end = t >= 0.0 ? kRed : kBlue;
  const double a = std::abs(t);
  Rgb out;
  for (size_t i = 0; i < 3; ++i) {
    out[i] = static_cast<int>(
        std::lround(kWhite[i] + a * (end[i] - kWhite[i])));
  }
  return out;
}

absl::StatusOr<std::string> RenderHeatmapSvg(const HeatmapSpec& spec) {
  const size_t rows = spec.row_labels.size();
  const size_t cols = spec.column_labels.size();
  if (rows == 0 || cols == 0 || spec.values.size() != rows * cols) {
    return absl::InvalidArgumentError("heatmap grid does not match labels");
  }
  double scale = 0.0;
  for (double v : spec.values) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("heatmap value is not finite");
    }
    scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) scale = 1.0;

  constexpr double kCellW = 90.0, kCellH = 40.0;
  constexpr double kLeft = 140.0, kTop = 80.0, kLegendGap = 30.0;
  constexpr double kLegendW = 20.0;
  const double grid_w = kCellW * static_cast<double>(cols);
  const double grid_h = kCellH * static_cast<double>(rows);
  const double legend_h = std::max(grid_h, 120.0);
  const double width = kLeft + grid_w + kLegendGap + kLegendW + 80.0;
  const double height = kTop + legend_h + 40.0;

  std::string svg = Header(width, height);
  absl::StrAppend(&svg, "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" "
                        "x2=\"0\" y2=\"0\">",
                  "<stop offset=\"0\" stop-color=\"", Hex(kBlue), "\"/>",
                  "<stop offset=\"0.5\" stop-color=\"", Hex(kWhite), "\"/>",
                  "<stop offset=\"1\" stop-color=\"", Hex(kRed), "\"/>",
                  "</linearGradient></defs>\n");
  absl::StrAppend(&svg, Text(width / 2.0, 24.0, spec.title, "middle", 14));
  for (size_t c = 0; c < cols; ++c) {
    absl::StrAppend(&svg, Text(kLeft + kCellW * (c + 0.5), kTop - 10.0,
                               spec.column_labels[c], "middle", 11));
  }
  for (size_t r = 0; r < rows; ++r) {
    const double y = kTop + kCellH * static_cast<double>(r);
    absl::StrAppend(&svg, Text(kLeft - 8.0, y + kCellH * 0.5 + 4.0,
                               spec.row_labels[r], "end", 11));
    for (size_t c = 0; c < cols; ++c) {
      const double v = spec.values[r * cols + c];
      const double x = kLeft + kCellW * static_cast<double>(c);
      const Rgb color = DivergingColor(v, scale);
      const bool dark = std::abs(v) / scale > 0.6;
      absl::StrAppend(&svg, "<rect class=\"cell\" x=\"", Num(x), "\" y=\"",
                      Num(y), "\" width=\"", Num(kCellW), "\" height=\"",
                      Num(kCellH), "\" fill=\"", Hex(color),
                      "\" stroke=\"#cccccc\" data-value=\"", Format12(v),
                      "\"/>\n");
      absl::StrAppend(
          &svg, Text(x + kCellW * 0.5, y + kCellH * 0.5 + 4.0, Format3(v),
                     "middle", 11,
                     dark ? " fill=\"#ffffff\"" : " fill=\"#000000\""));
    }
  }
  const double lx = kLeft + grid_w + kLegendGap;
  absl::StrAppend(&svg, "<rect class=\"legend\" x=\"", Num(lx), "\" y=\"",
                  Num(kTop), "\" width=\"", Num(kLegendW), "\" height=\"",
                  Num(legend_h), "\" fill=\"url(#scale)\" stroke=\"#888888\"/>\n");
  absl::StrAppend(&svg, Text(lx + kLegendW + 4.0, kTop + 10.0, Format3(scale),
                             "start", 10));
  absl::StrAppend(&svg, Text(lx + kLegendW + 4.0, kTop + legend_h * 0.5 + 4.0,
                             Format3(0.0), "start", 10));
  absl::StrAppend(&svg, Text(lx + kLegendW + 4.0, kTop + legend_h,
                             Format3(-scale), "start", 10));
  absl::StrAppend(&svg, "</svg>\n");
  return svg;
}

absl::StatusOr<std::string> RenderScatterSvg(const ScatterSpec& spec) {
  double top = 0.0;
  for (const auto& p : spec.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      return absl::InvalidArgumentError("scatter point is not finite");
    }
    top = std::max({top, p.x, p.y});
  }
  // Equal ranges on both axes keep the diagonal at 45 degrees.
  const double range = top > 0.0 ? top * 1.05 : 1.0;
  constexpr double kLeft = 70.0, kTop = 50.0, kSize = 400.0;
  const double width = kLeft + kSize + 30.0;
  const double height = kTop + kSize + 60.0;
  auto px = [&](double x) { return kLeft + kSize * x / range; };
  auto py = [&](double y) { return kTop + kSize * (1.0 - y / range); };

  std::string svg = Header(width, height);
  absl::StrAppend(&svg, Text(width / 2.0, 24.0, spec.title, "middle", 14));
  absl::StrAppend(&svg, "<rect x=\"", Num(kLeft), "\" y=\"", Num(kTop),
                  "\" width=\"", Num(kSize), "\" height=\"", Num(kSize),
                  "\" fill=\"none\" stroke=\"#000000\"/>\n");
  for (int i = 0; i <= 5; ++i) {
    const double v = range * i / 5.0;
    absl::StrAppend(&svg, Text(px(v), kTop + kSize + 16.0, absl::StrFormat("%.2f", v),
                               "middle", 10));
    absl::StrAppend(&svg, Text(kLeft - 6.0, py(v) + 3.0,
                               absl::StrFormat("%.2f", v), "end", 10));
  }
  absl::StrAppend(&svg, Text(kLeft + kSize / 2.0, kTop + kSize + 40.0,
                             spec.x_label, "middle", 12));
  absl::StrAppend(&svg, Text(18.0, kTop + kSize / 2.0, spec.y_label, "middle",
                             12,
                             absl::StrCat(" transform=\"rotate(-90 18 ",
                                          Num(kTop + kSize / 2.0), ")\"")));
  absl::StrAppend(&svg, "<line class=\"diagonal\" x1=\"", Num(px(0.0)),
                  "\" y1=\"", Num(py(0.0)), "\" x2=\"", Num(px(range)),
                  "\" y2=\"", Num(py(range)),
                  "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n");
  for (const auto& p : spec.points) {
    absl::StrAppend(&svg, "<circle class=\"point\" cx=\"", Num(px(p.x)),
                    "\" cy=\"", Num(py(p.y)), "\" r=\"3\" fill=\"",
                    p.highlight ? "#b2182b" : "#2166ac",
                    "\" fill-opacity=\"0.6\" data-x=\"", Format12(p.x),
                    "\" data-y=\"", Format12(p.y), "\"/>\n");
  }
  absl::StrAppend(&svg, "</svg>\n");
  return svg;
}

}  // namespace leakaudit
