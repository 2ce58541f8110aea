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

#include "leakaudit/dist_json.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

absl::Status FlattenProbs(const OrderedJson& node, size_t depth,
                          const std::vector<Alphabet>& axes,
                          std::vector<double>& out) {
  if (depth == axes.size()) {
    if (!node.is_number()) {
      return absl::InvalidArgumentError("probs: expected a number");
    }
    out.push_back(node.get<double>());
    return absl::OkStatus();
  }
  if (!node.is_array() || node.size() != axes[depth].size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("probs: expected an array of ", axes[depth].size(),
                     " entries for axis '", axes[depth].name(), "'"));
  }
  for (const auto& child : node) {
    LEAKAUDIT_RETURN_IF_ERROR(FlattenProbs(child, depth + 1, axes, out));
  }
  return absl::OkStatus();
}

OrderedJson NestProbs(const JointPmf& joint, size_t depth, size_t& cursor) {
  OrderedJson arr = OrderedJson::array();
  for (size_t i = 0; i < joint.dim(depth); ++i) {
    if (depth + 1 == joint.rank()) {
      arr.push_back(Round12(joint.probs()[cursor++]));
    } else {
      arr.push_back(NestProbs(joint, depth + 1, cursor));
    }
  }
  return arr;
}

}  // namespace

double Round12(double value) {
  if (!std::isfinite(value)) return value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return std::strtod(buf, nullptr);
}

std::string Format12(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

absl::StatusOr<Alphabet> AlphabetFromJson(const OrderedJson& doc) {
  if (!doc.is_object() || !doc.contains("name") || !doc.contains("symbols") ||
      !doc["name"].is_string() || !doc["symbols"].is_array()) {
    return absl::InvalidArgumentError(
        "alphabet: expected {\"name\": ..., \"symbols\": [...]}");
  }
  std::vector<std::string> symbols;
  for (const auto& s : doc["symbols"]) {
    if (s.is_string()) {
      symbols.push_back(s.get<std::string>());
    } else if (s.is_number_integer()) {
      symbols.push_back(std::to_string(s.get<long long>()));
    } else {
      return absl::InvalidArgumentError("alphabet: symbols must be strings");
    }
  }
  return Alphabet::Create(doc["name"].get<std::string>(), std::move(symbols));
}

OrderedJson AlphabetToJson(const Alphabet& alphabet) {
  OrderedJson doc;
  doc["name"] = alphabet.name();
  doc["symbols"] = alphabet.symbols();
  return doc;
}

absl::StatusOr<JointPmf> JointFromJson(const OrderedJson& doc) {
  if (!doc.is_object() || !doc.contains("axes") || !doc["axes"].is_array() ||
      !doc.contains("probs")) {
    return absl::InvalidArgumentError(
        "joint: expected {\"axes\": [...], \"probs\": [...]}");
  }
  std::vector<Alphabet> axes;
  for (const auto& a : doc["axes"]) {
    LEAKAUDIT_ASSIGN_OR_RETURN(Alphabet alphabet, AlphabetFromJson(a));
    axes.push_back(std::move(alphabet));
  }
  if (axes.empty()) return absl::InvalidArgumentError("joint: no axes");
  std::vector<double> probs;
  LEAKAUDIT_RETURN_IF_ERROR(FlattenProbs(doc["probs"], 0, axes, probs));
  return JointPmf::Create(std::move(axes), std::move(probs));
}

OrderedJson JointToJson(const JointPmf& joint) {
  OrderedJson doc;
  doc["axes"] = OrderedJson::array();
  for (const auto& a : joint.axes()) doc["axes"].push_back(AlphabetToJson(a));
  size_t cursor = 0;
  doc["probs"] = NestProbs(joint, 0, cursor);
  return doc;
}

absl::StatusOr<Channel> ChannelFromJson(const OrderedJson& doc) {
  if (!doc.is_object() || !doc.contains("input_axes") ||
      !doc["input_axes"].is_array() || !doc.contains("output_axis") ||
      !doc.contains("rows") || !doc["rows"].is_array()) {
    return absl::InvalidArgumentError(
        "channel: expected input_axes, output_axis and rows");
  }
  std::vector<Alphabet> inputs;
  for (const auto& a : doc["input_axes"]) {
    LEAKAUDIT_ASSIGN_OR_RETURN(Alphabet alphabet, AlphabetFromJson(a));
    inputs.push_back(std::move(alphabet));
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(Alphabet output,
                             AlphabetFromJson(doc["output_axis"]));
  std::vector<std::vector<double>> rows;
  for (const auto& r : doc["rows"]) {
    if (!r.is_array()) return absl::InvalidArgumentError("channel: bad row");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) {
        return absl::InvalidArgumentError("channel: rows must hold numbers");
      }
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return Channel::Create(std::move(inputs), std::move(output), rows);
}

OrderedJson ChannelToJson(const Channel& channel, std::string_view role) {
  OrderedJson doc;
  if (!role.empty()) doc["role"] = std::string(role);
  doc["input_axes"] = OrderedJson::array();
  for (const auto& a : channel.input_axes()) {
    doc["input_axes"].push_back(AlphabetToJson(a));
  }
  doc["output_axis"] = AlphabetToJson(channel.output_axis());
  doc["rows"] = OrderedJson::array();
  for (size_t r = 0; r < channel.num_rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (double v : channel.row(r)) row.push_back(Round12(v));
    doc["rows"].push_back(std::move(row));
  }
  return doc;
}

absl::StatusOr<OrderedJson> ParseJson(std::string_view text) {
  OrderedJson doc = OrderedJson::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  return doc;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) return absl::UnavailableError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace leakaudit
