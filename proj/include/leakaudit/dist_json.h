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

// JSON documents for joints and channels.
//
//   joint:   { "axes": [{"name": "X", "symbols": ["a", "b"]}, ...],
//              "probs": nested arrays, first axis outermost }
//   channel: { "input_axes": [...], "output_axis": {...}, "rows": [[...]] }
//
// Attribute mechanisms use the channel format with "role": "attribute".

#ifndef LEAKAUDIT_DIST_JSON_H_
#define LEAKAUDIT_DIST_JSON_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "leakaudit/dist.h"

namespace leakaudit {

using OrderedJson = nlohmann::ordered_json;

absl::StatusOr<Alphabet> AlphabetFromJson(const OrderedJson& doc);
OrderedJson AlphabetToJson(const Alphabet& alphabet);

absl::StatusOr<JointPmf> JointFromJson(const OrderedJson& doc);
OrderedJson JointToJson(const JointPmf& joint);

absl::StatusOr<Channel> ChannelFromJson(const OrderedJson& doc);
OrderedJson ChannelToJson(const Channel& channel, std::string_view role = "");

// Parses text; malformed JSON is an InvalidArgument error.
absl::StatusOr<OrderedJson> ParseJson(std::string_view text);
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

// Rounds to 12 significant digits, the precision of every emitted number.
double Round12(double value);
// Decimal rendering with 12 significant digits ("%.12g").
std::string Format12(double value);

}  // namespace leakaudit

#endif  // LEAKAUDIT_DIST_JSON_H_
