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

// Run manifests written alongside every CLI output bundle.

#ifndef LEAKAUDIT_MANIFEST_H_
#define LEAKAUDIT_MANIFEST_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "leakaudit/dist_json.h"

namespace leakaudit {

inline constexpr char kToolVersion[] = "0.1.0";

struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  // Hash over the arguments and the contents of every input file.
  std::string config_digest;
  uint64_t seed = 0;
  std::string version = kToolVersion;
  std::string started_at;
  std::string finished_at;
  // (file name, content digest) for each file of the bundle.
  std::vector<std::pair<std::string, std::string>> outputs;
};

std::string ConfigDigest(const std::vector<std::string>& arguments,
                         const std::vector<std::string>& input_contents);

// Hex FNV-1a digest of a byte string.
std::string ContentDigest(std::string_view bytes);

// UTC time as YYYY-MM-DDTHH:MM:SSZ. SOURCE_DATE_EPOCH, when set to an
// integer, replaces the wall clock so bundles can be byte-identical.
std::string UtcTimestamp();

OrderedJson ManifestToJson(const RunManifest& manifest);

}  // namespace leakaudit

#endif  // LEAKAUDIT_MANIFEST_H_
