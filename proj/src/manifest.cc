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

#include "leakaudit/manifest.h"

#include <chrono>
#include <cstdlib>
#include <ctime>

#include "absl/strings/numbers.h"
#include "leakaudit/random.h"

namespace leakaudit {

std::string ContentDigest(std::string_view bytes) {
  return HexDigest(Fnv1a64(bytes));
}

std::string ConfigDigest(const std::vector<std::string>& arguments,
                         const std::vector<std::string>& input_contents) {
  std::string buffer;
  for (const auto& a : arguments) {
    buffer += a;
    buffer.push_back('\0');
  }
  buffer.push_back('\x1e');
  for (const auto& c : input_contents) {
    buffer += ContentDigest(c);
    buffer.push_back('\0');
  }
  return ContentDigest(buffer);
}

std::string UtcTimestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    int64_t value = 0;
    if (absl::SimpleAtoi(epoch, &value)) now = static_cast<std::time_t>(value);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

OrderedJson ManifestToJson(const RunManifest& manifest) {
  OrderedJson doc;
  doc["command"] = manifest.command;
  doc["arguments"] = manifest.arguments;
  doc["config_digest"] = manifest.config_digest;
  doc["seed"] = manifest.seed;
  doc["version"] = manifest.version;
  doc["started_at"] = manifest.started_at;
  doc["finished_at"] = manifest.finished_at;
  OrderedJson outputs = OrderedJson::array();
  for (const auto& [file, digest] : manifest.outputs) {
    OrderedJson entry;
    entry["file"] = file;
    entry["digest"] = digest;
    outputs.push_back(std::move(entry));
  }
  doc["outputs"] = std::move(outputs);
  return doc;
}

}  // namespace leakaudit
