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

#include "leakaudit/dataset.h"

#include <algorithm>
#include <map>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsvRecords(
    std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) {
      records.push_back(std::move(record));
    }
    record.clear();
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) {
          return absl::InvalidArgumentError("CSV: stray quote inside field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) return absl::InvalidArgumentError("CSV: unterminated quote");
  if (field_started || !record.empty()) end_record();
  return records;
}

std::string QuoteCsv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

absl::StatusOr<Column> Dataset::MakeColumn(
    std::string name, const std::vector<std::string>& values) {
  std::set<std::string> distinct(values.begin(), values.end());
  if (distinct.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("column '", name, "' is empty"));
  }
  std::vector<std::string> symbols(distinct.begin(), distinct.end());
  std::map<std::string_view, uint32_t> index;
  for (size_t i = 0; i < symbols.size(); ++i) {
    index[symbols[i]] = static_cast<uint32_t>(i);
  }
  std::vector<uint32_t> codes;
  codes.reserve(values.size());
  for (const auto& v : values) codes.push_back(index.at(v));
  LEAKAUDIT_ASSIGN_OR_RETURN(Alphabet alphabet,
                             Alphabet::Create(std::move(name), symbols));
  return Column{std::move(alphabet), std::move(codes)};
}

absl::StatusOr<Dataset> Dataset::FromColumns(
    const std::vector<std::string>& names,
    const std::vector<std::vector<std::string>>& values) {
  if (names.size() != values.size() || names.empty()) {
    return absl::InvalidArgumentError("dataset: names/columns mismatch");
  }
  Dataset ds;
  ds.num_rows_ = values[0].size();
  if (ds.num_rows_ == 0) return absl::InvalidArgumentError("dataset: no rows");
  std::set<std::string> seen;
  for (size_t c = 0; c < names.size(); ++c) {
    if (!seen.insert(names[c]).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset: duplicate column '", names[c], "'"));
    }
    if (values[c].size() != ds.num_rows_) {
      return absl::InvalidArgumentError(absl::StrCat(
          "dataset: column '", names[c], "' has ", values[c].size(),
          " rows, expected ", ds.num_rows_));
    }
    LEAKAUDIT_ASSIGN_OR_RETURN(Column col, MakeColumn(names[c], values[c]));
    ds.columns_.push_back(std::move(col));
  }
  return ds;
}

absl::StatusOr<Dataset> Dataset::FromCsv(std::string_view text) {
  LEAKAUDIT_ASSIGN_OR_RETURN(auto records, ParseCsvRecords(text));
  if (records.size() < 2) {
    return absl::InvalidArgumentError("CSV: need a header and at least one row");
  }
  const std::vector<std::string>& header = records[0];
  std::vector<std::vector<std::string>> values(header.size());
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "CSV: record ", r + 1, " has ", records[r].size(),
          " fields, expected ", header.size()));
    }
    for (size_t c = 0; c < header.size(); ++c) {
      values[c].push_back(std::move(records[r][c]));
    }
  }
  return FromColumns(header, values);
}

std::string Dataset::ToCsv() const {
  std::string out;
  for (size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += QuoteCsv(columns_[c].name());
  }
  out += '\n';
  for (size_t r = 0; r < num_rows_; ++r) {
    for (size_t c = 0; c < columns_.size(); ++c) {
      if (c) out += ',';
      out += QuoteCsv(columns_[c].value(r));
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name());
  return out;
}

std::optional<size_t> Dataset::ColumnIndex(std::string_view name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name() == name) return i;
  }
  return std::nullopt;
}

absl::StatusOr<const Column*> Dataset::Find(std::string_view name) const {
  auto idx = ColumnIndex(name);
  if (!idx) {
    return absl::NotFoundError(absl::StrCat("missing column '", std::string(name), "'"));
  }
  return &columns_[*idx];
}

absl::StatusOr<Dataset> Dataset::WithColumns(std::vector<Column> extra) const {
  Dataset out = *this;
  for (auto& col : extra) {
    if (col.codes.size() != num_rows_) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column '", col.name(), "' has ", col.codes.size(), " rows"));
    }
    if (auto idx = out.ColumnIndex(col.name())) {
      out.columns_[*idx] = std::move(col);
    } else {
      out.columns_.push_back(std::move(col));
    }
  }
  return out;
}

}  // namespace leakaudit
