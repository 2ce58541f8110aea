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

// Categorical datasets: every column is a vector of symbol codes over a
// sorted alphabet, read from and written to CSV with a header row.

#ifndef LEAKAUDIT_DATASET_H_
#define LEAKAUDIT_DATASET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "leakaudit/dist.h"

namespace leakaudit {

struct Column {
  // Alphabet symbols are sorted, so codes do not depend on row order.
  Alphabet alphabet;
  std::vector<uint32_t> codes;

  const std::string& name() const { return alphabet.name(); }
  const std::string& value(size_t row) const {
    return alphabet.symbol(codes[row]);
  }
};

class Dataset {
 public:
  static absl::StatusOr<Dataset> FromColumns(
      const std::vector<std::string>& names,
      const std::vector<std::vector<std::string>>& values);
  static absl::StatusOr<Dataset> FromCsv(std::string_view text);

  std::string ToCsv() const;

  size_t num_rows() const { return num_rows_; }
  size_t num_columns() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  std::vector<std::string> names() const;
  std::optional<size_t> ColumnIndex(std::string_view name) const;
  absl::StatusOr<const Column*> Find(std::string_view name) const;

  // Copy with `extra` appended; columns of the same name are replaced.
  absl::StatusOr<Dataset> WithColumns(std::vector<Column> extra) const;

  static absl::StatusOr<Column> MakeColumn(
      std::string name, const std::vector<std::string>& values);

 private:
  std::vector<Column> columns_;
  size_t num_rows_ = 0;
};

}  // namespace leakaudit

#endif  // LEAKAUDIT_DATASET_H_
