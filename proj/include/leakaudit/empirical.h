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

// Sample-based attribute-inference audit: dataset splits, plug-in Bayes
// adversaries, estimated I_inf gains, the per-(task, attribute) audit matrix,
// and pairwise attribute correlation.

#ifndef LEAKAUDIT_EMPIRICAL_H_
#define LEAKAUDIT_EMPIRICAL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "leakaudit/dataset.h"
#include "leakaudit/dist_json.h"

namespace leakaudit {

struct DatasetSplit {
  std::vector<size_t> adv_idx;    // auxiliary data given to the adversary
  std::vector<size_t> train_idx;  // model training data
  std::vector<size_t> eval_idx;   // evaluation data
  uint64_t seed = 0;
};

struct SplitSizes {
  size_t adv = 0;
  size_t train = 0;
  size_t eval = 0;
};

// 20% adversary, then 80/20 train/eval of the remainder, rounding half up.
SplitSizes SplitSizesFor(size_t n);

// Seeded uniform shuffle cut into contiguous adv/train/eval slices.
// InvalidArgument ("too small") when N < 10.
absl::StatusOr<DatasetSplit> SplitDataset(const Dataset& ds, uint64_t seed);

// Smoothed relative-frequency estimate of P(target | given columns).
class PluginTable {
 public:
  static absl::StatusOr<PluginTable> Fit(const Dataset& ds,
                                         std::span<const size_t> rows,
                                         std::string_view target,
                                         const std::vector<std::string>& given,
                                         double smoothing);

  // Estimated conditional for one cell of given-column codes. Unseen cells
  // fall back to the target's marginal frequency over the fitted rows.
  std::vector<double> Conditional(std::span<const uint32_t> given_codes) const;
  // Argmax of Conditional; ties go to the lowest symbol index.
  uint32_t PredictMap(std::span<const uint32_t> given_codes) const;
  // PredictMap for each listed row of `ds`, which must carry the fitted
  // columns with the same alphabets.
  absl::StatusOr<std::vector<uint32_t>> PredictRows(
      const Dataset& ds, std::span<const size_t> rows) const;

  const std::string& target() const { return target_; }
  const std::vector<std::string>& given() const { return given_; }
  double smoothing() const { return smoothing_; }
  size_t target_size() const { return target_size_; }
  size_t num_seen_cells() const { return counts_.size(); }

 private:
  uint64_t CellKey(std::span<const uint32_t> codes) const;

  std::string target_;
  std::vector<std::string> given_;
  std::vector<Alphabet> given_alphabets_;
  Alphabet target_alphabet_ = Alphabet::Range("target", 1);
  size_t target_size_ = 0;
  double smoothing_ = 0.0;
  std::map<uint64_t, std::vector<int64_t>> counts_;
  std::vector<int64_t> marginal_;
};

struct GainOptions {
  double label_smoothing = 0.0;
  double feature_smoothing = 1.0;
};

struct AuditCell {
  std::string task;
  std::string sensitive;
  double fundamental = 0.0;  // estimated I_inf(S; Y)
  double adv_gain = 0.0;     // estimated I_inf(S; Z | Y)
  double utility = 0.0;      // estimated I_inf(Y; Z)
  double delta_adv = 0.0;    // adv_gain - utility
  bool diagonal = false;
  // Some estimate came out negative (sampling noise; left unclamped).
  bool noisy = false;
};

// Fits the adversaries on split.adv_idx and scores accuracies on
// split.eval_idx.
absl::StatusOr<AuditCell> EstimateGains(const Dataset& ds,
                                        const DatasetSplit& split,
                                        const std::string& task,
                                        const std::string& sensitive,
                                        const std::vector<std::string>& z_cols,
                                        const GainOptions& options = {});

struct AuditMatrix {
  std::vector<std::string> tasks;
  std::vector<std::string> sensitives;
  // Row-major: cells[t * sensitives.size() + s].
  std::vector<AuditCell> cells;

  const AuditCell& at(size_t t, size_t s) const {
    return cells[t * sensitives.size() + s];
  }
};

struct Representation {
  Dataset data;
  std::vector<std::string> z_columns;
};

// Supplies the representation columns used for a task.
using ReprProvider =
    std::function<absl::StatusOr<Representation>(const std::string& task)>;

// Provider that uses the dataset's existing `z_` columns for every task.
ReprProvider ColumnsProvider(const Dataset& ds);

absl::StatusOr<AuditMatrix> BuildAuditMatrix(
    const Dataset& ds, const DatasetSplit& split,
    const std::vector<std::string>& tasks,
    const std::vector<std::string>& sensitives, const ReprProvider& provider,
    const GainOptions& options = {}, int jobs = 1);

// Cell-wise mean; delta_adv is recomputed from the averaged terms.
absl::StatusOr<AuditMatrix> AverageMatrices(
    const std::vector<AuditMatrix>& runs);

// Name of the sensitive attribute with the largest delta_adv in each task
// row, skipping the diagonal.
std::vector<std::string> TopAttributePerTask(const AuditMatrix& matrix);

OrderedJson AuditMatrixToJson(const AuditMatrix& matrix);
absl::StatusOr<AuditMatrix> AuditMatrixFromJson(const OrderedJson& doc);
std::string AuditMatrixCsv(const AuditMatrix& matrix);

struct PearsonResult {
  std::vector<std::string> columns;
  // |r| per pair, row-major; undefined pairs are 0.
  std::vector<double> abs_r;
  std::vector<std::string> warnings;

  double at(size_t i, size_t j) const { return abs_r[i * columns.size() + j]; }
};

// Absolute Pearson correlation between binary columns (symbol index 0/1).
// InvalidArgument ("not binary") for a column with more than two categories.
absl::StatusOr<PearsonResult> PearsonMatrix(
    const Dataset& ds, const std::vector<std::string>& columns);

}  // namespace leakaudit

#endif  // LEAKAUDIT_EMPIRICAL_H_
