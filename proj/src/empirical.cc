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

#include "leakaudit/empirical.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/match.h"
#include "leakaudit/parallel.h"
#include "leakaudit/random.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

size_t RoundHalfUp(double v) { return static_cast<size_t>(std::floor(v + 0.5)); }

// log2(a / b) with the degenerate cases made explicit.
double LogRatio(double a, double b) {
  if (a == b) return 0.0;
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log2(a / b);
}

absl::StatusOr<double> Accuracy(const PluginTable& table, const Dataset& ds,
                                std::span<const size_t> rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no evaluation rows");
  LEAKAUDIT_ASSIGN_OR_RETURN(const Column* target, ds.Find(table.target()));
  LEAKAUDIT_ASSIGN_OR_RETURN(std::vector<uint32_t> guesses,
                             table.PredictRows(ds, rows));
  size_t hits = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (guesses[i] == target->codes[rows[i]]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

OrderedJson Number12(double value) {
  if (!std::isfinite(value)) return nullptr;
  return Round12(value);
}

double NumberFromJson(const OrderedJson& v) {
  if (v.is_number()) return v.get<double>();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SplitSizes SplitSizesFor(size_t n) {
  SplitSizes sizes;
  sizes.adv = RoundHalfUp(0.2 * static_cast<double>(n));
  const size_t rest = n - sizes.adv;
  sizes.train = RoundHalfUp(0.8 * static_cast<double>(rest));
  sizes.eval = rest - sizes.train;
  return sizes;
}

absl::StatusOr<DatasetSplit> SplitDataset(const Dataset& ds, uint64_t seed) {
  const size_t n = ds.num_rows();
  if (n < 10) {
    return absl::InvalidArgumentError(
        absl::StrCat("too small: ", n, " rows, need at least 10"));
  }
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed, "split");
  rng.Shuffle(order);
  const SplitSizes sizes = SplitSizesFor(n);
  DatasetSplit split;
  split.seed = seed;
  split.adv_idx.assign(order.begin(), order.begin() + sizes.adv);
  split.train_idx.assign(order.begin() + sizes.adv,
                         order.begin() + sizes.adv + sizes.train);
  split.eval_idx.assign(order.begin() + sizes.adv + sizes.train, order.end());
  return split;
}

absl::StatusOr<PluginTable> PluginTable::Fit(
    const Dataset& ds, std::span<const size_t> rows, std::string_view target,
    const std::vector<std::string>& given, double smoothing) {
  if (rows.empty()) return absl::InvalidArgumentError("no rows to fit");
  if (smoothing < 0.0) return absl::InvalidArgumentError("negative smoothing");
  LEAKAUDIT_ASSIGN_OR_RETURN(const Column* target_col, ds.Find(target));
  PluginTable table;
  table.target_ = std::string(target);
  table.given_ = given;
  table.target_alphabet_ = target_col->alphabet;
  table.target_size_ = target_col->alphabet.size();
  table.smoothing_ = smoothing;
  table.marginal_.assign(table.target_size_, 0);
  std::vector<const Column*> given_cols;
  double cells = 1.0;
  for (const auto& g : given) {
    LEAKAUDIT_ASSIGN_OR_RETURN(const Column* col, ds.Find(g));
    given_cols.push_back(col);
    table.given_alphabets_.push_back(col->alphabet);
    cells *= static_cast<double>(col->alphabet.size());
  }
  if (cells > 9e18) {
    return absl::InvalidArgumentError("too many conditioning cells");
  }
  std::vector<uint32_t> codes(given_cols.size());
  for (size_t r : rows) {
    if (r >= ds.num_rows()) return absl::OutOfRangeError("row out of range");
    for (size_t g = 0; g < given_cols.size(); ++g) {
      codes[g] = given_cols[g]->codes[r];
    }
    auto& cell = table.counts_[table.CellKey(codes)];
    if (cell.empty()) cell.assign(table.target_size_, 0);
    ++cell[target_col->codes[r]];
    ++table.marginal_[target_col->codes[r]];
  }
  return table;
}

uint64_t PluginTable::CellKey(std::span<const uint32_t> codes) const {
  uint64_t key = 0;
  for (size_t g = 0; g < codes.size(); ++g) {
    key = key * given_alphabets_[g].size() + codes[g];
  }
  return key;
}

std::vector<double> PluginTable::Conditional(
    std::span<const uint32_t> given_codes) const {
  std::vector<double> out(target_size_, 0.0);
  auto it = counts_.find(CellKey(given_codes));
  if (it == counts_.end()) {
    int64_t total = 0;
    for (int64_t c : marginal_) total += c;
    for (size_t t = 0; t < target_size_; ++t) {
      out[t] = static_cast<double>(marginal_[t]) / static_cast<double>(total);
    }
    return out;
  }
  int64_t total = 0;
  for (int64_t c : it->second) total += c;
  const double denom =
      static_cast<double>(total) + smoothing_ * static_cast<double>(target_size_);
  for (size_t t = 0; t < target_size_; ++t) {
    out[t] = (static_cast<double>(it->second[t]) + smoothing_) / denom;
  }
  return out;
}

uint32_t PluginTable::PredictMap(std::span<const uint32_t> given_codes) const {
  const std::vector<double> p = Conditional(given_codes);
  uint32_t best = 0;
  for (uint32_t t = 1; t < p.size(); ++t) {
    if (p[t] > p[best]) best = t;
  }
  return best;
}

absl::StatusOr<std::vector<uint32_t>> PluginTable::PredictRows(
    const Dataset& ds, std::span<const size_t> rows) const {
  std::vector<const Column*> cols;
  for (size_t g = 0; g < given_.size(); ++g) {
    LEAKAUDIT_ASSIGN_OR_RETURN(const Column* col, ds.Find(given_[g]));
    if (col->alphabet != given_alphabets_[g]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column '", given_[g], "' differs from the fitted alphabet"));
    }
    cols.push_back(col);
  }
  std::vector<uint32_t> out;
  out.reserve(rows.size());
  std::vector<uint32_t> codes(cols.size());
  for (size_t r : rows) {
    for (size_t g = 0; g < cols.size(); ++g) codes[g] = cols[g]->codes[r];
    out.push_back(PredictMap(codes));
  }
  return out;
}

absl::StatusOr<AuditCell> EstimateGains(const Dataset& ds,
                                        const DatasetSplit& split,
                                        const std::string& task,
                                        const std::string& sensitive,
                                        const std::vector<std::string>& z_cols,
                                        const GainOptions& options) {
  std::vector<std::string> z_and_y = z_cols;
  z_and_y.push_back(task);
  const auto& adv = split.adv_idx;
  const auto& eval = split.eval_idx;

  LEAKAUDIT_ASSIGN_OR_RETURN(PluginTable s_baseline,
                             PluginTable::Fit(ds, adv, sensitive, {}, 0.0));
  LEAKAUDIT_ASSIGN_OR_RETURN(
      PluginTable s_from_y,
      PluginTable::Fit(ds, adv, sensitive, {task}, options.label_smoothing));
  LEAKAUDIT_ASSIGN_OR_RETURN(
      PluginTable s_from_zy,
      PluginTable::Fit(ds, adv, sensitive, z_and_y, options.feature_smoothing));
  LEAKAUDIT_ASSIGN_OR_RETURN(PluginTable y_baseline,
                             PluginTable::Fit(ds, adv, task, {}, 0.0));
  LEAKAUDIT_ASSIGN_OR_RETURN(
      PluginTable y_from_z,
      PluginTable::Fit(ds, adv, task, z_cols, options.feature_smoothing));

  LEAKAUDIT_ASSIGN_OR_RETURN(double acc_s, Accuracy(s_baseline, ds, eval));
  LEAKAUDIT_ASSIGN_OR_RETURN(double acc_s_y, Accuracy(s_from_y, ds, eval));
  LEAKAUDIT_ASSIGN_OR_RETURN(double acc_s_zy, Accuracy(s_from_zy, ds, eval));
  LEAKAUDIT_ASSIGN_OR_RETURN(double acc_y, Accuracy(y_baseline, ds, eval));
  LEAKAUDIT_ASSIGN_OR_RETURN(double acc_y_z, Accuracy(y_from_z, ds, eval));

  AuditCell cell;
  cell.task = task;
  cell.sensitive = sensitive;
  cell.fundamental = LogRatio(acc_s_y, acc_s);
  cell.adv_gain = LogRatio(acc_s_zy, acc_s_y);
  cell.utility = LogRatio(acc_y_z, acc_y);
  cell.delta_adv = cell.adv_gain - cell.utility;
  cell.diagonal = task == sensitive;
  cell.noisy = cell.fundamental < 0 || cell.adv_gain < 0 || cell.utility < 0;
  return cell;
}

ReprProvider ColumnsProvider(const Dataset& ds) {
  return [ds](const std::string&) -> absl::StatusOr<Representation> {
    Representation repr{ds, {}};
    for (const auto& name : ds.names()) {
      if (absl::StartsWith(name, "z_")) repr.z_columns.push_back(name);
    }
    return repr;
  };
}

absl::StatusOr<AuditMatrix> BuildAuditMatrix(
    const Dataset& ds, const DatasetSplit& split,
    const std::vector<std::string>& tasks,
    const std::vector<std::string>& sensitives, const ReprProvider& provider,
    const GainOptions& options, int jobs) {
  for (const auto& name : tasks) LEAKAUDIT_RETURN_IF_ERROR(ds.Find(name).status());
  for (const auto& name : sensitives) {
    LEAKAUDIT_RETURN_IF_ERROR(ds.Find(name).status());
  }
  std::vector<absl::StatusOr<Representation>> reprs(
      tasks.size(), absl::UnknownError("not run"));
  ParallelFor(tasks.size(), jobs,
              [&](size_t t) { reprs[t] = provider(tasks[t]); });
  for (const auto& r : reprs) LEAKAUDIT_RETURN_IF_ERROR(r.status());

  AuditMatrix matrix;
  matrix.tasks = tasks;
  matrix.sensitives = sensitives;
  const size_t ns = sensitives.size();
  std::vector<absl::StatusOr<AuditCell>> cells(tasks.size() * ns,
                                               absl::UnknownError("not run"));
  ParallelFor(cells.size(), jobs, [&](size_t i) {
    const Representation& repr = *reprs[i / ns];
    cells[i] = EstimateGains(repr.data, split, tasks[i / ns], sensitives[i % ns],
                             repr.z_columns, options);
  });
  for (auto& c : cells) {
    if (!c.ok()) return c.status();
    matrix.cells.push_back(*std::move(c));
  }
  return matrix;
}

absl::StatusOr<AuditMatrix> AverageMatrices(
    const std::vector<AuditMatrix>& runs) {
  if (runs.empty()) return absl::InvalidArgumentError("no runs to average");
  AuditMatrix out = runs.front();
  for (const auto& run : runs) {
    if (run.tasks != out.tasks || run.sensitives != out.sensitives) {
      return absl::InvalidArgumentError("runs have different shapes");
    }
  }
  const double n = static_cast<double>(runs.size());
  for (size_t i = 0; i < out.cells.size(); ++i) {
    double fundamental = 0.0, adv = 0.0, util = 0.0;
    for (const auto& run : runs) {
      fundamental += run.cells[i].fundamental;
      adv += run.cells[i].adv_gain;
      util += run.cells[i].utility;
    }
    AuditCell& cell = out.cells[i];
    cell.fundamental = fundamental / n;
    cell.adv_gain = adv / n;
    cell.utility = util / n;
    cell.delta_adv = cell.adv_gain - cell.utility;
    cell.noisy = cell.fundamental < 0 || cell.adv_gain < 0 || cell.utility < 0;
  }
  return out;
}

std::vector<std::string> TopAttributePerTask(const AuditMatrix& matrix) {
  std::vector<std::string> out;
  for (size_t t = 0; t < matrix.tasks.size(); ++t) {
    const AuditCell* best = nullptr;
    for (size_t s = 0; s < matrix.sensitives.size(); ++s) {
      const AuditCell& cell = matrix.at(t, s);
      if (cell.diagonal) continue;
      if (!best || cell.delta_adv > best->delta_adv) best = &cell;
    }
    out.push_back(best ? best->sensitive : std::string());
  }
  return out;
}

OrderedJson AuditMatrixToJson(const AuditMatrix& matrix) {
  OrderedJson doc;
  doc["tasks"] = matrix.tasks;
  doc["sensitives"] = matrix.sensitives;
  OrderedJson cells = OrderedJson::array();
  for (const auto& c : matrix.cells) {
    OrderedJson cell;
    cell["task"] = c.task;
    cell["sensitive"] = c.sensitive;
    cell["fundamental"] = Number12(c.fundamental);
    cell["adv_gain"] = Number12(c.adv_gain);
    cell["utility"] = Number12(c.utility);
    cell["delta_adv"] = Number12(c.delta_adv);
    cell["diagonal"] = c.diagonal;
    cell["noisy"] = c.noisy;
    cells.push_back(std::move(cell));
  }
  doc["cells"] = std::move(cells);
  return doc;
}

absl::StatusOr<AuditMatrix> AuditMatrixFromJson(const OrderedJson& doc) {
  if (!doc.is_object() || !doc.contains("tasks") ||
      !doc.contains("sensitives") || !doc.contains("cells") ||
      !doc["cells"].is_array()) {
    return absl::InvalidArgumentError("audit JSON: missing fields");
  }
  AuditMatrix m;
  try {
    m.tasks = doc["tasks"].get<std::vector<std::string>>();
    m.sensitives = doc["sensitives"].get<std::vector<std::string>>();
    for (const auto& c : doc["cells"]) {
      AuditCell cell;
      cell.task = c.at("task").get<std::string>();
      cell.sensitive = c.at("sensitive").get<std::string>();
      cell.fundamental = NumberFromJson(c.at("fundamental"));
      cell.adv_gain = NumberFromJson(c.at("adv_gain"));
      cell.utility = NumberFromJson(c.at("utility"));
      cell.delta_adv = NumberFromJson(c.at("delta_adv"));
      cell.diagonal = c.value("diagonal", false);
      cell.noisy = c.value("noisy", false);
      m.cells.push_back(std::move(cell));
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("audit JSON: ", e.what()));
  }
  if (m.cells.size() != m.tasks.size() * m.sensitives.size()) {
    return absl::InvalidArgumentError("audit JSON: cell count mismatch");
  }
  return m;
}

std::string AuditMatrixCsv(const AuditMatrix& matrix) {
  std::string out = "task,sensitive,fundamental,adv_gain,utility,delta_adv\n";
  for (const auto& c : matrix.cells) {
    absl::StrAppend(&out, c.task, ",", c.sensitive, ",",
                    Format12(c.fundamental), ",", Format12(c.adv_gain), ",",
                    Format12(c.utility), ",", Format12(c.delta_adv), "\n");
  }
  return out;
}

absl::StatusOr<PearsonResult> PearsonMatrix(
    const Dataset& ds, const std::vector<std::string>& columns) {
  PearsonResult result;
  result.columns = columns;
  const size_t k = columns.size();
  const size_t n = ds.num_rows();
  std::vector<const Column*> cols;
  for (const auto& name : columns) {
    LEAKAUDIT_ASSIGN_OR_RETURN(const Column* col, ds.Find(name));
    if (col->alphabet.size() > 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "not binary: column '", name, "' has ", col->alphabet.size(),
          " categories"));
    }
    cols.push_back(col);
  }
  std::vector<double> mean(k, 0.0), sd(k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    for (size_t r = 0; r < n; ++r) mean[i] += cols[i]->codes[r];
    mean[i] /= static_cast<double>(n);
    for (size_t r = 0; r < n; ++r) {
      const double d = cols[i]->codes[r] - mean[i];
      sd[i] += d * d;
    }
    sd[i] = std::sqrt(sd[i]);
  }
  result.abs_r.assign(k * k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    if (sd[i] == 0.0) {
      result.warnings.push_back(absl::StrCat(
          "column '", columns[i], "' is constant; correlations reported as 0"));
    }
    for (size_t j = 0; j < k; ++j) {
      if (i == j) {
        result.abs_r[i * k + j] = 1.0;
        continue;
      }
      if (sd[i] == 0.0 || sd[j] == 0.0) continue;
      double cov = 0.0;
      for (size_t r = 0; r < n; ++r) {
        cov += (cols[i]->codes[r] - mean[i]) * (cols[j]->codes[r] - mean[j]);
      }
      result.abs_r[i * k + j] = std::min(1.0, std::abs(cov / (sd[i] * sd[j])));
    }
  }
  return result;
}

}  // namespace leakaudit
