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

#include "leakaudit/synth.h"

#include <algorithm>
#include <bit>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "leakaudit/random.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {

absl::StatusOr<JointPmf> RandomPositivePosteriorJoint(size_t x_size,
                                                      size_t y_size,
                                                      uint64_t seed,
                                                      double min_posterior) {
  if (x_size < 1 || y_size < 1) {
    return absl::InvalidArgumentError("alphabet sizes must be >= 1");
  }
  if (!(min_posterior > 0.0) ||
      min_posterior * static_cast<double>(y_size) >= 1.0) {
    return absl::InvalidArgumentError("min_posterior out of range");
  }
  Rng rng(seed, "joint");
  // Mixing with the uniform keeps every P(x) away from zero.
  std::vector<double> px = rng.FlatDirichlet(x_size);
  for (double& p : px) p = 0.9 * p + 0.1 / static_cast<double>(x_size);
  const double free_mass = 1.0 - min_posterior * static_cast<double>(y_size);
  std::vector<double> probs;
  probs.reserve(x_size * y_size);
  for (size_t x = 0; x < x_size; ++x) {
    const std::vector<double> row = rng.FlatDirichlet(y_size);
    for (size_t y = 0; y < y_size; ++y) {
      probs.push_back(px[x] * (min_posterior + free_mass * row[y]));
    }
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= total;
  return JointPmf::Create({Alphabet::Range("X", x_size), Alphabet::Range("Y", y_size)},
                          std::move(probs));
}

JointPmf RandomJoint(std::vector<Alphabet> axes, uint64_t seed) {
  size_t cells = 1;
  for (const auto& a : axes) cells *= a.size();
  Rng rng(seed, "joint");
  return *JointPmf::Create(std::move(axes), rng.FlatDirichlet(cells));
}

Channel RandomChannel(std::vector<Alphabet> input_axes, size_t z_size,
                      uint64_t seed, std::string output_name) {
  size_t num_rows = 1;
  for (const auto& a : input_axes) num_rows *= a.size();
  Rng rng(seed, "channel");
  std::vector<std::vector<double>> rows;
  rows.reserve(num_rows);
  for (size_t r = 0; r < num_rows; ++r) rows.push_back(rng.FlatDirichlet(z_size));
  return *Channel::Create(std::move(input_axes),
                          Alphabet::Range(std::move(output_name), z_size), rows);
}

absl::StatusOr<JointPmf> DeterministicLabelJoint(const std::string& rule,
                                                 size_t x_size) {
  if (x_size < 2) return absl::InvalidArgumentError("x_size must be >= 2");
  std::vector<double> probs(x_size * 2, 0.0);
  const double mass = 1.0 / static_cast<double>(x_size);
  for (size_t x = 0; x < x_size; ++x) {
    size_t y = 0;
    if (rule == "parity") {
      y = static_cast<size_t>(std::popcount(x) % 2);
    } else if (rule == "threshold") {
      y = x >= x_size / 2 ? 1 : 0;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown label rule '", rule, "'"));
    }
    probs[x * 2 + y] = mass;
  }
  return JointPmf::Create({Alphabet::Range("X", x_size), Alphabet::Range("Y", 2)},
                          std::move(probs));
}

absl::StatusOr<Channel> CopyLabelChannel(const JointPmf& joint_xy) {
  if (joint_xy.rank() != 2) return absl::InvalidArgumentError("expected (X, Y)");
  const size_t nx = joint_xy.dim(0);
  const size_t ny = joint_xy.dim(1);
  std::vector<size_t> mapping(nx, 0);
  for (size_t x = 0; x < nx; ++x) {
    size_t support = 0;
    for (size_t y = 0; y < ny; ++y) {
      if (joint_xy.at({x, y}) > 0.0) {
        mapping[x] = y;
        ++support;
      }
    }
    if (support > 1) {
      return absl::FailedPreconditionError(
          "label is not a deterministic function of X");
    }
  }
  return Channel::Deterministic(joint_xy.axis(0),
                                joint_xy.axis(1).Renamed("Z"), mapping);
}

absl::StatusOr<Dataset> SampleJoint(const JointPmf& joint, size_t rows,
                                    uint64_t seed) {
  if (rows == 0) return absl::InvalidArgumentError("rows must be >= 1");
  std::vector<double> cdf(joint.probs().begin(), joint.probs().end());
  std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
  Rng rng(seed, "sample");
  std::vector<std::vector<std::string>> values(joint.rank());
  for (auto& v : values) v.reserve(rows);
  for (size_t i = 0; i < rows; ++i) {
    const double u = rng.Uniform() * cdf.back();
    size_t cell = static_cast<size_t>(
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    cell = std::min(cell, cdf.size() - 1);
    while (joint.probs()[cell] == 0.0 && cell > 0) --cell;
    const std::vector<size_t> index = joint.MultiIndex(cell);
    for (size_t a = 0; a < joint.rank(); ++a) {
      values[a].push_back(joint.axis(a).symbol(index[a]));
    }
  }
  std::vector<std::string> names;
  for (const auto& a : joint.axes()) names.push_back(a.name());
  return Dataset::FromColumns(names, values);
}

std::vector<std::string> BatteryAttributes() { return {"x_1", "x_2", "x_3"}; }
std::vector<std::string> BatteryTasks() { return {"y_1", "y_2", "y_3"}; }

std::vector<std::string> BatteryInputs(const BatteryConfig& config) {
  std::vector<std::string> names = BatteryAttributes();
  for (size_t i = 0; i < 3 + config.nuisance; ++i) {
    names.push_back(absl::StrCat("u_", i + 1));
  }
  return names;
}

absl::StatusOr<Dataset> AttributeBattery(const BatteryConfig& config) {
  if (config.rows < 10) return absl::InvalidArgumentError("too small");
  Rng rng(config.seed, "battery");
  const size_t width = 9 + config.nuisance;
  std::vector<std::vector<std::string>> cols(width);
  auto bit = [](bool b) { return std::string(b ? "1" : "0"); };
  for (size_t i = 0; i < config.rows; ++i) {
    const bool x1 = rng.Bernoulli(0.5);
    const bool x2 = x1 != rng.Bernoulli(config.feature_flip);
    const bool x3 = x1 != rng.Bernoulli(config.feature_flip);
    bool u[3];
    for (bool& b : u) b = rng.Bernoulli(0.5);
    auto maj = [](bool a, bool b, bool c) { return int{a} + b + c >= 2; };
    const bool y1 = maj(x1, x2, u[0]) != rng.Bernoulli(config.task_noise);
    const bool y2 = maj(x2, x3, u[1]) != rng.Bernoulli(config.task_noise);
    const bool y3 = maj(x3, x1, u[2]) != rng.Bernoulli(config.task_noise);
    const bool row[9] = {x1, x2, x3, y1, y2, y3, u[0], u[1], u[2]};
    for (size_t c = 0; c < 9; ++c) cols[c].push_back(bit(row[c]));
    for (size_t c = 9; c < width; ++c) {
      cols[c].push_back(bit(rng.Bernoulli(0.5)));
    }
  }
  std::vector<std::string> names = BatteryAttributes();
  for (const auto& t : BatteryTasks()) names.push_back(t);
  for (size_t i = 0; i < 3 + config.nuisance; ++i) {
    names.push_back(absl::StrCat("u_", i + 1));
  }
  return Dataset::FromColumns(names, cols);
}

}  // namespace leakaudit
