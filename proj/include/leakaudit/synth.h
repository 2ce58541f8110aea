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

// Seeded instance generators: random joints and channels, deterministic-label
// joints, sampled datasets, and the correlated-attribute audit battery.

#ifndef LEAKAUDIT_SYNTH_H_
#define LEAKAUDIT_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "leakaudit/dataset.h"
#include "leakaudit/dist.h"

namespace leakaudit {

// Joint over (X, Y) with P(x) > 0 everywhere and P(y | x) >= min_posterior.
// Requires min_posterior * y_size < 1.
absl::StatusOr<JointPmf> RandomPositivePosteriorJoint(
    size_t x_size, size_t y_size, uint64_t seed, double min_posterior = 0.02);

// Joint over `axes` drawn uniformly from the simplex.
JointPmf RandomJoint(std::vector<Alphabet> axes, uint64_t seed);

// Channel with rows drawn uniformly from the simplex.
Channel RandomChannel(std::vector<Alphabet> input_axes, size_t z_size,
                      uint64_t seed, std::string output_name = "Z");

// Uniform X over `x_size` symbols with Y a deterministic function of X:
//   "parity":    Y = popcount(x) mod 2
//   "threshold": Y = [x >= x_size / 2]
// InvalidArgument for an unknown rule or x_size < 2.
absl::StatusOr<JointPmf> DeterministicLabelJoint(const std::string& rule,
                                                 size_t x_size = 4);

// The deterministic channel Z = Y for a deterministic-label joint.
absl::StatusOr<Channel> CopyLabelChannel(const JointPmf& joint_xy);

// N i.i.d. rows from `joint`, one categorical column per axis.
absl::StatusOr<Dataset> SampleJoint(const JointPmf& joint, size_t rows,
                                    uint64_t seed);

struct BatteryConfig {
  size_t rows = 20000;
  // x_2 and x_3 are copies of x_1 flipped independently with this rate.
  double feature_flip = 0.3;
  // Each task label is flipped with this rate.
  double task_noise = 0.35;
  // Extra fair-coin inputs u_4..u_{3+n} that no label depends on.
  size_t nuisance = 4;
  uint64_t seed = 0;
};

// Binary attributes x_1..x_3 (correlated through x_1), fair coins u_1..u_3
// plus the nuisance inputs, and noisy tasks
//   y_1 = maj(x_1, x_2, u_1), y_2 = maj(x_2, x_3, u_2), y_3 = maj(x_3, x_1, u_3).
// Every input column feeds the encoder; x_1..x_3 double as the sensitive
// attributes.
absl::StatusOr<Dataset> AttributeBattery(const BatteryConfig& config);

std::vector<std::string> BatteryAttributes();
std::vector<std::string> BatteryTasks();
// Encoder inputs: the attributes followed by the nuisance columns.
std::vector<std::string> BatteryInputs(const BatteryConfig& config);

}  // namespace leakaudit

#endif  // LEAKAUDIT_SYNTH_H_
