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

// Utility-vs-leakage feasible region: exhaustive enumeration of deterministic
// feature maps, stochastic hill-climbing over channels, Pareto filtering, and
// the feasibility check against the trade-off bound.

#ifndef LEAKAUDIT_FRONTIER_H_
#define LEAKAUDIT_FRONTIER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "leakaudit/dist.h"
#include "leakaudit/measures.h"

namespace leakaudit {

enum class Provenance { kEnumerated, kSearched };

const char* ProvenanceName(Provenance p);

struct FrontierPoint {
  double gamma_lpp = 0.0;
  double gamma_ulpp = 0.0;
  double utility_i1 = 0.0;
  double utility_iinf = 0.0;
  std::string channel_digest;
  Provenance provenance = Provenance::kEnumerated;
  // Rows of the evaluated channel; empty for points not built from one.
  std::vector<std::vector<double>> rows;
};

struct SearchConfig {
  size_t z_size = 2;
  size_t restarts = 32;
  size_t steps_per_restart = 500;
  double step_scale = 0.1;
  // Geometric decay applied to step_scale after every step.
  double step_decay = 0.995;
  std::optional<double> leakage_budget;
  double penalty_weight = 10.0;
  uint64_t seed = 0;
};

inline constexpr double kEnumerationLimit = 1e6;

// Canonical hash of the rows rounded to 12 decimal places.
std::string ChannelDigest(const Channel& channel);

// Evaluates every measure of one channel on the instance.
absl::StatusOr<FrontierPoint> EvaluateChannel(const JointPmf& joint_xy,
                                              const Channel& channel,
                                              Provenance provenance);

// One point per function X -> {0..z_size-1}. ResourceExhausted when
// z_size^|X| exceeds kEnumerationLimit.
absl::StatusOr<std::vector<FrontierPoint>> EnumerateDeterministic(
    const JointPmf& joint_xy, size_t z_size);

// Hill-climbing from flat-Dirichlet starts. Returns, per restart in order, the
// starting channel followed by every accepted move. Restarts run on up to
// `jobs` threads; the result does not depend on `jobs`.
absl::StatusOr<std::vector<FrontierPoint>> SearchChannels(
    const JointPmf& joint_xy, const SearchConfig& config, int jobs = 1);

// The search objective for one point.
double SearchObjective(const FrontierPoint& point, const SearchConfig& config);

// Points not dominated under (lower gamma_lpp, higher utility), sorted by
// gamma_lpp then digest. Duplicate digests are collapsed.
absl::StatusOr<std::vector<FrontierPoint>> ParetoFilter(
    const std::vector<FrontierPoint>& points, AlphaOrder utility_key);

struct FeasibilityResult {
  bool pass = true;
  bool assumption_met = false;
  double worst_residual = 0.0;
  size_t violations = 0;
};

// Checks utility_i1 and utility_iinf <= gamma_lpp + tolerance on every point
// when the posterior is strictly positive; vacuous otherwise.
FeasibilityResult FeasibilityCheck(const std::vector<FrontierPoint>& points,
                                   const PosteriorReport& posterior,
                                   double tolerance = 1e-9);

std::string FrontierCsv(const std::vector<FrontierPoint>& points);
absl::StatusOr<std::vector<FrontierPoint>> ParseFrontierCsv(
    const std::string& text);

}  // namespace leakaudit

#endif  // LEAKAUDIT_FRONTIER_H_
