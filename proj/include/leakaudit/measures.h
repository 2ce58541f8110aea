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

// Exact information and leakage measures on finite distributions. Every value
// is in bits (base-2 logarithms).

#ifndef LEAKAUDIT_MEASURES_H_
#define LEAKAUDIT_MEASURES_H_

#include "absl/status/statusor.h"
#include "leakaudit/dist.h"

namespace leakaudit {

// The two Arimoto orders the library supports.
enum class AlphaOrder { kOne, kInfinity };

enum class MeasureKind {
  kShannonMi,
  kCondMi,
  kIInf,
  kIInfCond,
  kMaxLeakage,
  kCondMaxLeakage,
};

const char* MeasureKindName(MeasureKind kind);

struct MeasureValue {
  double bits = 0.0;
  MeasureKind kind = MeasureKind::kShannonMi;
};

// Values in (-kMeasureClamp, 0) produced by round-off are reported as 0.
inline constexpr double kMeasureClamp = 1e-9;

// I(A; B) for a joint over (A, B).
absl::StatusOr<MeasureValue> ShannonMi(const JointPmf& joint);

// I(A; B | C) for a joint over (A, B, C).
absl::StatusOr<MeasureValue> ConditionalMi(const JointPmf& joint);

// Success probability of the Bayes-optimal guess of the first axis given all
// remaining axes: sum over observations of max_s P(s, obs). A rank-1 joint
// gives the majority-class baseline max_s P(s).
absl::StatusOr<double> BayesAccuracy(const JointPmf& joint);

// I_inf(S; W) = log2(Pr[S = S^(W)] / Pr[S = S^]) for a joint over (S, W).
absl::StatusOr<MeasureValue> IInf(const JointPmf& joint);

// I_inf(S; W | W') = log2(Pr[S = S^(W, W')] / Pr[S = S^(W')]) for a joint over
// (S, W, W').
absl::StatusOr<MeasureValue> IInfCond(const JointPmf& joint);

// L(X -> Z) = log2 sum_z max_{x in supp(P_X)} P(z | x).
absl::StatusOr<MeasureValue> MaxLeakage(const Pmf& px, const Channel& channel);

// L(X -> Z | Y) = log2 max_{y : P(y) > 0} sum_z max_{x in supp(X|Y=y)} P(z|x)
// for a joint over (X, Y) and a feature channel X -> Z.
absl::StatusOr<MeasureValue> CondMaxLeakage(const JointPmf& joint_xy,
                                            const Channel& channel);

}  // namespace leakaudit

#endif  // LEAKAUDIT_MEASURES_H_
