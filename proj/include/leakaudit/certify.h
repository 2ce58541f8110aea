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

// Certification of least-privilege budgets and local differential privacy for
// a (joint, feature channel) pair, the executable theorem checks, and the
// Fano-style task-accuracy bound.

#ifndef LEAKAUDIT_CERTIFY_H_
#define LEAKAUDIT_CERTIFY_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "leakaudit/dist.h"
#include "leakaudit/dist_json.h"

namespace leakaudit {

inline constexpr double kCertTolerance = 1e-9;

struct CertBudget {
  double gamma = 0.0;
};

// +infinity when some output has positive probability under one input and
// zero under another.
struct LdpEpsilon {
  double epsilon = 0.0;
  bool infinite() const;
};

struct CertResult {
  bool pass = false;
  double achieved = 0.0;
  double budget = 0.0;
  // achieved - budget; pass iff residual <= tolerance.
  double residual = 0.0;
};

struct TheoremFlag {
  std::string name;
  bool pass = false;
  // Worst violation of the checked inequality (<= 0 when it holds).
  double residual = 0.0;
  // False when the check's precondition does not hold on this instance.
  bool applicable = true;
};

struct LeakageReport {
  double gamma_lpp = 0.0;
  double gamma_ulpp = 0.0;
  LdpEpsilon epsilon_ldp;
  double utility_i1 = 0.0;
  double utility_iinf = 0.0;
  double cond_mi_xz_given_y = 0.0;
  PosteriorReport posterior;
  std::vector<TheoremFlag> theorem_flags;

  bool AllFlagsPass() const;
};

absl::StatusOr<LdpEpsilon> LdpEpsilonOf(const Channel& channel);

absl::StatusOr<CertResult> CertifyLpp(const JointPmf& joint_xy,
                                      const Channel& channel, CertBudget budget,
                                      double tolerance = kCertTolerance);
absl::StatusOr<CertResult> CertifyUlpp(const Pmf& px, const Channel& channel,
                                       CertBudget budget,
                                       double tolerance = kCertTolerance);

// (X, Y, Z) joint for the chain Y - X - Z.
absl::StatusOr<JointPmf> ComposeFeatures(const JointPmf& joint_xy,
                                         const Channel& channel);

// True when every row indexed by supp(P_X) is identical.
bool RowsIdenticalOnSupport(const Pmf& px, const Channel& channel);

// Computes every report field and the four theorem flags:
//   T1 utilities bounded by gamma_lpp (applicable under strict positivity),
//   T2 gamma_lpp == gamma_ulpp (applicable under strict positivity),
//   T3 gamma_lpp <= epsilon_ldp,
//   T4 gamma_lpp == 0 iff I(X; Z | Y) == 0.
absl::StatusOr<LeakageReport> TheoremReport(const JointPmf& joint_xy,
                                            const Channel& channel,
                                            double tolerance = kCertTolerance);

// Fixed key order; residuals and measures at 12 significant digits.
OrderedJson LeakageReportToJson(const LeakageReport& report);

// H2(p) in bits.
absl::StatusOr<double> BinaryEntropy(double p);
// The p in [0, 1/2] with H2(p) = t, by bisection.
absl::StatusOr<double> BinaryEntropyInverse(double t);
// Lower bound t / (2 log2(6 / t)) on H2^{-1}(t), t in (0, 1].
double CalabroLowerBound(double t);

// Upper bound on task accuracy given attribute-inference accuracy `beta` of
// a uniform binary attribute with trivial fundamental leakage:
// 1 + log2(beta) / (2 log2(-6 / log2(beta))), beta in (1/2, 1).
absl::StatusOr<double> AccuracyBound(double beta);

}  // namespace leakaudit

#endif  // LEAKAUDIT_CERTIFY_H_
