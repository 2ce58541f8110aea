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

#include "leakaudit/certify.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "leakaudit/measures.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBisectionIterations = 200;

OrderedJson Number12(double value) {
  if (!std::isfinite(value)) return nullptr;
  return Round12(value);
}

}  // namespace

bool LdpEpsilon::infinite() const { return std::isinf(epsilon); }

bool LeakageReport::AllFlagsPass() const {
  return std::all_of(theorem_flags.begin(), theorem_flags.end(),
                     [](const TheoremFlag& f) { return f.pass; });
}

absl::StatusOr<LdpEpsilon> LdpEpsilonOf(const Channel& channel) {
  double worst_ratio = 1.0;
  for (size_t z = 0; z < channel.output_size(); ++z) {
    double hi = 0.0;
    double lo = kInf;
    for (size_t r = 0; r < channel.num_rows(); ++r) {
      hi = std::max(hi, channel.at(r, z));
      lo = std::min(lo, channel.at(r, z));
    }
    if (hi == 0.0) continue;
    if (lo == 0.0) return LdpEpsilon{kInf};
    worst_ratio = std::max(worst_ratio, hi / lo);
  }
  return LdpEpsilon{std::max(0.0, std::log2(worst_ratio))};
}

absl::StatusOr<CertResult> CertifyLpp(const JointPmf& joint_xy,
                                      const Channel& channel, CertBudget budget,
                                      double tolerance) {
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue achieved,
                             CondMaxLeakage(joint_xy, channel));
  CertResult result;
  result.achieved = achieved.bits;
  result.budget = budget.gamma;
  result.residual = achieved.bits - budget.gamma;
  result.pass = result.residual <= tolerance;
  return result;
}

absl::StatusOr<CertResult> CertifyUlpp(const Pmf& px, const Channel& channel,
                                       CertBudget budget, double tolerance) {
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue achieved, MaxLeakage(px, channel));
  CertResult result;
  result.achieved = achieved.bits;
  result.budget = budget.gamma;
  result.residual = achieved.bits - budget.gamma;
  result.pass = result.residual <= tolerance;
  return result;
}

absl::StatusOr<JointPmf> ComposeFeatures(const JointPmf& joint_xy,
                                         const Channel& channel) {
  if (joint_xy.rank() != 2) {
    return absl::InvalidArgumentError("expected a joint over (X, Y)");
  }
  if (channel.input_axes().size() != 1 ||
      channel.input_axes()[0] != joint_xy.axis(0)) {
    return absl::InvalidArgumentError(
        "axis mismatch: feature channel must read the joint's X axis");
  }
  return PushForward(joint_xy, channel, /*keep_source=*/true);
}

bool RowsIdenticalOnSupport(const Pmf& px, const Channel& channel) {
  std::optional<size_t> first;
  for (size_t x = 0; x < px.size(); ++x) {
    if (px[x] <= 0.0) continue;
    if (!first) {
      first = x;
      continue;
    }
    for (size_t z = 0; z < channel.output_size(); ++z) {
      if (channel.at(x, z) != channel.at(*first, z)) return false;
    }
  }
  return true;
}

absl::StatusOr<LeakageReport> TheoremReport(const JointPmf& joint_xy,
                                            const Channel& channel,
                                            double tolerance) {
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf xyz, ComposeFeatures(joint_xy, channel));
  const Pmf px = joint_xy.MarginalPmf(0);

  LeakageReport report;
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue lpp,
                             CondMaxLeakage(joint_xy, channel));
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue ulpp, MaxLeakage(px, channel));
  LEAKAUDIT_ASSIGN_OR_RETURN(report.epsilon_ldp, LdpEpsilonOf(channel));
  const JointPmf yz = xyz.Marginal({1, 2});
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue i1, ShannonMi(yz));
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue iinf, IInf(yz));
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue cmi,
                             ConditionalMi(xyz.Marginal({0, 2, 1})));
  report.gamma_lpp = lpp.bits;
  report.gamma_ulpp = ulpp.bits;
  report.utility_i1 = i1.bits;
  report.utility_iinf = iinf.bits;
  report.cond_mi_xz_given_y = cmi.bits;

  auto posterior = PosteriorPositivity(joint_xy);
  if (posterior.ok()) {
    report.posterior = *std::move(posterior);
  } else {
    // Some x has no mass; the posterior is undefined there, so the positivity
    // assumption is not met.
    report.posterior = PosteriorReport{0.0, false, {}};
  }
  const bool positive = report.posterior.strictly_positive;

  TheoremFlag t1{"T1_utility_bounded_by_lpp", true, 0.0, positive};
  t1.residual = std::max(report.utility_i1, report.utility_iinf) -
                report.gamma_lpp;
  if (positive) t1.pass = t1.residual <= tolerance;

  TheoremFlag t2{"T2_lpp_equals_ulpp", true, 0.0, positive};
  t2.residual = std::abs(report.gamma_lpp - report.gamma_ulpp);
  if (positive) t2.pass = t2.residual <= tolerance;

  TheoremFlag t3{"T3_ldp_implies_lpp", true, 0.0, true};
  t3.residual = report.gamma_lpp - report.epsilon_ldp.epsilon;
  t3.pass = report.epsilon_ldp.infinite() || t3.residual <= tolerance;

  TheoremFlag t4{"T4_perfect_lpp_iff_markov", true, 0.0, true};
  const bool zero_lpp = report.gamma_lpp <= tolerance;
  const bool zero_cmi = report.cond_mi_xz_given_y <= tolerance;
  t4.pass = zero_lpp == zero_cmi;
  t4.residual = t4.pass ? 0.0
                        : std::max(report.gamma_lpp,
                                   report.cond_mi_xz_given_y);

  report.theorem_flags = {t1, t2, t3, t4};
  return report;
}

OrderedJson LeakageReportToJson(const LeakageReport& report) {
  OrderedJson doc;
  doc["gamma_lpp"] = Number12(report.gamma_lpp);
  doc["gamma_ulpp"] = Number12(report.gamma_ulpp);
  doc["epsilon_ldp"] = report.epsilon_ldp.infinite()
                           ? OrderedJson("inf")
                           : Number12(report.epsilon_ldp.epsilon);
  doc["utility_i1"] = Number12(report.utility_i1);
  doc["utility_iinf"] = Number12(report.utility_iinf);
  doc["cond_mi_xz_given_y"] = Number12(report.cond_mi_xz_given_y);
  OrderedJson posterior;
  posterior["min_posterior"] = Number12(report.posterior.min_posterior);
  posterior["strictly_positive"] = report.posterior.strictly_positive;
  posterior["witnesses"] = OrderedJson::array();
  for (const auto& [x, y] : report.posterior.witnesses) {
    posterior["witnesses"].push_back({x, y});
  }
  doc["posterior"] = std::move(posterior);
  OrderedJson flags = OrderedJson::array();
  for (const auto& f : report.theorem_flags) {
    OrderedJson flag;
    flag["name"] = f.name;
    flag["pass"] = f.pass;
    flag["applicable"] = f.applicable;
    flag["residual"] = Number12(f.residual);
    flags.push_back(std::move(flag));
  }
  doc["theorem_flags"] = std::move(flags);
  return doc;
}

absl::StatusOr<double> BinaryEntropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("binary entropy: p = ", p, " outside [0, 1]"));
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

absl::StatusOr<double> BinaryEntropyInverse(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("binary entropy inverse: t = ", t, " outside [0, 1]"));
  }
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 0.5;
  double lo = 0.0;
  double hi = 0.5;
  for (int i = 0; i < kBisectionIterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    // H2 is increasing on [0, 1/2].
    if (*BinaryEntropy(mid) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double h_lo = *BinaryEntropy(lo);
  const double h_hi = *BinaryEntropy(hi);
  return std::abs(h_lo - t) <= std::abs(h_hi - t) ? lo : hi;
}

double CalabroLowerBound(double t) { return t / (2.0 * std::log2(6.0 / t)); }

absl::StatusOr<double> AccuracyBound(double beta) {
  if (!(beta > 0.5 && beta < 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("accuracy bound: beta = ", beta, " outside (1/2, 1)"));
  }
  const double log_beta = std::log2(beta);
  return 1.0 + log_beta / (2.0 * std::log2(-6.0 / log_beta));
}

}  // namespace leakaudit
