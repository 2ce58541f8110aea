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

#include "leakaudit/measures.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

double ClampBits(double bits) {
  return (bits < 0.0 && bits > -kMeasureClamp) ? 0.0 : bits;
}

absl::Status RequireRank(const JointPmf& joint, size_t rank, const char* op) {
  if (joint.rank() != rank) {
    return absl::InvalidArgumentError(absl::StrCat(
        op, " expects a joint with ", rank, " axes, got ", joint.rank()));
  }
  return absl::OkStatus();
}

absl::Status RequireFeatureChannel(const Alphabet& x, const Channel& channel) {
  if (channel.input_axes().size() != 1 || channel.input_axes()[0] != x) {
    return absl::InvalidArgumentError(absl::StrCat(
        "axis mismatch: channel input must be exactly '", x.name(), "'"));
  }
  return absl::OkStatus();
}

// sum_z max_{x : in_support[x]} P(z | x). Iterates z outer, x inner so that
// equal supports give bit-identical sums.
absl::StatusOr<double> SumOfColumnMaxima(const Channel& channel,
                                         const std::vector<bool>& in_support) {
  if (std::none_of(in_support.begin(), in_support.end(),
                   [](bool b) { return b; })) {
    return absl::InternalError("maximum over an empty support");
  }
  double total = 0.0;
  for (size_t z = 0; z < channel.output_size(); ++z) {
    double best = 0.0;
    for (size_t x = 0; x < channel.num_rows(); ++x) {
      if (in_support[x]) best = std::max(best, channel.at(x, z));
    }
    total += best;
  }
  return total;
}

}  // namespace

const char* MeasureKindName(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kShannonMi:
      return "shannon_mi";
    case MeasureKind::kCondMi:
      return "conditional_mi";
    case MeasureKind::kIInf:
      return "i_inf";
    case MeasureKind::kIInfCond:
      return "i_inf_cond";
    case MeasureKind::kMaxLeakage:
      return "max_leakage";
    case MeasureKind::kCondMaxLeakage:
      return "cond_max_leakage";
  }
  return "unknown";
}

absl::StatusOr<MeasureValue> ShannonMi(const JointPmf& joint) {
  LEAKAUDIT_RETURN_IF_ERROR(RequireRank(joint, 2, "shannon_mi"));
  const size_t na = joint.dim(0);
  const size_t nb = joint.dim(1);
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  for (size_t a = 0; a < na; ++a) {
    for (size_t b = 0; b < nb; ++b) {
      pa[a] += joint.at({a, b});
      pb[b] += joint.at({a, b});
    }
  }
  double bits = 0.0;
  for (size_t a = 0; a < na; ++a) {
    for (size_t b = 0; b < nb; ++b) {
      const double p = joint.at({a, b});
      if (p > 0.0) bits += p * std::log2(p / (pa[a] * pb[b]));
    }
  }
  return MeasureValue{ClampBits(bits), MeasureKind::kShannonMi};
}

absl::StatusOr<MeasureValue> ConditionalMi(const JointPmf& joint) {
  LEAKAUDIT_RETURN_IF_ERROR(RequireRank(joint, 3, "conditional_mi"));
  const size_t na = joint.dim(0);
  const size_t nb = joint.dim(1);
  const size_t nc = joint.dim(2);
  std::vector<double> pc(nc, 0.0), pac(na * nc, 0.0), pbc(nb * nc, 0.0);
  for (size_t a = 0; a < na; ++a) {
    for (size_t b = 0; b < nb; ++b) {
      for (size_t c = 0; c < nc; ++c) {
        const double p = joint.at({a, b, c});
        pc[c] += p;
        pac[a * nc + c] += p;
        pbc[b * nc + c] += p;
      }
    }
  }
  double bits = 0.0;
  for (size_t a = 0; a < na; ++a) {
    for (size_t b = 0; b < nb; ++b) {
      for (size_t c = 0; c < nc; ++c) {
        const double p = joint.at({a, b, c});
        if (p > 0.0) {
          bits += p * std::log2(p * pc[c] / (pac[a * nc + c] * pbc[b * nc + c]));
        }
      }
    }
  }
  return MeasureValue{ClampBits(bits), MeasureKind::kCondMi};
}

absl::StatusOr<double> BayesAccuracy(const JointPmf& joint) {
  const size_t ns = joint.dim(0);
  const size_t observations = joint.num_cells() / ns;
  // The first axis varies slowest, so P(s, obs) sits at s * observations + obs.
  double total = 0.0;
  for (size_t obs = 0; obs < observations; ++obs) {
    double best = 0.0;
    for (size_t s = 0; s < ns; ++s) {
      best = std::max(best, joint.probs()[s * observations + obs]);
    }
    total += best;
  }
  return total;
}

absl::StatusOr<MeasureValue> IInf(const JointPmf& joint) {
  LEAKAUDIT_RETURN_IF_ERROR(RequireRank(joint, 2, "i_inf"));
  LEAKAUDIT_ASSIGN_OR_RETURN(const double informed, BayesAccuracy(joint));
  LEAKAUDIT_ASSIGN_OR_RETURN(const double baseline,
                             BayesAccuracy(joint.Marginal({0})));
  return MeasureValue{ClampBits(std::log2(informed / baseline)),
                      MeasureKind::kIInf};
}

absl::StatusOr<MeasureValue> IInfCond(const JointPmf& joint) {
  LEAKAUDIT_RETURN_IF_ERROR(RequireRank(joint, 3, "i_inf_cond"));
  LEAKAUDIT_ASSIGN_OR_RETURN(const double both, BayesAccuracy(joint));
  LEAKAUDIT_ASSIGN_OR_RETURN(const double side,
                             BayesAccuracy(joint.Marginal({0, 2})));
  return MeasureValue{ClampBits(std::log2(both / side)),
                      MeasureKind::kIInfCond};
}

absl::StatusOr<MeasureValue> MaxLeakage(const Pmf& px, const Channel& channel) {
  LEAKAUDIT_RETURN_IF_ERROR(RequireFeatureChannel(px.alphabet(), channel));
  std::vector<bool> support(px.size());
  for (size_t x = 0; x < px.size(); ++x) support[x] = px[x] > 0.0;
  LEAKAUDIT_ASSIGN_OR_RETURN(const double total,
                             SumOfColumnMaxima(channel, support));
  return MeasureValue{ClampBits(std::log2(total)), MeasureKind::kMaxLeakage};
}

absl::StatusOr<MeasureValue> CondMaxLeakage(const JointPmf& joint_xy,
                                            const Channel& channel) {
  LEAKAUDIT_RETURN_IF_ERROR(RequireRank(joint_xy, 2, "cond_max_leakage"));
  LEAKAUDIT_RETURN_IF_ERROR(RequireFeatureChannel(joint_xy.axis(0), channel));
  const size_t nx = joint_xy.dim(0);
  const size_t ny = joint_xy.dim(1);
  double best = 0.0;
  bool any_y = false;
  for (size_t y = 0; y < ny; ++y) {
    std::vector<bool> support(nx);
    bool has_mass = false;
    for (size_t x = 0; x < nx; ++x) {
      support[x] = joint_xy.at({x, y}) > 0.0;
      has_mass = has_mass || support[x];
    }
    if (!has_mass) continue;
    LEAKAUDIT_ASSIGN_OR_RETURN(const double total,
                               SumOfColumnMaxima(channel, support));
    best = any_y ? std::max(best, total) : total;
    any_y = true;
  }
  return MeasureValue{ClampBits(std::log2(best)),
                      MeasureKind::kCondMaxLeakage};
}

}  // namespace leakaudit
