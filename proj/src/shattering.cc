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

#include "leakaudit/shattering.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "leakaudit/random.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

// floor/ceil with ratios within kIntegralitySnap of an integer treated as
// that integer.
size_t SnappedCeil(double r) {
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= kIntegralitySnap * std::max(1.0, r)) {
    return static_cast<size_t>(nearest);
  }
  return static_cast<size_t>(std::ceil(r));
}

size_t SnappedFloor(double r) {
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= kIntegralitySnap * std::max(1.0, r)) {
    return static_cast<size_t>(nearest);
  }
  return static_cast<size_t>(std::floor(r));
}

}  // namespace

absl::StatusOr<std::pair<ShatteringSpec, AttributeMechanism>>
ShatteringAttribute(const Pmf& px, std::string output_name) {
  for (size_t x = 0; x < px.size(); ++x) {
    if (!(px[x] > 0.0)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "zero mass at '", px.alphabet().symbol(x),
          "'; restrict P_X to its support first"));
    }
  }
  ShatteringSpec spec;
  spec.p_min = *std::min_element(px.probs().begin(), px.probs().end());
  std::vector<std::string> symbols;
  for (size_t x = 0; x < px.size(); ++x) {
    const double r = px[x] / spec.p_min;
    spec.ratios.push_back(r);
    spec.ceil_ratios.push_back(SnappedCeil(r));
    for (size_t k = 1; k <= spec.ceil_ratios.back(); ++k) {
      symbols.push_back(absl::StrCat(px.alphabet().symbol(x), ":", k));
    }
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(
      spec.s_alphabet, Alphabet::Create(std::move(output_name), symbols));

  std::vector<std::vector<double>> rows(
      px.size(), std::vector<double>(spec.s_alphabet.size(), 0.0));
  size_t offset = 0;
  for (size_t x = 0; x < px.size(); ++x) {
    const size_t ceil_r = spec.ceil_ratios[x];
    const size_t floor_r = SnappedFloor(spec.ratios[x]);
    const double share = spec.p_min / px[x];
    for (size_t k = 1; k <= floor_r; ++k) rows[x][offset + k - 1] = share;
    if (floor_r != ceil_r) {
      rows[x][offset + ceil_r - 1] =
          1.0 - static_cast<double>(ceil_r - 1) * share;
    }
    offset += ceil_r;
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(
      Channel channel, Channel::Create({px.alphabet()}, spec.s_alphabet, rows));
  AttributeMechanism mech{std::move(channel), "shattering"};
  if (px.size() > 1 && !HasZeroEntry(mech.channel)) {
    return absl::InternalError("shattering mechanism has no zero entry");
  }
  return std::make_pair(std::move(spec), std::move(mech));
}

bool HasZeroEntry(const Channel& channel) {
  for (size_t r = 0; r < channel.num_rows(); ++r) {
    for (double v : channel.row(r)) {
      if (v == 0.0) return true;
    }
  }
  return false;
}

absl::StatusOr<MeasureValue> AttributeGain(const Pmf& px,
                                           const AttributeMechanism& attr,
                                           const Channel& feature) {
  if (attr.channel.input_axes().size() != 1) {
    return absl::InvalidArgumentError(
        "axis mismatch: unconditional attribute must read X only");
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf xs,
                             PushForward(px, attr.channel, true));
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf xsz, PushForward(xs, feature, true));
  return IInf(xsz.Marginal({1, 2}));
}

absl::StatusOr<MeasureValue> AttributeGainCond(const JointPmf& joint_xy,
                                               const AttributeMechanism& attr,
                                               const Channel& feature) {
  if (joint_xy.rank() != 2) {
    return absl::InvalidArgumentError("attribute_gain_cond expects (X, Y)");
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf xys,
                             PushForward(joint_xy, attr.channel, true));
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf xysz, PushForward(xys, feature, true));
  // (X, Y, S, Z) -> (S, Z, Y).
  return IInfCond(xysz.Marginal({2, 3, 1}));
}

absl::StatusOr<AttributeMechanism> ConditionalShatteringAttribute(
    const JointPmf& joint_xy, std::string output_name) {
  if (joint_xy.rank() != 2) {
    return absl::InvalidArgumentError("expected a joint over (X, Y)");
  }
  const size_t nx = joint_xy.dim(0), ny = joint_xy.dim(1);
  std::vector<std::string> symbols;
  // Per y: offset of its block and the shattering rows over supp(X | y).
  std::vector<size_t> offsets;
  std::vector<std::vector<size_t>> supports(ny);
  std::vector<Channel> blocks;
  for (size_t y = 0; y < ny; ++y) {
    std::vector<double> mass;
    for (size_t x = 0; x < nx; ++x) {
      if (joint_xy.at({x, y}) > 0.0) {
        supports[y].push_back(x);
        mass.push_back(joint_xy.at({x, y}));
      }
    }
    if (mass.empty()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "zero event: Y = '", joint_xy.axis(1).symbol(y), "'"));
    }
    double total = 0.0;
    for (double m : mass) total += m;
    std::vector<std::string> names;
    for (size_t x : supports[y]) names.push_back(joint_xy.axis(0).symbol(x));
    for (double& m : mass) m /= total;
    LEAKAUDIT_ASSIGN_OR_RETURN(Alphabet sub,
                               Alphabet::Create("X", std::move(names)));
    LEAKAUDIT_ASSIGN_OR_RETURN(Pmf px_y, ValidatePmf(std::move(mass), sub));
    LEAKAUDIT_ASSIGN_OR_RETURN(auto built, ShatteringAttribute(px_y));
    offsets.push_back(symbols.size());
    for (const auto& s : built.first.s_alphabet.symbols()) {
      symbols.push_back(absl::StrCat(joint_xy.axis(1).symbol(y), "|", s));
    }
    blocks.push_back(std::move(built.second.channel));
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(
      Alphabet s_alphabet, Alphabet::Create(std::move(output_name), symbols));
  std::vector<std::vector<double>> rows(
      nx * ny, std::vector<double>(s_alphabet.size(), 0.0));
  for (size_t y = 0; y < ny; ++y) {
    for (size_t x = 0; x < nx; ++x) rows[x * ny + y][offsets[y]] = 1.0;
    for (size_t i = 0; i < supports[y].size(); ++i) {
      auto& row = rows[supports[y][i] * ny + y];
      row[offsets[y]] = 0.0;
      for (size_t k = 0; k < blocks[y].output_size(); ++k) {
        row[offsets[y] + k] = blocks[y].at(i, k);
      }
    }
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(
      Channel channel,
      Channel::Create({joint_xy.axis(0), joint_xy.axis(1)}, s_alphabet, rows));
  return AttributeMechanism{std::move(channel), "conditional shattering"};
}

AttributeMechanism SampleRandomAttribute(std::vector<Alphabet> input_axes,
                                         size_t s_size, uint64_t seed,
                                         std::string output_name) {
  Rng rng(seed, "attribute");
  size_t num_rows = 1;
  for (const auto& a : input_axes) num_rows *= a.size();
  std::vector<std::vector<double>> rows;
  rows.reserve(num_rows);
  for (size_t r = 0; r < num_rows; ++r) rows.push_back(rng.FlatDirichlet(s_size));
  auto channel = Channel::Create(std::move(input_axes),
                                 Alphabet::Range(std::move(output_name), s_size),
                                 rows);
  // Dirichlet rows are normalized up to round-off far below kProbTolerance.
  return AttributeMechanism{*std::move(channel),
                            absl::StrCat("random(seed=", seed, ")")};
}

}  // namespace leakaudit
