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

#include "leakaudit/dist.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

// Clamps tiny negatives and checks the total. Shared by every validated type.
absl::Status CheckMass(std::vector<double>& probs, std::string_view what) {
  double total = 0.0;
  for (double& p : probs) {
    if (!std::isfinite(p)) {
      return absl::InvalidArgumentError(
          absl::StrCat(std::string(what), ": non-finite probability"));
    }
    if (p < -kProbTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat(std::string(what), ": negative mass ", p));
    }
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(what), ": not normalized (sum = ", total, ")"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Alphabet> Alphabet::Create(std::string name,
                                          std::vector<std::string> symbols) {
  if (symbols.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("alphabet '", name, "' has no symbols"));
  }
  std::set<std::string_view> seen;
  for (const auto& s : symbols) {
    if (!seen.insert(s).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("alphabet '", name, "' has duplicate symbol '", s, "'"));
    }
  }
  return Alphabet(std::move(name), std::move(symbols));
}

Alphabet Alphabet::Range(std::string name, size_t n) {
  std::vector<std::string> symbols;
  symbols.reserve(n);
  for (size_t i = 0; i < n; ++i) symbols.push_back(std::to_string(i));
  return Alphabet(std::move(name), std::move(symbols));
}

std::optional<size_t> Alphabet::IndexOf(std::string_view symbol) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) return std::nullopt;
  return static_cast<size_t>(it - symbols_.begin());
}

Alphabet Alphabet::Renamed(std::string name) const {
  return Alphabet(std::move(name), symbols_);
}

size_t Pmf::SupportSize() const {
  return static_cast<size_t>(
      std::count_if(probs_.begin(), probs_.end(), [](double p) { return p > 0; }));
}

double Pmf::MaxProb() const {
  return *std::max_element(probs_.begin(), probs_.end());
}

double Pmf::MinPositiveProb() const {
  double best = 0.0;
  for (double p : probs_) {
    if (p > 0.0 && (best == 0.0 || p < best)) best = p;
  }
  return best;
}

absl::StatusOr<Pmf> ValidatePmf(std::vector<double> probs, Alphabet alphabet) {
  if (probs.empty()) return absl::InvalidArgumentError("pmf: empty vector");
  if (probs.size() != alphabet.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("pmf: ", probs.size(), " entries for alphabet '",
                     alphabet.name(), "' of size ", alphabet.size()));
  }
  LEAKAUDIT_RETURN_IF_ERROR(CheckMass(probs, "pmf"));
  return Pmf(std::move(alphabet), std::move(probs));
}

absl::StatusOr<Pmf> ValidatePmf(std::vector<double> probs) {
  if (probs.empty()) return absl::InvalidArgumentError("pmf: empty vector");
  Alphabet alphabet = Alphabet::Range("v", probs.size());
  return ValidatePmf(std::move(probs), std::move(alphabet));
}

JointPmf::JointPmf(std::vector<Alphabet> axes, std::vector<double> probs)
    : axes_(std::move(axes)), strides_(axes_.size()), probs_(std::move(probs)) {
  size_t stride = 1;
  for (size_t i = axes_.size(); i > 0; --i) {
    strides_[i - 1] = stride;
    stride *= axes_[i - 1].size();
  }
}

absl::StatusOr<JointPmf> JointPmf::Create(std::vector<Alphabet> axes,
                                          std::vector<double> probs) {
  if (axes.empty()) return absl::InvalidArgumentError("joint: no axes");
  std::set<std::string_view> names;
  size_t cells = 1;
  for (const auto& a : axes) {
    if (!names.insert(a.name()).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("joint: duplicate axis name '", a.name(), "'"));
    }
    cells *= a.size();
  }
  if (probs.size() != cells) {
    return absl::InvalidArgumentError(absl::StrCat(
        "joint: expected ", cells, " cells, got ", probs.size()));
  }
  LEAKAUDIT_RETURN_IF_ERROR(CheckMass(probs, "joint"));
  return JointPmf(std::move(axes), std::move(probs));
}

JointPmf JointPmf::FromPmf(const Pmf& pmf) {
  return JointPmf({pmf.alphabet()},
                  std::vector<double>(pmf.probs().begin(), pmf.probs().end()));
}

size_t JointPmf::FlatIndex(std::span<const size_t> index) const {
  size_t flat = 0;
  for (size_t i = 0; i < index.size(); ++i) flat += index[i] * strides_[i];
  return flat;
}

std::vector<size_t> JointPmf::MultiIndex(size_t flat) const {
  std::vector<size_t> index(rank());
  for (size_t i = 0; i < rank(); ++i) {
    index[i] = flat / strides_[i];
    flat %= strides_[i];
  }
  return index;
}

double JointPmf::at(std::initializer_list<size_t> index) const {
  return probs_[FlatIndex(std::span<const size_t>(index.begin(), index.size()))];
}

std::optional<size_t> JointPmf::AxisIndex(std::string_view name) const {
  for (size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].name() == name) return i;
  }
  return std::nullopt;
}

bool JointPmf::FullSupport() const {
  return std::all_of(probs_.begin(), probs_.end(),
                     [](double p) { return p > 0.0; });
}

JointPmf JointPmf::Marginal(const std::vector<size_t>& keep) const {
  std::vector<Alphabet> axes;
  for (size_t k : keep) axes.push_back(axes_[k]);
  JointPmf out(std::move(axes), {});
  size_t cells = 1;
  for (const auto& a : out.axes_) cells *= a.size();
  out.probs_.assign(cells, 0.0);
  std::vector<size_t> index(rank(), 0);
  std::vector<size_t> sub(keep.size());
  for (size_t flat = 0; flat < probs_.size(); ++flat) {
    for (size_t j = 0; j < keep.size(); ++j) sub[j] = index[keep[j]];
    out.probs_[out.FlatIndex(sub)] += probs_[flat];
    // Advance the odometer.
    for (size_t i = rank(); i > 0; --i) {
      if (++index[i - 1] < axes_[i - 1].size()) break;
      index[i - 1] = 0;
    }
  }
  return out;
}

Pmf JointPmf::MarginalPmf(size_t axis) const {
  return Marginal({axis}).ToPmf();
}

absl::StatusOr<JointPmf> JointPmf::Reorder(
    const std::vector<std::string>& names) const {
  std::vector<size_t> keep;
  for (const auto& n : names) {
    auto idx = AxisIndex(n);
    if (!idx) {
      return absl::InvalidArgumentError(
          absl::StrCat("joint has no axis named '", n, "'"));
    }
    keep.push_back(*idx);
  }
  return Marginal(keep);
}

Pmf JointPmf::ToPmf() const { return Pmf(axes_.front(), probs_); }

absl::StatusOr<Channel> Channel::Create(
    std::vector<Alphabet> input_axes, Alphabet output_axis,
    const std::vector<std::vector<double>>& rows) {
  if (input_axes.empty() || input_axes.size() > 2) {
    return absl::InvalidArgumentError("channel: needs 1 or 2 input axes");
  }
  size_t num_rows = 1;
  for (const auto& a : input_axes) num_rows *= a.size();
  if (rows.size() != num_rows) {
    return absl::InvalidArgumentError(absl::StrCat(
        "channel: expected ", num_rows, " rows, got ", rows.size()));
  }
  std::vector<double> flat;
  flat.reserve(num_rows * output_axis.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != output_axis.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "channel: row ", r, " has ", rows[r].size(), " entries, expected ",
          output_axis.size()));
    }
    std::vector<double> row = rows[r];
    LEAKAUDIT_RETURN_IF_ERROR(CheckMass(row, absl::StrCat("channel row ", r)));
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Channel(std::move(input_axes), std::move(output_axis),
                 std::move(flat), num_rows);
}

Channel Channel::Identity(const Alphabet& input, std::string output_name) {
  const size_t n = input.size();
  std::vector<double> rows(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) rows[i * n + i] = 1.0;
  return Channel({input}, input.Renamed(std::move(output_name)),
                 std::move(rows), n);
}

Channel Channel::Constant(const Alphabet& input, size_t output_size,
                          size_t target, std::string output_name) {
  std::vector<double> rows(input.size() * output_size, 0.0);
  for (size_t i = 0; i < input.size(); ++i) rows[i * output_size + target] = 1;
  return Channel({input}, Alphabet::Range(std::move(output_name), output_size),
                 std::move(rows), input.size());
}

absl::StatusOr<Channel> Channel::BinarySymmetric(double p,
                                                 const Alphabet& input,
                                                 std::string output_name) {
  if (input.size() != 2) {
    return absl::InvalidArgumentError("BSC needs a binary input alphabet");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("BSC crossover ", p, " outside [0, 1]"));
  }
  return Create({input}, input.Renamed(std::move(output_name)),
                {{1.0 - p, p}, {p, 1.0 - p}});
}

absl::StatusOr<Channel> Channel::Deterministic(
    const Alphabet& input, const Alphabet& output,
    const std::vector<size_t>& mapping) {
  if (mapping.size() != input.size()) {
    return absl::InvalidArgumentError("deterministic channel: mapping size");
  }
  std::vector<std::vector<double>> rows(input.size(),
                                        std::vector<double>(output.size(), 0));
  for (size_t x = 0; x < mapping.size(); ++x) {
    if (mapping[x] >= output.size()) {
      return absl::InvalidArgumentError(
          "deterministic channel: image outside output alphabet");
    }
    rows[x][mapping[x]] = 1.0;
  }
  return Create({input}, output, rows);
}

std::vector<std::vector<double>> Channel::Rows() const {
  std::vector<std::vector<double>> out;
  for (size_t r = 0; r < num_rows_; ++r) {
    auto rr = row(r);
    out.emplace_back(rr.begin(), rr.end());
  }
  return out;
}

size_t Channel::RowIndex(std::span<const size_t> inputs) const {
  size_t r = 0;
  for (size_t i = 0; i < inputs.size(); ++i) {
    r = r * input_axes_[i].size() + inputs[i];
  }
  return r;
}

absl::StatusOr<JointPmf> ConditionJointAt(const JointPmf& joint, size_t axis,
                                          size_t value_index) {
  if (axis >= joint.rank()) {
    return absl::InvalidArgumentError(absl::StrCat("no axis ", axis));
  }
  if (joint.rank() < 2) {
    return absl::InvalidArgumentError("conditioning needs at least two axes");
  }
  if (value_index >= joint.dim(axis)) {
    return absl::InvalidArgumentError("conditioning value out of range");
  }
  std::vector<size_t> rest;
  for (size_t i = 0; i < joint.rank(); ++i) {
    if (i != axis) rest.push_back(i);
  }
  std::vector<Alphabet> axes;
  size_t cells = 1;
  for (size_t i : rest) {
    axes.push_back(joint.axis(i));
    cells *= joint.dim(i);
  }
  std::vector<double> probs(cells, 0.0);
  double mass = 0.0;
  for (size_t flat = 0; flat < joint.num_cells(); ++flat) {
    const std::vector<size_t> idx = joint.MultiIndex(flat);
    if (idx[axis] != value_index) continue;
    size_t out = 0;
    for (size_t i : rest) out = out * joint.dim(i) + idx[i];
    probs[out] = joint.probs()[flat];
    mass += joint.probs()[flat];
  }
  if (mass <= 0.0) {
    return absl::FailedPreconditionError(absl::StrCat(
        "zero event: P(", joint.axis(axis).name(), " = ",
        joint.axis(axis).symbol(value_index), ") = 0"));
  }
  for (double& p : probs) p /= mass;
  return JointPmf::Create(std::move(axes), std::move(probs));
}

absl::StatusOr<JointPmf> ConditionJoint(const JointPmf& joint, size_t axis,
                                        std::string_view value) {
  if (axis >= joint.rank()) {
    return absl::InvalidArgumentError(absl::StrCat("no axis ", axis));
  }
  auto idx = joint.axis(axis).IndexOf(value);
  if (!idx) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown symbol '", std::string(value), "' on axis '",
                     joint.axis(axis).name(), "'"));
  }
  return ConditionJointAt(joint, axis, *idx);
}

absl::StatusOr<JointPmf> PushForward(const JointPmf& source,
                                     const Channel& mech, bool keep_source) {
  std::vector<size_t> input_pos;
  for (const auto& in : mech.input_axes()) {
    auto pos = source.AxisIndex(in.name());
    if (!pos || source.axis(*pos) != in) {
      return absl::InvalidArgumentError(absl::StrCat(
          "axis mismatch: channel input '", in.name(),
          "' does not match any source axis"));
    }
    input_pos.push_back(*pos);
  }
  if (source.AxisIndex(mech.output_axis().name())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "axis mismatch: output axis '", mech.output_axis().name(),
        "' already present in source"));
  }
  std::vector<Alphabet> axes = source.axes();
  axes.push_back(mech.output_axis());
  const size_t nz = mech.output_size();
  std::vector<double> probs(source.num_cells() * nz, 0.0);
  std::vector<size_t> inputs(input_pos.size());
  for (size_t flat = 0; flat < source.num_cells(); ++flat) {
    const double p = source.probs()[flat];
    if (p == 0.0) continue;
    const std::vector<size_t> idx = source.MultiIndex(flat);
    for (size_t i = 0; i < input_pos.size(); ++i) inputs[i] = idx[input_pos[i]];
    const auto row = mech.row(mech.RowIndex(inputs));
    for (size_t z = 0; z < nz; ++z) probs[flat * nz + z] = p * row[z];
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf joint,
                             JointPmf::Create(std::move(axes), std::move(probs)));
  if (keep_source) return joint;
  return joint.Marginal({joint.rank() - 1});
}

absl::StatusOr<JointPmf> PushForward(const Pmf& source, const Channel& mech,
                                     bool keep_source) {
  return PushForward(JointPmf::FromPmf(source), mech, keep_source);
}

absl::StatusOr<PosteriorReport> PosteriorPositivity(const JointPmf& joint_xy) {
  if (joint_xy.rank() != 2) {
    return absl::InvalidArgumentError("posterior positivity needs (X, Y)");
  }
  const size_t nx = joint_xy.dim(0);
  const size_t ny = joint_xy.dim(1);
  PosteriorReport report;
  report.min_posterior = 1.0;
  for (size_t x = 0; x < nx; ++x) {
    double px = 0.0;
    for (size_t y = 0; y < ny; ++y) px += joint_xy.at({x, y});
    if (px <= 0.0) {
      return absl::FailedPreconditionError(absl::StrCat(
          "undefined posterior: P(", joint_xy.axis(0).name(), " = ",
          joint_xy.axis(0).symbol(x), ") = 0"));
    }
    for (size_t y = 0; y < ny; ++y) {
      const double post = joint_xy.at({x, y}) / px;
      if (post < report.min_posterior) {
        report.min_posterior = post;
        report.witnesses.clear();
      }
      if (post == report.min_posterior) {
        report.witnesses.emplace_back(joint_xy.axis(0).symbol(x),
                                      joint_xy.axis(1).symbol(y));
      }
    }
  }
  report.strictly_positive = report.min_posterior > 0.0;
  return report;
}

absl::StatusOr<JointPmf> JointFromPosterior(const Pmf& px,
                                            const Channel& posterior) {
  return PushForward(px, posterior, /*keep_source=*/true);
}

}  // namespace leakaudit
