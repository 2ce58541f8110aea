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

// Finite-alphabet probability foundation: alphabets, pmfs, joint tensors,
// channels, and the marginal/conditional/composition operations over them.
//
// All objects are immutable after construction and validated on creation,
// so downstream code can rely on their invariants without re-checking.

#ifndef LEAKAUDIT_DIST_H_
#define LEAKAUDIT_DIST_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace leakaudit {

// Validation tolerance for probability mass. Entries in (-kProbTolerance, 0)
// are clamped to exactly 0.
inline constexpr double kProbTolerance = 1e-9;

class Alphabet {
 public:
  // Fails if `symbols` is empty or contains duplicates.
  static absl::StatusOr<Alphabet> Create(std::string name,
                                         std::vector<std::string> symbols);
  // Symbols "0", "1", ..., "n-1".
  static Alphabet Range(std::string name, size_t n);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& symbol(size_t i) const { return symbols_[i]; }
  size_t size() const { return symbols_.size(); }
  std::optional<size_t> IndexOf(std::string_view symbol) const;

  // Same alphabet under a different name.
  Alphabet Renamed(std::string name) const;

  bool operator==(const Alphabet& other) const = default;

 private:
  Alphabet(std::string name, std::vector<std::string> symbols)
      : name_(std::move(name)), symbols_(std::move(symbols)) {}

  std::string name_;
  std::vector<std::string> symbols_;
};

class Pmf {
 public:
  const Alphabet& alphabet() const { return alphabet_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](size_t i) const { return probs_[i]; }
  size_t size() const { return probs_.size(); }

  size_t SupportSize() const;
  bool FullSupport() const { return SupportSize() == size(); }
  double MaxProb() const;
  double MinPositiveProb() const;

  bool operator==(const Pmf& other) const = default;

 private:
  friend class JointPmf;
  friend absl::StatusOr<Pmf> ValidatePmf(std::vector<double> probs,
                                         Alphabet alphabet);
  Pmf(Alphabet alphabet, std::vector<double> probs)
      : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {}

  Alphabet alphabet_;
  std::vector<double> probs_;
};

// Returns a Pmf iff every entry is >= -kProbTolerance (small negatives are
// clamped to 0) and the total is within kProbTolerance of 1.
absl::StatusOr<Pmf> ValidatePmf(std::vector<double> probs, Alphabet alphabet);
// As above over the anonymous alphabet Range("v", probs.size()).
absl::StatusOr<Pmf> ValidatePmf(std::vector<double> probs);

// Dense joint distribution; the first axis varies slowest.
class JointPmf {
 public:
  static absl::StatusOr<JointPmf> Create(std::vector<Alphabet> axes,
                                         std::vector<double> probs);
  static JointPmf FromPmf(const Pmf& pmf);

  size_t rank() const { return axes_.size(); }
  const std::vector<Alphabet>& axes() const { return axes_; }
  const Alphabet& axis(size_t i) const { return axes_[i]; }
  size_t dim(size_t i) const { return axes_[i].size(); }
  std::span<const double> probs() const { return probs_; }
  size_t num_cells() const { return probs_.size(); }

  size_t FlatIndex(std::span<const size_t> index) const;
  std::vector<size_t> MultiIndex(size_t flat) const;
  double at(std::initializer_list<size_t> index) const;

  std::optional<size_t> AxisIndex(std::string_view name) const;
  bool FullSupport() const;

  // Marginal over `keep`, in the order given (so this also permutes axes).
  JointPmf Marginal(const std::vector<size_t>& keep) const;
  Pmf MarginalPmf(size_t axis) const;
  // Axes reordered by name; fails if any name is missing.
  absl::StatusOr<JointPmf> Reorder(const std::vector<std::string>& names) const;
  // Rank-1 joint as a Pmf.
  Pmf ToPmf() const;

  bool operator==(const JointPmf& other) const = default;

 private:
  JointPmf(std::vector<Alphabet> axes, std::vector<double> probs);

  std::vector<Alphabet> axes_;
  std::vector<size_t> strides_;
  std::vector<double> probs_;
};

// Row-stochastic matrix P(output | inputs). Rows are indexed by the inputs in
// row-major order with the first input axis varying slowest, so a channel over
// (X, Y) is stored X-major.
class Channel {
 public:
  static absl::StatusOr<Channel> Create(
      std::vector<Alphabet> input_axes, Alphabet output_axis,
      const std::vector<std::vector<double>>& rows);

  // Z = X copied symbol by symbol.
  static Channel Identity(const Alphabet& input, std::string output_name = "Z");
  // Every row is a point mass on output symbol `target`.
  static Channel Constant(const Alphabet& input, size_t output_size,
                          size_t target = 0, std::string output_name = "Z");
  // Binary symmetric channel with crossover `p` on a binary input.
  static absl::StatusOr<Channel> BinarySymmetric(
      double p, const Alphabet& input, std::string output_name = "Z");
  // Deterministic map: row x is a point mass on `mapping[x]`.
  static absl::StatusOr<Channel> Deterministic(
      const Alphabet& input, const Alphabet& output,
      const std::vector<size_t>& mapping);

  const std::vector<Alphabet>& input_axes() const { return input_axes_; }
  const Alphabet& output_axis() const { return output_axis_; }
  size_t num_rows() const { return num_rows_; }
  size_t output_size() const { return output_axis_.size(); }
  std::span<const double> row(size_t r) const {
    return std::span<const double>(rows_).subspan(r * output_size(),
                                                  output_size());
  }
  double at(size_t r, size_t z) const { return rows_[r * output_size() + z]; }
  std::vector<std::vector<double>> Rows() const;
  size_t RowIndex(std::span<const size_t> inputs) const;

  bool operator==(const Channel& other) const = default;

 private:
  Channel(std::vector<Alphabet> input_axes, Alphabet output_axis,
          std::vector<double> rows, size_t num_rows)
      : input_axes_(std::move(input_axes)),
        output_axis_(std::move(output_axis)),
        rows_(std::move(rows)),
        num_rows_(num_rows) {}

  std::vector<Alphabet> input_axes_;
  Alphabet output_axis_;
  std::vector<double> rows_;
  size_t num_rows_;
};

struct PosteriorReport {
  double min_posterior = 0.0;
  bool strictly_positive = false;
  // (x, y) symbol pairs achieving the minimum.
  std::vector<std::pair<std::string, std::string>> witnesses;
};

// P(other axes | axis = value), renormalized. Fails with FailedPrecondition
// ("zero event") if P(axis = value) is 0.
absl::StatusOr<JointPmf> ConditionJoint(const JointPmf& joint, size_t axis,
                                        std::string_view value);
absl::StatusOr<JointPmf> ConditionJointAt(const JointPmf& joint, size_t axis,
                                          size_t value_index);

// Joint over source axes and the channel output (appended last), computed as
// P(source) * P(output | inputs). The channel's input axes must each appear in
// the source (by name, with identical symbols); any remaining source axes are
// carried along, which is the Markov chain "rest - inputs - output". With
// `keep_source` false only the output marginal is returned.
absl::StatusOr<JointPmf> PushForward(const JointPmf& source,
                                     const Channel& mech, bool keep_source);
absl::StatusOr<JointPmf> PushForward(const Pmf& source, const Channel& mech,
                                     bool keep_source);

// Minimum of P(y | x) over a joint with axes (X, Y). Fails if some x has zero
// marginal mass.
absl::StatusOr<PosteriorReport> PosteriorPositivity(const JointPmf& joint_xy);

// Builds P(X, Y) = P(X) P(Y | X).
absl::StatusOr<JointPmf> JointFromPosterior(const Pmf& px,
                                            const Channel& posterior);

}  // namespace leakaudit

#endif  // LEAKAUDIT_DIST_H_
