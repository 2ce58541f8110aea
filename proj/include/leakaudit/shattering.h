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

// Attribute mechanisms P(S | X) and P(S | X, Y): the maximally revealing
// ("shattering") attribute, attribute-inference gains, and a seeded sampler of
// random attributes.

#ifndef LEAKAUDIT_SHATTERING_H_
#define LEAKAUDIT_SHATTERING_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "leakaudit/dist.h"
#include "leakaudit/measures.h"

namespace leakaudit {

struct ShatteringSpec {
  double p_min = 0.0;
  // r(x) = P(x) / p_min, always >= 1.
  std::vector<double> ratios;
  // ceil(r(x)) after the integrality snap; the number of S symbols per x.
  std::vector<size_t> ceil_ratios;
  // Symbols "x:k" for k in 1..ceil(r(x)).
  Alphabet s_alphabet = Alphabet::Range("S", 1);
};

struct AttributeMechanism {
  Channel channel;
  std::string label;
};

// Relative distance within which a ratio counts as an integer.
inline constexpr double kIntegralitySnap = 1e-9;

// Builds S* and its mechanism. Requires every entry of `px` to be positive.
absl::StatusOr<std::pair<ShatteringSpec, AttributeMechanism>>
ShatteringAttribute(const Pmf& px, std::string output_name = "S");

// Attribute over (X, Y) that applies the shattering construction to each
// conditional P(X | Y = y) on its support, with a separate block of symbols
// "y|x:k" per y. Rows for x outside supp(X | Y = y) carry no mass and point
// at the first symbol of the block. Under a strictly positive posterior its
// conditional gain equals L(X -> Z | Y) for every feature channel.
absl::StatusOr<AttributeMechanism> ConditionalShatteringAttribute(
    const JointPmf& joint_xy, std::string output_name = "S");

// True if some row of the channel has a zero entry.
bool HasZeroEntry(const Channel& channel);

// I_inf(S; Z) for the Markov chain S - X - Z.
absl::StatusOr<MeasureValue> AttributeGain(const Pmf& px,
                                           const AttributeMechanism& attr,
                                           const Channel& feature);

// I_inf(S; Z | Y) for the Markov chain S - (X, Y) - Z. The attribute may read
// X alone or (X, Y); the feature channel reads X.
absl::StatusOr<MeasureValue> AttributeGainCond(const JointPmf& joint_xy,
                                               const AttributeMechanism& attr,
                                               const Channel& feature);

// Rows drawn uniformly from the simplex over `s_size` symbols.
AttributeMechanism SampleRandomAttribute(std::vector<Alphabet> input_axes,
                                         size_t s_size, uint64_t seed,
                                         std::string output_name = "S");

}  // namespace leakaudit

#endif  // LEAKAUDIT_SHATTERING_H_
