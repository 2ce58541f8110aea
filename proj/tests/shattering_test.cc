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
#include <vector>

#include "absl/status/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "leakaudit/measures.h"
#include "leakaudit/random.h"
#include "leakaudit/synth.h"
#include "oracles.h"

namespace leakaudit {
namespace {

using ::leakaudit::testing::AttributeGainCondOracle;
using ::leakaudit::testing::Log2;
using ::leakaudit::testing::Matrix;
using ::leakaudit::testing::Table2;
using ::leakaudit::testing::Unwrap;
using ::testing::ElementsAre;

Pmf Px(std::vector<double> p) {
  const size_t n = p.size();
  return Unwrap(ValidatePmf(std::move(p), Alphabet::Range("X", n)));
}

// log2(sum_z max_s P(s, z) / max_s P(s)) for S - X - Z, by direct loops.
double GainOracle(const Pmf& px, const Matrix& attr, const Matrix& w) {
  const size_t ns = attr[0].size(), nz = w[0].size();
  Matrix psz(ns, std::vector<double>(nz, 0.0));
  for (size_t x = 0; x < px.size(); ++x) {
    for (size_t s = 0; s < ns; ++s) {
      for (size_t z = 0; z < nz; ++z) psz[s][z] += px[x] * attr[x][s] * w[x][z];
    }
  }
  return testing::IInfOracle(psz);
}

std::vector<double> SMarginal(const Pmf& px, const Channel& mech) {
  std::vector<double> ps(mech.output_size(), 0.0);
  for (size_t x = 0; x < px.size(); ++x) {
    for (size_t s = 0; s < ps.size(); ++s) ps[s] += px[x] * mech.at(x, s);
  }
  return ps;
}

TEST(ShatteringAttributeTest, UniformIsCopy) {
  auto [spec, mech] = Unwrap(ShatteringAttribute(Px({0.5, 0.5})));
  EXPECT_EQ(spec.p_min, 0.5);
  EXPECT_THAT(spec.ceil_ratios, ElementsAre(1, 1));
  EXPECT_EQ(spec.s_alphabet.size(), 2u);
  EXPECT_EQ(mech.channel.Rows(), (Matrix{{1.0, 0.0}, {0.0, 1.0}}));
}

TEST(ShatteringAttributeTest, TwoThirdsOneThird) {
  auto [spec, mech] = Unwrap(ShatteringAttribute(Px({2.0 / 3, 1.0 / 3})));
  EXPECT_THAT(spec.s_alphabet.symbols(), ElementsAre("0:1", "0:2", "1:1"));
  EXPECT_NEAR(mech.channel.at(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(mech.channel.at(0, 1), 0.5, 1e-12);
  EXPECT_EQ(mech.channel.at(0, 2), 0.0);
  EXPECT_EQ(mech.channel.at(1, 2), 1.0);
  for (double p : SMarginal(Px({2.0 / 3, 1.0 / 3}), mech.channel)) {
    EXPECT_NEAR(p, 1.0 / 3, 1e-12);
  }
}

TEST(ShatteringAttributeTest, HalfQuarterQuarter) {
  auto [spec, mech] = Unwrap(ShatteringAttribute(Px({0.5, 0.25, 0.25})));
  EXPECT_EQ(spec.p_min, 0.25);
  EXPECT_THAT(spec.ceil_ratios, ElementsAre(2, 1, 1));
  EXPECT_EQ(spec.s_alphabet.size(), 4u);
  EXPECT_EQ(mech.channel.at(0, 0), 0.5);
  EXPECT_EQ(mech.channel.at(0, 1), 0.5);
}

TEST(ShatteringAttributeTest, FractionalRatioUsesRemainderSymbol) {
  // r = (0.7, 0.3) -> 7/3: two full shares and a remainder of 1 - 2 * 3/7.
  auto [spec, mech] = Unwrap(ShatteringAttribute(Px({0.7, 0.3})));
  EXPECT_THAT(spec.ceil_ratios, ElementsAre(3, 1));
  EXPECT_NEAR(mech.channel.at(0, 0), 3.0 / 7, 1e-12);
  EXPECT_NEAR(mech.channel.at(0, 1), 3.0 / 7, 1e-12);
  EXPECT_NEAR(mech.channel.at(0, 2), 1.0 / 7, 1e-12);
}

TEST(ShatteringAttributeTest, ZeroMassIsRejected) {
  EXPECT_EQ(ShatteringAttribute(Px({1.0, 0.0})).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(ShatteringAttributeTest, StructuralInvariants) {
  for (uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed, "px");
    size_t n = 1 + seed % 6;
    std::vector<double> p = rng.FlatDirichlet(n);
    // Keep every mass visibly positive.
    for (double& v : p) v = 0.9 * v + 0.1 / n;
    Pmf px = Px(p);
    auto [spec, mech] = Unwrap(ShatteringAttribute(px));
    size_t total = 0;
    for (size_t x = 0; x < n; ++x) {
      EXPECT_GE(spec.ratios[x], 1.0);
      total += spec.ceil_ratios[x];
    }
    EXPECT_EQ(spec.s_alphabet.size(), total);
    if (n > 1) EXPECT_TRUE(HasZeroEntry(mech.channel));
    std::vector<double> ps = SMarginal(px, mech.channel);
    EXPECT_NEAR(*std::max_element(ps.begin(), ps.end()), spec.p_min, 1e-12);
  }
}

TEST(ShatteringAttributeTest, IntegralitySnapAbsorbsRoundOff) {
  auto [spec, mech] =
      Unwrap(ShatteringAttribute(Px({0.6, 0.2 + 1e-13, 0.2 - 1e-13})));
  EXPECT_EQ(spec.ceil_ratios[0], 3u);
  EXPECT_EQ(spec.ceil_ratios[1], 1u);
}

TEST(AttributeGainTest, Examples) {
  Pmf px = Px({0.5, 0.5});
  Channel bsc = Unwrap(Channel::BinarySymmetric(0.25, px.alphabet()));
  auto [spec, mech] = Unwrap(ShatteringAttribute(px));
  EXPECT_NEAR(Unwrap(AttributeGain(px, mech, bsc)).bits, Log2(1.5), 1e-12);

  AttributeMechanism constant{Channel::Constant(px.alphabet(), 3, 1, "S"),
                              "constant"};
  EXPECT_NEAR(Unwrap(AttributeGain(px, constant, bsc)).bits, 0.0, 1e-12);

  Pmf px4 = Px({0.25, 0.25, 0.25, 0.25});
  AttributeMechanism copy{Channel::Identity(px4.alphabet(), "S"), "copy"};
  EXPECT_NEAR(
      Unwrap(AttributeGain(px4, copy, Channel::Identity(px4.alphabet()))).bits,
      2.0, 1e-12);
}

TEST(AttributeGainTest, ShatteringMeetsMaxLeakage) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    size_t nx = 1 + seed % 5, nz = 1 + (seed / 5) % 5;
    Rng rng(seed, "px");
    std::vector<double> p = rng.FlatDirichlet(nx);
    for (double& v : p) v = 0.95 * v + 0.05 / nx;
    Pmf px = Px(p);
    Channel feat = RandomChannel({px.alphabet()}, nz, seed);
    auto [spec, mech] = Unwrap(ShatteringAttribute(px));
    double gain = Unwrap(AttributeGain(px, mech, feat)).bits;
    EXPECT_NEAR(gain, Unwrap(MaxLeakage(px, feat)).bits, 1e-12) << seed;
    EXPECT_NEAR(gain, GainOracle(px, mech.channel.Rows(), feat.Rows()), 1e-12);
  }
}

JointPmf PositiveJoint() {
  return Unwrap(JointPmf::Create(
      {Alphabet::Range("X", 2), Alphabet::Range("Y", 2)},
      {0.45, 0.05, 0.1, 0.4}));
}

TEST(AttributeGainCondTest, Examples) {
  JointPmf jxy = PositiveJoint();
  Channel bsc = Unwrap(Channel::BinarySymmetric(0.25, jxy.axis(0)));

  // S = Y read through an (X, Y) mechanism.
  Matrix copy_rows = {{1, 0}, {0, 1}, {1, 0}, {0, 1}};
  AttributeMechanism copy_y{
      Unwrap(Channel::Create({jxy.axis(0), jxy.axis(1)},
                             Alphabet::Range("S", 2), copy_rows)),
      "copy of Y"};
  EXPECT_NEAR(Unwrap(AttributeGainCond(jxy, copy_y, bsc)).bits, 0.0, 1e-12);

  AttributeMechanism constant{Channel::Constant(jxy.axis(0), 2, 0, "S"), "c"};
  EXPECT_NEAR(Unwrap(AttributeGainCond(jxy, constant, bsc)).bits, 0.0, 1e-12);

  AttributeMechanism per_y = Unwrap(ConditionalShatteringAttribute(jxy));
  double gain = Unwrap(AttributeGainCond(jxy, per_y, bsc)).bits;
  EXPECT_NEAR(gain, Log2(1.5), 1e-12);
  EXPECT_NEAR(gain, Unwrap(CondMaxLeakage(jxy, bsc)).bits, 1e-12);
}

// Shattering P_X alone and ignoring Y does not reach the supremum here:
// P_X is uniform, so S* = X, and the Bayes guess of X from (Y, Z) is the
// guess from Y alone in every cell (0.45 + 0.4 both ways).
TEST(AttributeGainCondTest, MarginalShatteringCanMissTheSupremum) {
  JointPmf jxy = PositiveJoint();
  Channel bsc = Unwrap(Channel::BinarySymmetric(0.25, jxy.axis(0)));
  auto [spec, mech] = Unwrap(ShatteringAttribute(jxy.MarginalPmf(0)));
  EXPECT_NEAR(Unwrap(AttributeGainCond(jxy, mech, bsc)).bits, 0.0, 1e-12);
}

TEST(ConditionalShatteringTest, MeetsConditionalMaxLeakageUnderPositivity) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    JointPmf jxy = Unwrap(
        RandomPositivePosteriorJoint(2 + seed % 4, 2 + (seed / 4) % 3, seed));
    Channel feat = RandomChannel({jxy.axis(0)}, 2 + seed % 4, seed + 1);
    AttributeMechanism attr = Unwrap(ConditionalShatteringAttribute(jxy));
    double gain = Unwrap(AttributeGainCond(jxy, attr, feat)).bits;
    EXPECT_NEAR(gain, Unwrap(CondMaxLeakage(jxy, feat)).bits, 1e-12) << seed;
    EXPECT_NEAR(gain,
                AttributeGainCondOracle(Table2(jxy), attr.channel.Rows(),
                                        feat.Rows()),
                1e-12);
  }
}

TEST(ConditionalShatteringTest, HandlesZeroCellsAndStaysSound) {
  // Y = X mod 2 on four symbols: each y block shatters its two x values.
  JointPmf jxy = Unwrap(JointPmf::Create(
      {Alphabet::Range("X", 4), Alphabet::Range("Y", 2)},
      {0.25, 0, 0, 0.25, 0.25, 0, 0, 0.25}));
  AttributeMechanism attr = Unwrap(ConditionalShatteringAttribute(jxy));
  EXPECT_EQ(attr.channel.output_size(), 4u);
  Channel id = Channel::Identity(jxy.axis(0));
  EXPECT_NEAR(Unwrap(AttributeGainCond(jxy, attr, id)).bits, 1.0, 1e-12);
  EXPECT_NEAR(Unwrap(CondMaxLeakage(jxy, id)).bits, 1.0, 1e-12);
}

TEST(AttributeGainCondTest, MatchesOracle) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    JointPmf jxy = RandomJoint(
        {Alphabet::Range("X", 2 + seed % 3), Alphabet::Range("Y", 2)}, seed);
    Channel feat = RandomChannel({jxy.axis(0)}, 3, seed + 1);
    AttributeMechanism attr = SampleRandomAttribute(
        {jxy.axis(0), jxy.axis(1)}, 2 + seed % 3, seed + 2);
    EXPECT_NEAR(Unwrap(AttributeGainCond(jxy, attr, feat)).bits,
                std::max(0.0, AttributeGainCondOracle(
                                  Table2(jxy), attr.channel.Rows(),
                                  feat.Rows())),
                1e-12);
  }
}

TEST(SampleRandomAttributeTest, DeterministicAndConstantWhenSingleSymbol) {
  Alphabet x = Alphabet::Range("X", 3);
  AttributeMechanism a = SampleRandomAttribute({x}, 4, 17);
  AttributeMechanism b = SampleRandomAttribute({x}, 4, 17);
  EXPECT_EQ(a.channel, b.channel);
  EXPECT_NE(a.channel, SampleRandomAttribute({x}, 4, 18).channel);

  AttributeMechanism single = SampleRandomAttribute({x}, 1, 3);
  Pmf px = Px({0.2, 0.3, 0.5});
  Channel feat = RandomChannel({x}, 3, 5);
  EXPECT_EQ(Unwrap(AttributeGain(px, single, feat)).bits, 0.0);
}

TEST(AttributeGainTest, RandomAttributesAreSound) {
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    JointPmf jxy = RandomJoint(
        {Alphabet::Range("X", 2 + seed % 4), Alphabet::Range("Y", 2 + seed % 2)},
        seed);
    Channel feat = RandomChannel({jxy.axis(0)}, 2 + seed % 3, seed + 7);
    Pmf px = jxy.MarginalPmf(0);
    AttributeMechanism ux = SampleRandomAttribute({jxy.axis(0)}, 3, seed + 11);
    EXPECT_LE(Unwrap(AttributeGain(px, ux, feat)).bits,
              Unwrap(MaxLeakage(px, feat)).bits + 1e-9);
    AttributeMechanism uxy =
        SampleRandomAttribute({jxy.axis(0), jxy.axis(1)}, 3, seed + 13);
    EXPECT_LE(Unwrap(AttributeGainCond(jxy, uxy, feat)).bits,
              Unwrap(CondMaxLeakage(jxy, feat)).bits + 1e-9);
  }
}

}  // namespace
}  // namespace leakaudit
