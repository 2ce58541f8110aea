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

#include "leakaudit/synth.h"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "leakaudit/dist.h"
#include "oracles.h"

namespace leakaudit {
namespace {

using ::leakaudit::testing::Unwrap;
using ::testing::ElementsAre;
using ::testing::ElementsAreArray;

TEST(PositiveJointTest, DeterministicAndPositive) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    JointPmf a = Unwrap(RandomPositivePosteriorJoint(5, 3, seed, 0.05));
    JointPmf b = Unwrap(RandomPositivePosteriorJoint(5, 3, seed, 0.05));
    EXPECT_EQ(a, b);
    PosteriorReport r = Unwrap(PosteriorPositivity(a));
    EXPECT_TRUE(r.strictly_positive);
    EXPECT_GE(r.min_posterior, 0.05 - 1e-12);
  }
  EXPECT_NE(Unwrap(RandomPositivePosteriorJoint(5, 3, 1)),
            Unwrap(RandomPositivePosteriorJoint(5, 3, 2)));
}

TEST(PositiveJointTest, RejectsBadBounds) {
  EXPECT_FALSE(RandomPositivePosteriorJoint(0, 2, 1).ok());
  EXPECT_FALSE(RandomPositivePosteriorJoint(4, 2, 1, 0.5).ok());
  EXPECT_FALSE(RandomPositivePosteriorJoint(4, 2, 1, 0.0).ok());
}

TEST(DeterministicLabelTest, Parity) {
  JointPmf j = Unwrap(DeterministicLabelJoint("parity", 4));
  // x = 0, 1, 2, 3 has popcount parity 0, 1, 1, 0.
  EXPECT_THAT(testing::Vec(j.probs()),
              ElementsAre(0.25, 0, 0, 0.25, 0, 0.25, 0.25, 0));
  EXPECT_FALSE(Unwrap(PosteriorPositivity(j)).strictly_positive);
}

TEST(DeterministicLabelTest, Threshold) {
  JointPmf j = Unwrap(DeterministicLabelJoint("threshold", 4));
  EXPECT_THAT(testing::Vec(j.probs()),
              ElementsAre(0.25, 0, 0.25, 0, 0, 0.25, 0, 0.25));
  EXPECT_FALSE(DeterministicLabelJoint("majority", 4).ok());
  EXPECT_FALSE(DeterministicLabelJoint("parity", 1).ok());
}

TEST(CopyLabelTest, CopiesTheLabel) {
  JointPmf j = Unwrap(DeterministicLabelJoint("parity", 4));
  Channel c = Unwrap(CopyLabelChannel(j));
  ASSERT_EQ(c.num_rows(), 4u);
  EXPECT_THAT(testing::Vec(c.row(0)), ElementsAre(1, 0));
  EXPECT_THAT(testing::Vec(c.row(1)), ElementsAre(0, 1));
  EXPECT_THAT(testing::Vec(c.row(2)), ElementsAre(0, 1));
  EXPECT_THAT(testing::Vec(c.row(3)), ElementsAre(1, 0));
}

TEST(RandomChannelTest, RowsAreStochasticAndSeeded) {
  std::vector<Alphabet> in = {Alphabet::Range("X", 3), Alphabet::Range("Y", 2)};
  Channel a = RandomChannel(in, 4, 9);
  EXPECT_EQ(a, RandomChannel(in, 4, 9));
  EXPECT_NE(a, RandomChannel(in, 4, 10));
  ASSERT_EQ(a.num_rows(), 6u);
  for (size_t r = 0; r < a.num_rows(); ++r) {
    double total = 0.0;
    for (double p : a.row(r)) {
      EXPECT_GE(p, 0.0);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(SampleJointTest, MatchesDeterministicLabels) {
  JointPmf j = Unwrap(DeterministicLabelJoint("parity", 4));
  Dataset ds = Unwrap(SampleJoint(j, 1000, 3));
  ASSERT_EQ(ds.num_rows(), 1000u);
  const Column& x = *Unwrap(ds.Find("X"));
  const Column& y = *Unwrap(ds.Find("Y"));
  for (size_t i = 0; i < ds.num_rows(); ++i) {
    const int xv = std::stoi(x.value(i));
    EXPECT_EQ(std::stoi(y.value(i)), __builtin_popcount(xv) % 2);
  }
  EXPECT_EQ(ds.ToCsv(), Unwrap(SampleJoint(j, 1000, 3)).ToCsv());
  EXPECT_FALSE(SampleJoint(j, 0, 3).ok());
}

TEST(SampleJointTest, FrequenciesApproachTheJoint) {
  JointPmf j = Unwrap(RandomPositivePosteriorJoint(3, 2, 4));
  Dataset ds = Unwrap(SampleJoint(j, 200000, 5));
  std::map<std::pair<std::string, std::string>, double> freq;
  const Column& x = *Unwrap(ds.Find("X"));
  const Column& y = *Unwrap(ds.Find("Y"));
  for (size_t i = 0; i < ds.num_rows(); ++i) freq[{x.value(i), y.value(i)}] += 1;
  for (size_t a = 0; a < 3; ++a) {
    for (size_t b = 0; b < 2; ++b) {
      const double f = freq[{j.axis(0).symbol(a), j.axis(1).symbol(b)}] / 2e5;
      EXPECT_NEAR(f, j.at({a, b}), 0.005);
    }
  }
}

TEST(BatteryTest, ColumnsAndDeterminism) {
  BatteryConfig config;
  config.rows = 500;
  config.seed = 11;
  Dataset a = Unwrap(AttributeBattery(config));
  EXPECT_THAT(a.names(),
              ElementsAreArray({"x_1", "x_2", "x_3", "y_1", "y_2", "y_3", "u_1",
                                "u_2", "u_3", "u_4", "u_5", "u_6", "u_7"}));
  EXPECT_EQ(a.ToCsv(), Unwrap(AttributeBattery(config)).ToCsv());
  config.seed = 12;
  EXPECT_NE(a.ToCsv(), Unwrap(AttributeBattery(config)).ToCsv());
  EXPECT_THAT(BatteryInputs(config).size(), 3u + 3u + config.nuisance);
  config.rows = 5;
  EXPECT_FALSE(AttributeBattery(config).ok());
}

TEST(BatteryTest, FeatureCopiesAgreeAtTheFlipRate) {
  BatteryConfig config;
  config.rows = 100000;
  config.seed = 2;
  Dataset ds = Unwrap(AttributeBattery(config));
  const Column& x1 = *Unwrap(ds.Find("x_1"));
  const Column& x2 = *Unwrap(ds.Find("x_2"));
  double disagree = 0;
  for (size_t i = 0; i < ds.num_rows(); ++i) {
    disagree += x1.value(i) != x2.value(i);
  }
  EXPECT_NEAR(disagree / 1e5, config.feature_flip, 0.01);
}

}  // namespace
}  // namespace leakaudit
