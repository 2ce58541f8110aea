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

#include "leakaudit/frontier.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "leakaudit/certify.h"
#include "leakaudit/measures.h"
#include "leakaudit/synth.h"
#include "oracles.h"

namespace leakaudit {
namespace {

using ::leakaudit::testing::IInfOracle;
using ::leakaudit::testing::Table2;
using ::leakaudit::testing::TaskOutputTable;
using ::leakaudit::testing::Unwrap;

JointPmf Parity() { return Unwrap(DeterministicLabelJoint("parity", 4)); }

// X uniform on 4 symbols, Y = X mod 2.
JointPmf Mod2() {
  return Unwrap(JointPmf::Create(
      {Alphabet::Range("X", 4), Alphabet::Range("Y", 2)},
      {0.25, 0, 0, 0.25, 0.25, 0, 0, 0.25}));
}

FrontierPoint Point(double gamma, double utility, std::string digest) {
  FrontierPoint p;
  p.gamma_lpp = gamma;
  p.gamma_ulpp = gamma;
  p.utility_i1 = utility;
  p.utility_iinf = utility;
  p.channel_digest = std::move(digest);
  return p;
}

bool HasPerfectWitness(const std::vector<FrontierPoint>& points,
                       double utility) {
  return std::any_of(points.begin(), points.end(), [&](const auto& p) {
    return p.gamma_lpp <= 1e-9 && p.utility_iinf >= utility - 1e-9;
  });
}

TEST(EnumerateDeterministicTest, Counts) {
  JointPmf j2 = Unwrap(RandomPositivePosteriorJoint(2, 2, 1));
  auto one = Unwrap(EnumerateDeterministic(j2, 1));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].gamma_lpp, 0.0);
  EXPECT_EQ(one[0].utility_iinf, 0.0);
  EXPECT_NEAR(one[0].utility_i1, 0.0, 1e-12);

  JointPmf j4 = Unwrap(RandomPositivePosteriorJoint(4, 2, 2));
  auto all = Unwrap(EnumerateDeterministic(j4, 3));
  EXPECT_EQ(all.size(), 81u);
  std::set<std::string> digests;
  for (const auto& p : all) {
    digests.insert(p.channel_digest);
    EXPECT_EQ(p.provenance, Provenance::kEnumerated);
  }
  EXPECT_EQ(digests.size(), 81u);
}

TEST(EnumerateDeterministicTest, GuardRejectsHugeAlphabets) {
  JointPmf big = RandomJoint(
      {Alphabet::Range("X", 21), Alphabet::Range("Y", 2)}, 3);
  EXPECT_EQ(EnumerateDeterministic(big, 2).status().code(),
            absl::StatusCode::kResourceExhausted);
}

TEST(EnumerateDeterministicTest, PerfectLppWitness) {
  auto points = Unwrap(EnumerateDeterministic(Mod2(), 2));
  EXPECT_TRUE(HasPerfectWitness(points, 1.0));
  auto parity = Unwrap(EnumerateDeterministic(Parity(), 2));
  EXPECT_TRUE(HasPerfectWitness(parity, 1.0));
  // Threshold labels: Y = [x >= 2], range size 2.
  auto threshold = Unwrap(EnumerateDeterministic(
      Unwrap(DeterministicLabelJoint("threshold", 4)), 3));
  EXPECT_TRUE(HasPerfectWitness(threshold, 1.0));
}

TEST(EnumerateDeterministicTest, UtilitiesMatchOracle) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(3, 2, 9));
  for (const auto& p : Unwrap(EnumerateDeterministic(jxy, 2))) {
    ASSERT_EQ(p.rows.size(), 3u);
    double u = IInfOracle(TaskOutputTable(Table2(jxy), p.rows));
    EXPECT_NEAR(p.utility_iinf, std::max(0.0, u), 1e-12);
  }
}

TEST(SearchChannelsTest, ZeroStepsReturnsStartingChannel) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(3, 2, 4));
  SearchConfig cfg;
  cfg.restarts = 1;
  cfg.steps_per_restart = 0;
  cfg.seed = 11;
  auto points = Unwrap(SearchChannels(jxy, cfg));
  ASSERT_EQ(points.size(), 1u);
  EXPECT_EQ(points[0].provenance, Provenance::kSearched);
  Channel start = Unwrap(Channel::Create({jxy.axis(0)},
                                         Alphabet::Range("Z", 2),
                                         points[0].rows));
  FrontierPoint again =
      Unwrap(EvaluateChannel(jxy, start, Provenance::kSearched));
  EXPECT_EQ(again.channel_digest, points[0].channel_digest);
  EXPECT_EQ(again.gamma_lpp, points[0].gamma_lpp);
}

TEST(SearchChannelsTest, DeterministicAndIndependentOfJobs) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(3, 3, 5));
  SearchConfig cfg;
  cfg.restarts = 6;
  cfg.steps_per_restart = 60;
  cfg.seed = 42;
  std::string a = FrontierCsv(Unwrap(SearchChannels(jxy, cfg, 1)));
  std::string b = FrontierCsv(Unwrap(SearchChannels(jxy, cfg, 1)));
  std::string c = FrontierCsv(Unwrap(SearchChannels(jxy, cfg, 3)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(SearchChannelsTest, ObjectiveNeverDecreasesAlongTrace) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(4, 2, 6));
  for (std::optional<double> budget : {std::optional<double>(),
                                       std::optional<double>(0.2)}) {
    SearchConfig cfg;
    cfg.restarts = 4;
    cfg.steps_per_restart = 200;
    cfg.leakage_budget = budget;
    cfg.seed = 3;
    auto points = Unwrap(SearchChannels(jxy, cfg));
    // Restarts begin where the objective drops below the previous point; the
    // trace within each restart is monotone, so at most restarts - 1 drops.
    size_t drops = 0;
    for (size_t i = 1; i < points.size(); ++i) {
      if (SearchObjective(points[i], cfg) <
          SearchObjective(points[i - 1], cfg) - 1e-15) {
        ++drops;
      }
    }
    EXPECT_LE(drops, cfg.restarts - 1);
  }
}

TEST(SearchChannelsTest, BudgetBoundsUtility) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(2, 2, 8));
  SearchConfig cfg;
  cfg.leakage_budget = 0.3;
  cfg.seed = 1;
  auto points = Unwrap(SearchChannels(jxy, cfg));
  double best = 0.0;
  size_t within = 0;
  for (const auto& p : points) {
    if (p.gamma_lpp <= 0.3 + 1e-9) {
      best = std::max(best, p.utility_iinf);
      ++within;
    }
  }
  EXPECT_GT(within, 0u);
  EXPECT_LE(best, 0.3 + 1e-9);
}

TEST(SearchChannelsTest, RejectsBadConfig) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(2, 2, 8));
  SearchConfig cfg;
  cfg.restarts = 0;
  EXPECT_FALSE(SearchChannels(jxy, cfg).ok());
  cfg.restarts = 1;
  cfg.step_scale = 0.0;
  EXPECT_FALSE(SearchChannels(jxy, cfg).ok());
}

TEST(ParetoFilterTest, Examples) {
  auto single = Unwrap(ParetoFilter({Point(0.3, 0.2, "a")},
                                    AlphaOrder::kInfinity));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].channel_digest, "a");

  auto two = Unwrap(ParetoFilter({Point(0.2, 0.4, "b"), Point(0.1, 0.5, "a")},
                                 AlphaOrder::kInfinity));
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0].channel_digest, "a");

  auto parity = Unwrap(EnumerateDeterministic(Mod2(), 2));
  auto frontier = Unwrap(ParetoFilter(parity, AlphaOrder::kInfinity));
  EXPECT_TRUE(HasPerfectWitness(frontier, 1.0));
}

TEST(ParetoFilterTest, SubsetAndIdempotent) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(4, 3, 12));
  auto points = Unwrap(EnumerateDeterministic(jxy, 3));
  for (AlphaOrder order : {AlphaOrder::kOne, AlphaOrder::kInfinity}) {
    auto once = Unwrap(ParetoFilter(points, order));
    auto twice = Unwrap(ParetoFilter(once, order));
    EXPECT_EQ(FrontierCsv(once), FrontierCsv(twice));
    std::set<std::string> input;
    for (const auto& p : points) input.insert(p.channel_digest);
    for (const auto& p : once) EXPECT_TRUE(input.count(p.channel_digest));
    for (size_t i = 1; i < once.size(); ++i) {
      EXPECT_LE(once[i - 1].gamma_lpp, once[i].gamma_lpp);
    }
  }
}

TEST(FeasibilityCheckTest, Examples) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(3, 2, 21));
  PosteriorReport pos = Unwrap(PosteriorPositivity(jxy));
  auto points = Unwrap(EnumerateDeterministic(jxy, 3));
  FeasibilityResult ok = FeasibilityCheck(points, pos);
  EXPECT_TRUE(ok.pass);
  EXPECT_TRUE(ok.assumption_met);
  EXPECT_EQ(ok.violations, 0u);

  points.push_back(Point(0.0, 1.0, "fake"));
  FeasibilityResult bad = FeasibilityCheck(points, pos);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.violations, 1u);
  EXPECT_DOUBLE_EQ(bad.worst_residual, 1.0);

  PosteriorReport parity_pos = Unwrap(PosteriorPositivity(Mod2()));
  FeasibilityResult vacuous =
      FeasibilityCheck(Unwrap(EnumerateDeterministic(Mod2(), 2)), parity_pos);
  EXPECT_TRUE(vacuous.pass);
  EXPECT_FALSE(vacuous.assumption_met);
  EXPECT_GT(vacuous.violations, 0u);
}

TEST(FrontierCsvTest, RoundTrip) {
  JointPmf jxy = Unwrap(RandomPositivePosteriorJoint(3, 2, 30));
  auto points = Unwrap(EnumerateDeterministic(jxy, 2));
  std::string csv = FrontierCsv(points);
  auto parsed = Unwrap(ParseFrontierCsv(csv));
  ASSERT_EQ(parsed.size(), points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    EXPECT_NEAR(parsed[i].gamma_lpp, points[i].gamma_lpp, 1e-11);
    EXPECT_NEAR(parsed[i].utility_iinf, points[i].utility_iinf, 1e-11);
    EXPECT_EQ(parsed[i].channel_digest, points[i].channel_digest);
    EXPECT_EQ(parsed[i].provenance, points[i].provenance);
  }
  EXPECT_EQ(FrontierCsv(parsed), csv);
  EXPECT_FALSE(ParseFrontierCsv("nonsense\n1,2\n").ok());
}

TEST(ChannelDigestTest, StableUnderTinyPerturbation) {
  Alphabet x = Alphabet::Range("X", 2);
  Channel a = Unwrap(Channel::Create({x}, Alphabet::Range("Z", 2),
                                     {{0.3, 0.7}, {0.6, 0.4}}));
  Channel b = Unwrap(Channel::Create({x}, Alphabet::Range("Z", 2),
                                     {{0.3 + 1e-15, 0.7 - 1e-15}, {0.6, 0.4}}));
  Channel c = Unwrap(Channel::Create({x}, Alphabet::Range("Z", 2),
                                     {{0.31, 0.69}, {0.6, 0.4}}));
  EXPECT_EQ(ChannelDigest(a), ChannelDigest(b));
  EXPECT_NE(ChannelDigest(a), ChannelDigest(c));
}

}  // namespace
}  // namespace leakaudit
