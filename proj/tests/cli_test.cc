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

#include "leakaudit/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "leakaudit/dataset.h"
#include "leakaudit/dist_json.h"
#include "leakaudit/manifest.h"
#include "oracles.h"

namespace leakaudit {
namespace {

using ::leakaudit::testing::Unwrap;
using ::testing::HasSubstr;

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("leakaudit_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Dir(const std::string& sub) const { return (dir_ / sub).string(); }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, SynthBsc) {
  ASSERT_EQ(Run({"--out", Dir("b"), "synth", "--bsc", "0.25"}), kExitOk);
  OrderedJson doc = Unwrap(ParseJson(Slurp(Dir("b/channel.json"))));
  Channel c = Unwrap(ChannelFromJson(doc));
  EXPECT_THAT(testing::Vec(c.row(0)), ::testing::ElementsAre(0.75, 0.25));
  EXPECT_THAT(testing::Vec(c.row(1)), ::testing::ElementsAre(0.25, 0.75));
  EXPECT_TRUE(fs::exists(Dir("b/manifest.json")));
}

TEST_F(CliTest, SynthIsSeeded) {
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(Run({"--seed", "7", "--out", Dir(sub), "synth",
                   "--positive-posterior"}),
              kExitOk);
  }
  EXPECT_EQ(Slurp(Dir("a/joint.json")), Slurp(Dir("b/joint.json")));
}

TEST_F(CliTest, SynthParitySampleHasDeterministicLabels) {
  ASSERT_EQ(Run({"--out", Dir("p"), "synth", "--deterministic-labels", "parity",
                 "--sample", "1000"}),
            kExitOk);
  Dataset ds = Unwrap(Dataset::FromCsv(Slurp(Dir("p/data.csv"))));
  ASSERT_EQ(ds.num_rows(), 1000u);
  const Column& x = *Unwrap(ds.Find("X"));
  const Column& y = *Unwrap(ds.Find("Y"));
  for (size_t i = 0; i < ds.num_rows(); ++i) {
    EXPECT_EQ(std::stoi(y.value(i)), __builtin_popcount(std::stoi(x.value(i))) % 2);
  }
}

TEST_F(CliTest, SynthRejectsEmptyRequest) {
  EXPECT_EQ(Run({"--out", Dir("e"), "synth"}), kExitInputError);
  EXPECT_EQ(Run({"--out", Dir("e"), "synth", "--bsc", "0.1", "--identity"}),
            kExitInputError);
}

TEST_F(CliTest, CertifyExitCodesFollowTheBudget) {
  // Uniform binary X through BSC(0.25) leaks log2(1.5) = 0.585 bits.
  ASSERT_EQ(Run({"--out", Dir("j"), "synth", "--positive-posterior",
                 "--x-size", "2", "--bsc", "0.25"}),
            kExitOk);
  const std::string joint = Dir("j/joint.json");
  const std::string channel = Dir("j/channel.json");
  EXPECT_EQ(Run({"--out", Dir("c1"), "certify", "--joint", joint, "--channel",
                 channel, "--gamma", "0.6"}),
            kExitOk);
  EXPECT_THAT(out_.str(), HasSubstr("PASS"));
  OrderedJson report = Unwrap(ParseJson(Slurp(Dir("c1/report.json"))));
  EXPECT_NEAR(report["gamma_lpp"].get<double>(), std::log2(1.5), 1e-11);
  EXPECT_EQ(Run({"--out", Dir("c2"), "certify", "--joint", joint, "--channel",
                 channel, "--gamma", "0.5"}),
            kExitCertificationFailed);
}

TEST_F(CliTest, MalformedInputExitsTwo) {
  std::ofstream(Dir("bad.json")) << "{ not json";
  EXPECT_EQ(Run({"--out", Dir("o"), "certify", "--joint", Dir("bad.json"),
                 "--channel", Dir("bad.json")}),
            kExitInputError);
  EXPECT_THAT(err_.str(), HasSubstr("error:"));
  EXPECT_EQ(Run({"--out", Dir("o"), "certify", "--joint", Dir("missing.json"),
                 "--channel", Dir("missing.json")}),
            kExitInputError);
  EXPECT_EQ(Run({"--out", Dir("o"), "frobnicate"}), kExitInputError);
}

class CliAuditTest : public CliTest {
 protected:
  void SetUp() override {
    CliTest::SetUp();
    ASSERT_EQ(Run({"--seed", "3", "--out", Dir("d"), "synth", "--battery",
                   "--sample", "6000"}),
              kExitOk);
  }
  std::vector<std::string> AuditArgs(const std::string& out) {
    return {"--out",   out,           "audit",     "--data",
            Dir("d/data.csv"),        "--task",    "y_1,y_2,y_3",
            "--sensitive", "x_1,x_2,x_3,y_1", "--repr", "erm",
            "--repeats", "1"};
  }
};

TEST_F(CliAuditTest, ErmLeaksOffDiagonal) {
  ASSERT_EQ(Run(AuditArgs(Dir("a"))), kExitOk);
  OrderedJson doc = Unwrap(ParseJson(Slurp(Dir("a/audit.json"))));
  std::map<std::string, bool> positive;
  bool saw_diagonal = false;
  for (const auto& cell : doc["cells"]) {
    const std::string task = cell["task"];
    if (cell["diagonal"].get<bool>()) {
      saw_diagonal = true;
      EXPECT_EQ(cell["sensitive"].get<std::string>(), task);
      continue;
    }
    if (cell["delta_adv"].get<double>() > 0) positive[task] = true;
  }
  EXPECT_TRUE(saw_diagonal);
  for (const char* t : {"y_1", "y_2", "y_3"}) EXPECT_TRUE(positive[t]) << t;
  for (const char* f : {"audit.csv", "heatmap.svg", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(Dir(std::string("a/") + f))) << f;
  }
}

TEST_F(CliAuditTest, RerunIsByteIdentical) {
  ASSERT_EQ(Run(AuditArgs(Dir("r1"))), kExitOk);
  ASSERT_EQ(Run(AuditArgs(Dir("r2"))), kExitOk);
  for (const char* f : {"audit.json", "audit.csv", "heatmap.svg"}) {
    EXPECT_EQ(Slurp(Dir(std::string("r1/") + f)),
              Slurp(Dir(std::string("r2/") + f)))
        << f;
  }
}

TEST_F(CliAuditTest, UnknownColumnIsAnInputError) {
  std::vector<std::string> args = AuditArgs(Dir("u"));
  args[8] = "s_9";
  EXPECT_EQ(Run(args), kExitInputError);
}

TEST_F(CliTest, FrontierParityReachesFullUtilityAtZeroLeakage) {
  ASSERT_EQ(Run({"--out", Dir("j"), "synth", "--deterministic-labels", "parity"}),
            kExitOk);
  ASSERT_EQ(Run({"--out", Dir("f"), "frontier", "--joint", Dir("j/joint.json"),
                 "--z-size", "2"}),
            kExitOk);
  const std::string csv = Slurp(Dir("f/points.csv"));
  std::istringstream lines(csv);
  std::string header, line;
  std::getline(lines, header);
  const auto cols = absl::StrSplit(header, ',');
  std::vector<std::string> names(cols.begin(), cols.end());
  const size_t gi = std::find(names.begin(), names.end(), "gamma_lpp") - names.begin();
  const size_t ui =
      std::find(names.begin(), names.end(), "utility_iinf") - names.begin();
  ASSERT_LT(gi, names.size());
  ASSERT_LT(ui, names.size());
  bool witness = false;
  while (std::getline(lines, line)) {
    std::vector<std::string> f = absl::StrSplit(line, ',');
    if (std::abs(std::stod(f[gi])) < 1e-12 &&
        std::abs(std::stod(f[ui]) - 1.0) < 1e-12) {
      witness = true;
    }
  }
  EXPECT_TRUE(witness);
}

TEST_F(CliTest, FrontierSingleOutputIsTheOrigin) {
  ASSERT_EQ(Run({"--seed", "4", "--out", Dir("j"), "synth",
                 "--positive-posterior"}),
            kExitOk);
  ASSERT_EQ(Run({"--out", Dir("f"), "frontier", "--joint", Dir("j/joint.json"),
                 "--z-size", "1"}),
            kExitOk);
  std::istringstream lines(Slurp(Dir("f/frontier.csv")));
  std::string line;
  size_t rows = 0;
  std::getline(lines, line);
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 1u);
}

TEST_F(CliTest, FrontierRerunIsByteIdentical) {
  ASSERT_EQ(Run({"--seed", "5", "--out", Dir("j"), "synth",
                 "--positive-posterior", "--x-size", "3"}),
            kExitOk);
  for (const char* sub : {"f1", "f2"}) {
    ASSERT_EQ(Run({"--seed", "5", "--out", Dir(sub), "frontier", "--joint",
                   Dir("j/joint.json"), "--search", "--restarts", "3",
                   "--steps", "50"}),
              kExitOk);
  }
  EXPECT_EQ(Slurp(Dir("f1/points.csv")), Slurp(Dir("f2/points.csv")));
  EXPECT_EQ(Slurp(Dir("f1/frontier.svg")), Slurp(Dir("f2/frontier.svg")));
}

TEST(ManifestTest, DigestsAreStableAndSensitive) {
  const std::string a = ConfigDigest({"audit", "--seed", "1"}, {"x,y\n1,0\n"});
  EXPECT_EQ(a, ConfigDigest({"audit", "--seed", "1"}, {"x,y\n1,0\n"}));
  EXPECT_NE(a, ConfigDigest({"audit", "--seed", "2"}, {"x,y\n1,0\n"}));
  EXPECT_NE(a, ConfigDigest({"audit", "--seed", "1"}, {"x,y\n0,0\n"}));
  // Argument boundaries matter.
  EXPECT_NE(ConfigDigest({"ab", "c"}, {}), ConfigDigest({"a", "bc"}, {}));
  EXPECT_EQ(ContentDigest("abc"), ContentDigest("abc"));
  EXPECT_NE(ContentDigest("abc"), ContentDigest("abd"));
}

TEST(ManifestTest, SourceDateEpochPinsTimestamps) {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  EXPECT_EQ(UtcTimestamp(), "1970-01-01T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_THAT(UtcTimestamp(), ::testing::MatchesRegex(
                                  "[0-9]{4}-[0-9]{2}-[0-9]{2}T[0-9:]{8}Z"));
}

TEST(ManifestTest, JsonKeyOrder) {
  RunManifest m;
  m.command = "synth";
  m.outputs = {{"joint.json", "00ff"}};
  OrderedJson doc = ManifestToJson(m);
  EXPECT_EQ(doc.begin().key(), "command");
  EXPECT_EQ(doc["version"], kToolVersion);
  EXPECT_EQ(doc["outputs"].size(), 1u);
}

}  // namespace
}  // namespace leakaudit
