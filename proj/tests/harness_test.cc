// Copyright 2026 The dplearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dplearn/harness.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dplearn/io.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dplearn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::path(DPLEARN_TEST_TMPDIR) /
            ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(root_);
    fs::create_directories(root_);
  }

  int Run(HarnessOptions options) {
    out_.str("");
    err_.str("");
    return RunHarness(options, out_, err_);
  }

  std::string WriteConfig(const std::string& name, const json& j) {
    const std::string path = (root_ / name).string();
    std::ofstream(path) << j.dump();
    return path;
  }

  fs::path root_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(HarnessTest, ParamsExample) {
  HarnessOptions o;
  o.subcommand = "params";
  o.out_dir = (root_ / "p").string();
  ASSERT_EQ(Run(o), kExitOk) << err_.str();
  ASSERT_OK_AND_ASSIGN(json run, ReadJsonFile((root_ / "p/run.json").string()));
  EXPECT_EQ(run["config"]["T"], 10000);
  EXPECT_EQ(run["config"]["d"], 1024);
  EXPECT_TRUE(run["summary"]["invariants_hold"].get<bool>());
  ASSERT_OK_AND_ASSIGN(json params,
                       ReadJsonFile((root_ / "p/params.json").string()));
  EXPECT_GT(params["switching_bound"].get<double>(), 0);
  EXPECT_LT(params["eta"].get<double>(), 0.05);
  EXPECT_NE(out_.str().find("config:"), std::string::npos);
  EXPECT_TRUE(fs::exists(root_ / "p/run.log"));
}

TEST_F(HarnessTest, FlagsOverrideFileOverridesDefaults) {
  HarnessOptions o;
  o.subcommand = "params";
  o.config_path = WriteConfig("cfg.json", {{"T", 500}, {"seed", 3}});
  o.seed = 9;
  ASSERT_OK_AND_ASSIGN(json c, ResolveConfig(o));
  EXPECT_EQ(c["T"], 500);
  EXPECT_EQ(c["seed"], 9);
  EXPECT_EQ(c["d"], 1024);
}

TEST_F(HarnessTest, UnknownConfigKeyRejected) {
  HarnessOptions o;
  o.subcommand = "params";
  o.config_path = WriteConfig("cfg.json", {{"TT", 500}});
  o.out_dir = (root_ / "out").string();
  EXPECT_EQ(Run(o), kExitError);
  EXPECT_NE(err_.str().find("TT"), std::string::npos);
  EXPECT_FALSE(fs::exists(root_ / "out"));
}

TEST_F(HarnessTest, UnknownSubcommand) {
  HarnessOptions o;
  o.subcommand = "frobnicate";
  EXPECT_EQ(Run(o), kExitError);
}

TEST_F(HarnessTest, MissingInputLeavesNoArtifacts) {
  HarnessOptions o;
  o.subcommand = "online";
  o.input = (root_ / "nope.csv").string();
  o.out_dir = (root_ / "out").string();
  EXPECT_NE(Run(o), kExitOk);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_FALSE(fs::exists(root_ / "out"));
}

TEST_F(HarnessTest, OnlineWinnowZeroNoiseWithinBound) {
  HarnessOptions o;
  o.subcommand = "online";
  o.algo = "winnow";
  o.zero_noise = true;
  o.out_dir = (root_ / "w").string();
  ASSERT_EQ(Run(o), kExitOk) << err_.str();
  ASSERT_OK_AND_ASSIGN(json run, ReadJsonFile((root_ / "w/run.json").string()));
  EXPECT_TRUE(run["summary"]["within_bound"].get<bool>());
  EXPECT_TRUE(fs::exists(root_ / "w/transcript.csv"));
  EXPECT_TRUE(fs::exists(root_ / "w/stream.csv"));
}

TEST_F(HarnessTest, OnlineReadsStreamFile) {
  HarnessOptions gen;
  gen.subcommand = "online";
  gen.algo = "confident-winnow";
  gen.out_dir = (root_ / "gen").string();
  ASSERT_EQ(Run(gen), kExitOk) << err_.str();
  HarnessOptions o;
  o.subcommand = "online";
  o.algo = "dp-winnow";
  o.input = (root_ / "gen/stream.csv").string();
  o.out_dir = (root_ / "dp").string();
  ASSERT_EQ(Run(o), kExitError);
  EXPECT_FALSE(fs::exists(root_ / "dp"));
  ASSERT_OK_AND_ASSIGN(json target,
                       ReadJsonFile((root_ / "gen/target.json").string()));
  o.config_path = WriteConfig(
      "rho.json", {{"rho", target["claimed_margin"].get<double>()}});
  ASSERT_EQ(Run(o), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(root_ / "dp/params.json"));
}

TEST_F(HarnessTest, RerunsAreByteIdenticalApartFromLog) {
  for (const char* name : {"a", "b"}) {
    HarnessOptions o;
    o.subcommand = "pac-dl";
    o.trials = 2;
    o.seed = 5;
    o.out_dir = (root_ / name).string();
    ASSERT_EQ(Run(o), kExitOk) << err_.str();
  }
  int compared = 0;
  for (const auto& e : fs::directory_iterator(root_ / "a")) {
    const std::string name = e.path().filename().string();
    if (name == "run.log") continue;
    ASSERT_OK_AND_ASSIGN(std::string a, ReadFile(e.path().string()));
    ASSERT_OK_AND_ASSIGN(std::string b, ReadFile((root_ / "b" / name).string()));
    EXPECT_EQ(a, b) << name;
    ++compared;
  }
  EXPECT_GE(compared, 4);
}

TEST_F(HarnessTest, ArtifactsCarryProvenance) {
  HarnessOptions o;
  o.subcommand = "pac-dl";
  o.trials = 1;
  o.seed = 12;
  o.out_dir = (root_ / "p").string();
  ASSERT_EQ(Run(o), kExitOk) << err_.str();
  ASSERT_OK_AND_ASSIGN(std::string csv,
                       ReadFile((root_ / "p/sample.csv").string()));
  EXPECT_NE(csv.find("seed"), std::string::npos);
  EXPECT_NE(csv.find("config_hash"), std::string::npos);
  EXPECT_NE(csv.find("format_version"), std::string::npos);
}

TEST_F(HarnessTest, ReduceAndOracle) {
  HarnessOptions r;
  r.subcommand = "reduce";
  r.out_dir = (root_ / "r").string();
  ASSERT_EQ(Run(r), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(root_ / "r/halfspace_nonneg.json"));

  HarnessOptions o;
  o.subcommand = "oracle";
  o.input = (root_ / "r/list.json").string();
  o.config_path = WriteConfig("margin.json", {{"tool", "margin"}});
  ASSERT_EQ(Run(o), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("\"disagreements\": 0"), std::string::npos);

  HarnessOptions c;
  c.subcommand = "oracle";
  c.config_path =
      WriteConfig("count.json", {{"tool", "conjunction-count"}, {"d", 6},
                                 {"k", 3}});
  ASSERT_EQ(Run(c), kExitOk) << err_.str();
}

TEST_F(HarnessTest, AuditZeroNoiseControlFails) {
  HarnessOptions o;
  o.subcommand = "audit";
  o.zero_noise = true;
  o.trials = 2000;
  o.config_path = WriteConfig("a.json", {{"suites", {"em"}}});
  o.out_dir = (root_ / "a").string();
  EXPECT_EQ(Run(o), kExitCheckFailed) << err_.str();
  ASSERT_OK_AND_ASSIGN(json rep,
                       ReadJsonFile((root_ / "a/report_em.json").string()));
  EXPECT_EQ(rep["verdict"], "fail");
}

TEST_F(HarnessTest, TrialsFlagRejectedWhereMeaningless) {
  HarnessOptions o;
  o.subcommand = "params";
  o.trials = 5;
  EXPECT_EQ(Run(o), kExitError);
}

}  // namespace
}  // namespace dplearn
