// Copyright 2026 The tlc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cli_runs.hpp"
#include "tlc/config.hpp"
#include "tlc_tools/cli.hpp"

namespace tlc {
namespace {

namespace fs = std::filesystem;
using testing::run_tlc;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::scratch_dir("tlc_cli_test");
    config_ = (dir_ / "small.ini").string();
    std::ofstream(config_) << testing::small_config_text();
    out_ = (dir_ / "out").string();
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string first_line(const std::string& file) const {
    std::ifstream in(fs::path(out_) / file);
    std::string line;
    std::getline(in, line);
    return line;
  }

  fs::path dir_;
  std::string config_;
  std::string out_;
};

TEST_F(CliTest, SimulateWritesEventLogWithProvenance) {
  const testing::CliResult r = run_tlc({"simulate", "-c", config_, "--seed", "7", "-o", out_});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("cost="), std::string::npos);
  const std::string header = first_line("small_events_seed7.csv");
  RunConfig c = load_run_config(config_);
  c.output_dir = out_;
  c.sim.seed = 7;
  c.seed0 = 7;
  c.surface_seed = 7;
  EXPECT_EQ(header, "# tlc events config_hash=" + hash_hex(config_hash(c)) + " seed=7");
}

TEST_F(CliTest, GradientAppendsRecords) {
  ASSERT_EQ(run_tlc({"gradient", "-c", config_, "-r", "2", "-o", out_}).code, cli::kOk);
  ASSERT_EQ(run_tlc({"gradient", "-c", config_, "-o", out_}).code, cli::kOk);
  std::ifstream in(fs::path(out_) / "small_gradients.csv");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].rfind("# tlc gradients", 0), 0u);
  EXPECT_EQ(lines[1], "s1,s2,dLds1,dLds2,T,seed");
  EXPECT_EQ(lines[2].rfind("6,3,", 0), 0u);
}

TEST_F(CliTest, OptimizeSurfaceAndScenarioWriteFiles) {
  ASSERT_EQ(run_tlc({"optimize", "-c", config_, "--s1", "5", "--s2", "2", "-o", out_}).code,
            cli::kOk);
  EXPECT_TRUE(fs::exists(fs::path(out_) / "small_trajectory_s0_5_2.csv"));
  ASSERT_EQ(run_tlc({"surface", "-c", config_, "-o", out_}).code, cli::kOk);
  EXPECT_EQ(first_line("small_surface.csv").rfind("# tlc surface config_hash=", 0), 0u);
  const testing::CliResult r = run_tlc({"scenario", "-c", config_, "-o", out_});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(fs::exists(fs::path(out_) / "small_report.txt"));
  EXPECT_TRUE(fs::exists(fs::path(out_) / "small_report.csv"));
  std::ifstream in(fs::path(out_) / "small_report.csv");
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(all.find("Table 1 row 1"), std::string::npos);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const std::string env_dir = (dir_ / "env").string();
  setenv("TLC_OUTPUT_DIR", env_dir.c_str(), 1);
  const int code = run_tlc({"simulate", "-c", config_}).code;
  unsetenv("TLC_OUTPUT_DIR");
  ASSERT_EQ(code, cli::kOk);
  EXPECT_TRUE(fs::exists(fs::path(env_dir) / "small_events_seed5.csv"));
}

TEST_F(CliTest, DistinctExitCodes) {
  EXPECT_EQ(run_tlc({}).code, cli::kUsage);
  EXPECT_EQ(run_tlc({"frobnicate", "-c", config_}).code, cli::kUsage);
  EXPECT_EQ(run_tlc({"simulate"}).code, cli::kUsage);
  EXPECT_EQ(run_tlc({"simulate", "-c", "no_such_config"}).code, cli::kBadConfig);

  const std::string broken = (dir_ / "broken.ini").string();
  std::ofstream(broken) << "[simulation]\nthresholds = 1\n";
  EXPECT_EQ(run_tlc({"simulate", "-c", broken}).code, cli::kBadConfig);
  EXPECT_EQ(run_tlc({"simulate", "-c", config_, "--s1", "-1", "-o", out_}).code,
            cli::kBadConfig);

  const std::string blocker = (dir_ / "file").string();
  std::ofstream(blocker) << "x";
  EXPECT_EQ(run_tlc({"simulate", "-c", config_, "-o", blocker + "/sub"}).code, cli::kIoFailure);

  const std::string fragile = (dir_ / "fragile.ini").string();
  std::ofstream(fragile) << testing::small_config_text()
                         << "[estimator]\ngamma_margin = 0\ngreen_bursts_empty = false\n"
                            "phase_shift = none\n";
  EXPECT_EQ(run_tlc({"gradient", "-c", fragile, "-r", "20", "-o", out_}).code,
            cli::kEstimatorFault);

  const std::string idle = (dir_ / "idle.ini").string();
  std::ofstream(idle) << "[run]\nname = idle\nscenario = table2_row1\n"
                         "[simulation]\narrival_rate = 0, 0\nswitches = 10\n"
                         "[optimizer]\nmax_iterations = 2\nevaluation_replications = 1\n";
  EXPECT_EQ(run_tlc({"scenario", "-c", idle, "--no-surface", "-o", out_}).code, cli::kOk);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"simulate", "-c", config_},
      {"gradient", "-c", config_, "-r", "3"},
      {"optimize", "-c", config_},
      {"surface", "-c", config_, "-j", "2"},
  };
  std::map<std::string, std::string> first;
  for (int round = 0; round < 2; ++round) {
    const std::string out = (dir_ / ("round" + std::to_string(round))).string();
    for (std::vector<std::string> args : commands) {
      args.push_back("-o");
      args.push_back(out);
      ASSERT_EQ(run_tlc(args).code, cli::kOk);
    }
    const auto files = testing::read_tree(out);
    EXPECT_EQ(files.size(), 4u);
    if (round == 0) {
      first = files;
    } else {
      EXPECT_EQ(files, first);
    }
  }
}

}  // namespace
}  // namespace tlc
