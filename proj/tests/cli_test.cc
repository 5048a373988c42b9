// Copyright 2026 The Duet Lab Authors
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

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdio>
#include <string>

#include "duet/records.h"
#include "server_harness.h"
#include "test_util.h"

namespace duet {
namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult RunCli(const std::string& args) {
  std::string cmd = testing::CliPath() + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  testing::TempDir dir_;
};

TEST_F(CliTest, SimulateIsByteIdenticalAcrossRunsAndThreads) {
  ASSERT_EQ(RunCli("simulate -n 30 --seed 9 -o " + Path("a.jsonl")).code, 0);
  ASSERT_EQ(RunCli("simulate -n 30 --seed 9 -o " + Path("b.jsonl")).code, 0);
  ASSERT_EQ(RunCli("simulate -n 30 --seed 9 -j 4 -o " + Path("c.jsonl")).code, 0);
  std::string a = testing::ReadFile(Path("a.jsonl"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, testing::ReadFile(Path("b.jsonl")));
  EXPECT_EQ(a, testing::ReadFile(Path("c.jsonl")));
  EXPECT_EQ(ReadArchive(Path("a.jsonl")).size(), 30u);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli("stats " + Path("missing.jsonl")).code, 2);
  EXPECT_EQ(RunCli("simulate -n notanumber").code, 1);
  EXPECT_EQ(RunCli("simulate -n 2 --agent-a oracle -o " + Path("x.jsonl")).code, 1);
  EXPECT_EQ(RunCli("simulate -n 2 --agent-a vector -o " + Path("x.jsonl")).code, 1);
  EXPECT_EQ(RunCli("no-such-command").code, 1);
  testing::WriteFile(Path("bad.jsonl"), "{\"schema_version\":1,\n");
  EXPECT_EQ(RunCli("stats " + Path("bad.jsonl")).code, 1);
  EXPECT_EQ(RunCli("replay-eval " + Path("missing.jsonl")).code, 2);
  EXPECT_EQ(RunCli("--help").code, 0);
}

TEST_F(CliTest, StatsReportsArchive) {
  ASSERT_EQ(RunCli("simulate -n 12 --seed 2 -o " + Path("a.jsonl")).code, 0);
  RunResult r = RunCli("stats " + Path("a.jsonl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("games=12 ", 0), 0u) << r.out;
  r = RunCli("stats --json " + Path("a.jsonl"));
  EXPECT_EQ(Json::parse(r.out)["games"], 12);
}

TEST_F(CliTest, ConfigFileIsOverriddenByFlags) {
  testing::WriteFile(Path("duet.ini"), "[simulate]\ngames = 5\nseed = 4\n");
  ASSERT_EQ(RunCli("--config " + Path("duet.ini") + " simulate -o " + Path("a.jsonl")).code, 0);
  EXPECT_EQ(ReadArchive(Path("a.jsonl")).size(), 5u);
  ASSERT_EQ(RunCli("--config " + Path("duet.ini") + " simulate -n 7 -o " + Path("b.jsonl")).code, 0);
  EXPECT_EQ(ReadArchive(Path("b.jsonl")).size(), 7u);
  ASSERT_EQ(RunCli("simulate -n 5 --seed 4 -o " + Path("c.jsonl")).code, 0);
  EXPECT_EQ(testing::ReadFile(Path("a.jsonl")), testing::ReadFile(Path("c.jsonl")));
}

TEST_F(CliTest, VectorAgentsFromGeneratedFixture) {
  ASSERT_EQ(RunCli("make-vectors --dim 16 --seed 3 -o " + Path("v.vec")).code, 0);
  ASSERT_EQ(RunCli("simulate -n 6 --agent-a vector --agent-b vector:2 --vectors " + Path("v.vec") +
                " -o " + Path("a.jsonl")).code,
            0);
  auto records = ReadArchive(Path("a.jsonl"));
  EXPECT_EQ(records.size(), 6u);
  for (const auto& r : records) EXPECT_NO_THROW(ValidateRecord(r));
}

TEST_F(CliTest, ExportThenVerifySplits) {
  ASSERT_EQ(RunCli("simulate -n 40 --seed 5 -o " + Path("a.jsonl")).code, 0);
  ASSERT_EQ(RunCli("export " + Path("a.jsonl") + " -o " + Path("out")).code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "out" / "clue_gen.train.jsonl"));
  RunResult r = RunCli("verify-splits " + Path("out"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ok:"), std::string::npos);
  // Move one training example into the test part of the same task.
  std::string train = testing::ReadFile(dir_ / "out" / "clue_gen.train.jsonl");
  std::string first = train.substr(0, train.find('\n') + 1);
  testing::WriteFile(dir_ / "out" / "clue_gen.test.jsonl",
                     testing::ReadFile(dir_ / "out" / "clue_gen.test.jsonl") + first);
  EXPECT_EQ(RunCli("verify-splits " + Path("out")).code, 1);
}

TEST_F(CliTest, ReplayEvalFormats) {
  ASSERT_EQ(RunCli("simulate -n 40 --seed 5 -o " + Path("a.jsonl")).code, 0);
  RunResult r = RunCli("replay-eval " + Path("a.jsonl") + " --predictor oracle --format json");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_TRUE(j.is_array());
  r = RunCli("replay-eval " + Path("a.jsonl") + " --format tsv");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find('\t'), std::string::npos);
  r = RunCli("replay-eval " + Path("a.jsonl") + " --grid");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Demo_Req"), std::string::npos);
}

TEST_F(CliTest, TrainReportsScores) {
  ASSERT_EQ(RunCli("simulate -n 40 --seed 5 -o " + Path("a.jsonl")).code, 0);
  RunResult r = RunCli("train " + Path("a.jsonl") + " --epochs 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("macro"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace duet
