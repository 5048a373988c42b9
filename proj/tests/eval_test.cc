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

#include "duet/eval.h"

#include <gtest/gtest.h>

#include "duet/error.h"
#include "duet/simulate.h"
#include "test_util.h"

namespace duet {
namespace {

const std::vector<GameRecord>& Archive() {
  static const std::vector<GameRecord> records = [] {
    auto store = std::make_shared<const VectorStore>(
        MakeFixtureVectors(CanonicalWordList(), 24, 9).store);
    SimulateOptions o;
    o.games = 80;
    o.seed = 17;
    o.agents = {AgentSpec::Parse("vector:2"), AgentSpec::Parse("vector:2")};
    o.pool_size = 30;
    return Simulate(o, store).records;
  }();
  return records;
}

// The vector guesser always finds fixture targets, so success labels only
// vary when a random agent takes one seat.
const std::vector<GameRecord>& MixedArchive() {
  static const std::vector<GameRecord> records = [] {
    auto store = std::make_shared<const VectorStore>(
        MakeFixtureVectors(CanonicalWordList(), 24, 9).store);
    SimulateOptions o;
    o.games = 80;
    o.seed = 17;
    o.agents = {AgentSpec::Parse("vector:2"), AgentSpec::Parse("random")};
    o.pool_size = 30;
    return Simulate(o, store).records;
  }();
  return records;
}

TEST(EvalTest, OracleScoresPerfectly) {
  ReplayEvalOptions o;
  o.predictors = {"oracle"};
  o.ablations = {Ablation::kNone, Ablation::kAll};
  auto tables = ReplayEval(Archive(), o);
  ASSERT_EQ(tables.size(), 4u);
  for (const char* prior : {"None", "All"}) {
    EXPECT_DOUBLE_EQ(*tables[0].At({prior, "Oracle"}, "Target R-1"), 1.0);
    EXPECT_DOUBLE_EQ(*tables[0].At({prior, "Oracle"}, "Guess R-1"), 1.0);
    EXPECT_DOUBLE_EQ(*tables[1].At({prior, "Oracle"}, "Clue R-1"), 1.0);
    EXPECT_FALSE(tables[1].At({prior, "Oracle"}, "cos").has_value());
    for (const char* col : {"Target R-1", "Target R-2", "Target R-L", "Target BLEU", "Guess R-1",
                            "Guess R-L"})
      EXPECT_DOUBLE_EQ(*tables[2].At({prior, "Oracle"}, col), 1.0) << col;
    EXPECT_DOUBLE_EQ(*tables[3].At({prior}, "Oracle"), 1.0);
  }
}

TEST(EvalTest, OracleCosineIsOneWithStore) {
  auto store = std::make_shared<const VectorStore>(
      MakeFixtureVectors(CanonicalWordList(), 24, 9).store);
  ReplayEvalOptions o;
  o.predictors = {"oracle"};
  auto tables = ReplayEval(Archive(), o, store);
  EXPECT_NEAR(*tables[1].At({"None", "Oracle"}, "cos"), 1.0, 1e-6);
}

TEST(EvalTest, VectorRowsOnlyWhereSupported) {
  auto store = std::make_shared<const VectorStore>(
      MakeFixtureVectors(CanonicalWordList(), 24, 9).store);
  ReplayEvalOptions o;
  o.predictors = {"random", "vector"};
  auto tables = ReplayEval(Archive(), o, store);
  EXPECT_TRUE(tables[0].At({"None", "k-NN vectors"}, "Guess R-1").has_value());
  EXPECT_FALSE(tables[0].At({"None", "k-NN vectors"}, "Target R-1").has_value());
  EXPECT_TRUE(tables[1].At({"None", "k-NN vectors"}, "cos").has_value());
  for (const auto& row : tables[2].rows) EXPECT_NE(row.labels[1], "k-NN vectors");
  EXPECT_TRUE(tables[2].At({"None", "Random"}, "Target R-1").has_value());
}

TEST(EvalTest, MultipleRunsAddMeanRows) {
  ReplayEvalOptions o;
  o.predictors = {"random"};
  o.runs = 3;
  auto tables = ReplayEval(Archive(), o);
  EXPECT_EQ(tables[0].rows.size(), 4u);
  double sum = 0;
  for (int run = 1; run <= 3; ++run)
    sum += *tables[0].At({"None", "Random", std::to_string(run)}, "Guess R-1");
  EXPECT_NEAR(*tables[0].At({"None", "Random", "mean"}, "Guess R-1"), sum / 3, 1e-12);
  ReplayEvalOptions none;
  none.runs = 0;
  EXPECT_THROW(ReplayEval(Archive(), none), ValidationError);
}

TEST(EvalTest, UnknownPredictorIsRejected) {
  ReplayEvalOptions o;
  o.predictors = {"gpt"};
  EXPECT_THROW(ReplayEval(Archive(), o), ValidationError);
  o.predictors = {"external"};
  EXPECT_THROW(ReplayEval(Archive(), o), ValidationError);
}

TEST(EvalTest, ScoreTaskUsesMacroF1ForSuccess) {
  std::vector<EncodedExample> gold(4);
  std::vector<Prediction> pred(4);
  for (int i = 0; i < 4; ++i) {
    gold[i].task = Task::kSuccessCls;
    gold[i].label = i < 2;
    pred[i].label = i == 0 || i == 2;
  }
  TaskScores s = ScoreTask(Task::kSuccessCls, gold, pred, nullptr);
  ASSERT_TRUE(s.macro_f1.has_value());
  EXPECT_DOUBLE_EQ(*s.macro_f1, 0.5);
}

TEST(EvalTest, SuccessGridShape) {
  TrainConfig cfg;
  cfg.epochs = 5;
  ReportTable t = SuccessGrid(MixedArchive(), cfg);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows[0].labels[0], "None");
  EXPECT_EQ(t.rows[5].labels[0], "All");
  EXPECT_TRUE(t.At({"None"}, "Random").has_value());
  for (std::size_t i = 1; i < 6; ++i) EXPECT_FALSE(t.rows[i].values[0].has_value());
  for (const auto& row : t.rows) {
    ASSERT_TRUE(row.values[1].has_value());
    EXPECT_GE(*row.values[1], 0.0);
    EXPECT_LE(*row.values[1], 1.0);
  }
}

TEST(ExportTest, SplitsAreDisjointByGiver) {
  testing::TempDir dir;
  std::vector<Task> tasks(kAllTasks.begin(), kAllTasks.end());
  auto counts = ExportSplits(Archive(), tasks, {}, 3, kDefaultSplitRatios, dir.path());
  ASSERT_EQ(counts.size(), tasks.size());
  for (const auto& c : counts) {
    EXPECT_GT(c.total(), 0u);
    EXPECT_EQ(c.total(), EncodeAll(Archive(), c.task).size());
    auto train = ReadExamples(dir / (std::string(FileStem(c.task)) + ".train.jsonl"));
    EXPECT_EQ(train.size(), c.per_part[0]);
  }
  EXPECT_TRUE(VerifySplits(dir.path()).empty());
}

TEST(ExportTest, VerifierCatchesLeak) {
  testing::TempDir dir;
  std::vector<Task> tasks = {Task::kClueGen};
  ExportSplits(Archive(), tasks, {}, 3, kDefaultSplitRatios, dir.path());
  auto train = ReadExamples(dir / "clue_gen.train.jsonl");
  auto test = ReadExamples(dir / "clue_gen.test.jsonl");
  ASSERT_FALSE(train.empty());
  test.push_back(train.front());
  WriteExamples(dir / "clue_gen.test.jsonl", test);
  auto problems = VerifySplits(dir.path());
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find(train.front().provenance.giver), std::string::npos);
}

}  // namespace
}  // namespace duet
