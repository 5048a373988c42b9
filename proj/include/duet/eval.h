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

#ifndef DUET_EVAL_H_
#define DUET_EVAL_H_

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "duet/classifier.h"
#include "duet/encoding.h"
#include "duet/net.h"
#include "duet/records.h"
#include "duet/report.h"
#include "duet/rng.h"
#include "duet/vectors.h"

namespace duet {

struct Prediction {
  std::string output;  // encoded "<bos> ... <eos>" for generation tasks
  bool label = false;  // SUCCESS_CLS
};

// Produces outputs for encoded inputs of one task. `supports` is false for
// task/predictor pairs without a baseline (reported as "--").
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string name() const = 0;
  virtual bool supports(Task task) const = 0;
  virtual Prediction Predict(const EncodedExample& example, Ablation ablation) = 0;
};

// Copies the gold output; the metric upper bound.
class OraclePredictor : public Predictor {
 public:
  std::string name() const override { return "Oracle"; }
  bool supports(Task) const override { return true; }
  Prediction Predict(const EncodedExample& example, Ablation ablation) override;
};

// Returns the output of a uniformly drawn training example of the same
// task, or a fair coin for SUCCESS_CLS.
class RandomPredictor : public Predictor {
 public:
  RandomPredictor(std::span<const EncodedExample> train, std::uint64_t seed);
  std::string name() const override { return "Random"; }
  bool supports(Task) const override { return true; }
  Prediction Predict(const EncodedExample& example, Ablation ablation) override;

 private:
  std::vector<std::vector<std::string>> outputs_;  // by task
  Rng rng_;
};

// Nearest-neighbour baselines: top-1 unselected word for GUESS_SELECTION,
// the min-cosine clue search for CLUE_GEN.
class VectorPredictor : public Predictor {
 public:
  explicit VectorPredictor(std::shared_ptr<const VectorStore> store);
  std::string name() const override { return "k-NN vectors"; }
  bool supports(Task task) const override {
    return task == Task::kGuessSelection || task == Task::kClueGen;
  }
  Prediction Predict(const EncodedExample& example, Ablation ablation) override;

 private:
  std::shared_ptr<const VectorStore> store_;
  std::vector<std::string> vocabulary_;
};

class LinearSuccessPredictor : public Predictor {
 public:
  explicit LinearSuccessPredictor(SuccessModel model) : model_(std::move(model)) {}
  std::string name() const override { return "Linear"; }
  bool supports(Task task) const override { return task == Task::kSuccessCls; }
  Prediction Predict(const EncodedExample& example, Ablation ablation) override;

 private:
  SuccessModel model_;
};

// Sends {"type":"agent","task","input"} and reads {"output"}; a SUCCESS_CLS
// output whose first token is "true" or "1" is a positive label.
class ExternalPredictor : public Predictor {
 public:
  ExternalPredictor(Endpoint endpoint, std::chrono::milliseconds budget);
  std::string name() const override { return "External"; }
  bool supports(Task) const override { return true; }
  Prediction Predict(const EncodedExample& example, Ablation ablation) override;

 private:
  LineClient client_;
  std::chrono::milliseconds budget_;
  std::uint64_t next_id_ = 1;
};

struct TaskScores {
  std::size_t n = 0;
  double rouge1 = 0, rouge2 = 0, rougel = 0, bleu = 0, exact = 0;
  std::optional<double> cosine;
  std::optional<double> macro_f1;
};

// Averages the per-example metrics; cosine only with a store.
TaskScores ScoreTask(Task task, std::span<const EncodedExample> gold,
                     std::span<const Prediction> predictions, const VectorStore* store);
TaskScores EvaluatePredictor(Predictor& predictor, std::span<const EncodedExample> test,
                             Ablation ablation, const VectorStore* store);

// Usable SUCCESS_CLS training data: features and labels.
struct SuccessData {
  std::vector<SparseVector> xs;
  std::vector<bool> labels;
};
SuccessData FeaturizeAll(std::span<const EncodedExample> examples, Ablation ablation,
                         std::uint64_t feature_seed = kDefaultFeatureSeed);

struct ReplayEvalOptions {
  std::vector<Ablation> ablations = {Ablation::kNone};
  std::vector<std::string> predictors = {"random"};  // random, oracle, vector, linear, external
  int runs = 1;
  std::uint64_t seed = 0;
  std::array<int, 3> ratios = kDefaultSplitRatios;
  std::optional<Endpoint> endpoint;
  std::chrono::milliseconds budget{2000};
  TrainConfig train;
};

// Splits by clue giver, encodes the test part of every task and scores each
// predictor. Returns four tables: selection, clue,
// framing and success results. With runs > 1 every run is a row and a
// "mean" row follows.
std::vector<ReportTable> ReplayEval(std::span<const GameRecord> records,
                                    const ReplayEvalOptions& options,
                                    std::shared_ptr<const VectorStore> store = nullptr);

// The six-prior success grid: rows None .. All, columns Random and Linear
// (Random for the None row only), macro F-1 on the test split.
ReportTable SuccessGrid(std::span<const GameRecord> records, const TrainConfig& config,
                        std::uint64_t split_seed = 0,
                        std::array<int, 3> ratios = kDefaultSplitRatios);

struct ExportCounts {
  Task task;
  std::array<std::size_t, 3> per_part{};
  std::size_t total() const { return per_part[0] + per_part[1] + per_part[2]; }
};

// Writes <task>.<train|val|test>.jsonl for every task into `dir`.
std::vector<ExportCounts> ExportSplits(std::span<const GameRecord> records,
                                       std::span<const Task> tasks, const EncodeOptions& encode,
                                       std::uint64_t split_seed, std::array<int, 3> ratios,
                                       const std::filesystem::path& dir);

// Reads every <task>.<part>.jsonl in `dir` and reports clue-giver ids that
// appear in more than one part of the same task. Empty means clean.
std::vector<std::string> VerifySplits(const std::filesystem::path& dir);

std::string_view FileStem(Task task);  // "target_selection", ...

}  // namespace duet

#endif  // DUET_EVAL_H_
