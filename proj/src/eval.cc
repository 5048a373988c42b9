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

#include <algorithm>
#include <map>
#include <set>

#include "duet/agents.h"
#include "duet/error.h"
#include "duet/metrics.h"
#include "duet/text.h"

namespace duet {
namespace {

constexpr std::array<std::string_view, 3> kPartNames = {"train", "val", "test"};

std::string Detokenize(std::string_view output) {
  std::vector<std::string> t = DecodeOutputTokens(output);
  return Join(t, " ");
}

std::string WordsOutput(const std::vector<std::string>& words) { return EncodeWordsOutput(words); }

std::size_t TaskIndex(Task t) {
  return static_cast<std::size_t>(std::find(kAllTasks.begin(), kAllTasks.end(), t) -
                                  kAllTasks.begin());
}

}  // namespace

std::string_view FileStem(Task task) {
  switch (task) {
    case Task::kTargetSelection: return "target_selection";
    case Task::kClueGen: return "clue_gen";
    case Task::kClueFraming: return "clue_framing";
    case Task::kGuessSelection: return "guess_selection";
    case Task::kGuessFraming: return "guess_framing";
    case Task::kSuccessCls: return "success_cls";
  }
  return "?";
}

Prediction OraclePredictor::Predict(const EncodedExample& e, Ablation) {
  return {e.output, e.label.value_or(false)};
}

RandomPredictor::RandomPredictor(std::span<const EncodedExample> train, std::uint64_t seed)
    : outputs_(kAllTasks.size()), rng_(seed) {
  for (const auto& e : train) outputs_[TaskIndex(e.task)].push_back(e.output);
}

Prediction RandomPredictor::Predict(const EncodedExample& e, Ablation) {
  if (e.task == Task::kSuccessCls) return {"", rng_.Bernoulli(0.5)};
  const auto& pool = outputs_[TaskIndex(e.task)];
  if (pool.empty()) return {EncodeWordsOutput({}), false};
  return {pool[rng_.Below(pool.size())], false};
}

VectorPredictor::VectorPredictor(std::shared_ptr<const VectorStore> store)
    : store_(std::move(store)) {
  if (!store_) throw ValidationError("the vector baseline needs --vectors");
  vocabulary_ = ClueVocabulary(*store_);
}

Prediction VectorPredictor::Predict(const EncodedExample& e, Ablation ablation) {
  DecodedInput in = DecodeInput(e.task, e.input, ablation);
  if (e.task == Task::kGuessSelection) {
    const auto& clue = in.Section(tok::kClue);
    auto ranked = RankWords(in.Section(tok::kUn), clue.empty() ? "" : clue[0], *store_);
    return {WordsOutput({ranked.empty() ? std::string() : ranked[0].first}), false};
  }
  if (e.task == Task::kClueGen) {
    const auto& targets = in.Section(tok::kTgt);
    std::vector<std::string> bad = in.Section(tok::kAvo);
    for (const auto& w : in.Section(tok::kNeu)) bad.push_back(w);
    std::set<std::string> on_board(bad.begin(), bad.end());
    on_board.insert(targets.begin(), targets.end());
    std::string best;
    double best_score = -1e300;
    for (const auto& c : vocabulary_) {
      if (on_board.count(c)) continue;
      double agg = 1e300;
      for (const auto& t : targets) agg = std::min(agg, store_->Cosine(c, t));
      double worst = bad.empty() ? 0.0 : -1e300;
      for (const auto& b : bad) worst = std::max(worst, store_->Cosine(c, b));
      double score = agg - worst;
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    return {WordsOutput({best}), false};
  }
  throw ValidationError("no vector baseline for " + std::string(ToString(e.task)));
}

Prediction LinearSuccessPredictor::Predict(const EncodedExample& e, Ablation ablation) {
  return {"", model_.PredictLabel(Featurize(e, ablation, model_.config.feature_seed))};
}

ExternalPredictor::ExternalPredictor(Endpoint endpoint, std::chrono::milliseconds budget)
    : client_(std::move(endpoint), budget), budget_(budget) {}

Prediction ExternalPredictor::Predict(const EncodedExample& e, Ablation) {
  Json req;
  const std::uint64_t id = next_id_++;
  req["type"] = "agent";
  req["id"] = id;
  req["task"] = ToString(e.task);
  req["input"] = e.input;
  req["budget_ms"] = budget_.count();
  client_.SendLine(req.dump());
  Json resp;
  try {
    resp = Json::parse(client_.ReadLine(budget_));
  } catch (const Json::parse_error&) {
    throw EndpointError("malformed response from " + client_.endpoint().ToString());
  }
  if (!resp.is_object() || resp.value("id", std::uint64_t{0}) != id || !resp.contains("output") ||
      !resp["output"].is_string())
    throw EndpointError("response lacks id or output");
  Prediction p{resp["output"].get<std::string>(), false};
  if (e.task == Task::kSuccessCls) {
    auto t = DecodeOutputTokens(p.output);
    p.label = !t.empty() && (t[0] == "true" || t[0] == "1");
  }
  return p;
}

TaskScores ScoreTask(Task task, std::span<const EncodedExample> gold,
                     std::span<const Prediction> predictions, const VectorStore* store) {
  if (gold.size() != predictions.size())
    throw ValidationError("prediction count does not match the examples");
  TaskScores s;
  s.n = gold.size();
  if (gold.empty()) return s;
  if (task == Task::kSuccessCls) {
    std::vector<bool> p, g;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      p.push_back(predictions[i].label);
      g.push_back(gold[i].label.value_or(false));
    }
    s.macro_f1 = MacroF1(p, g);
    return s;
  }
  double cos = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::string c = Detokenize(predictions[i].output);
    std::string r = Detokenize(gold[i].output);
    s.rouge1 += RougeF(c, r, RougeVariant::kR1);
    s.rouge2 += RougeF(c, r, RougeVariant::kR2);
    s.rougel += RougeF(c, r, RougeVariant::kRL);
    s.bleu += Bleu(c, r);
    s.exact += ExactMatch(c, r);
    if (store) {
      std::vector<std::string> ct = MetricTokens(c), rt = MetricTokens(r);
      cos += AvgVectorCosine(ct, rt, *store);
    }
  }
  const double n = double(gold.size());
  s.rouge1 /= n;
  s.rouge2 /= n;
  s.rougel /= n;
  s.bleu /= n;
  s.exact /= n;
  if (store) s.cosine = cos / n;
  return s;
}

TaskScores EvaluatePredictor(Predictor& predictor, std::span<const EncodedExample> test,
                             Ablation ablation, const VectorStore* store) {
  std::vector<Prediction> preds;
  preds.reserve(test.size());
  for (const auto& e : test) preds.push_back(predictor.Predict(e, ablation));
  return ScoreTask(test.empty() ? Task::kTargetSelection : test[0].task, test, preds, store);
}

SuccessData FeaturizeAll(std::span<const EncodedExample> examples, Ablation ablation,
                         std::uint64_t feature_seed) {
  SuccessData d;
  for (const auto& e : examples) {
    d.xs.push_back(Featurize(e, ablation, feature_seed));
    d.labels.push_back(e.label.value_or(false));
  }
  return d;
}

namespace {

std::optional<SuccessModel> TrainOn(std::span<const EncodedExample> train, Ablation ablation,
                                    const TrainConfig& config) {
  SuccessData d = FeaturizeAll(train, ablation, config.feature_seed);
  try {
    return TrainSuccessModel(d.xs, d.labels, config, ablation);
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

struct Cells {
  std::optional<TaskScores> by_task[kAllTasks.size()];
};

std::vector<std::optional<double>> MeanOf(const std::vector<std::vector<std::optional<double>>>& rows) {
  std::vector<std::optional<double>> out(rows.front().size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& r : rows)
      if (r[c]) {
        sum += *r[c];
        ++n;
      }
    if (n == rows.size()) out[c] = sum / double(n);
  }
  return out;
}

}  // namespace

std::vector<ReportTable> ReplayEval(std::span<const GameRecord> records,
                                    const ReplayEvalOptions& options,
                                    std::shared_ptr<const VectorStore> store) {
  if (options.runs < 1) throw ValidationError("runs must be at least 1");
  const DatasetSplit split = SplitByClueGiver(records, options.ratios, options.seed);
  const bool multi = options.runs > 1;

  std::vector<ReportTable> tables(4);
  std::vector<std::string> labels = {"Priors", "Model"};
  if (multi) labels.push_back("Run");
  tables[0].title = "Target & Guess Selection (R-1)";
  tables[0].label_columns = labels;
  tables[0].value_columns = {"Target R-1", "Guess R-1"};
  tables[1].title = "Clue Generation";
  tables[1].label_columns = labels;
  tables[1].value_columns = {"Clue R-1", "cos"};
  tables[2].title = "Framing Generation";
  tables[2].label_columns = labels;
  tables[2].value_columns = {"Target R-1", "Target R-2", "Target R-L", "Target BLEU",
                             "Guess R-1",  "Guess R-2",  "Guess R-L",  "Guess BLEU"};
  tables[3].title = "Predicting Pragmatic Success (macro F-1)";
  tables[3].label_columns = multi ? std::vector<std::string>{"Priors", "Run"}
                                  : std::vector<std::string>{"Priors"};
  tables[3].display_scale = 1.0;

  for (const auto& name : options.predictors) {
    if (name == "random") tables[3].value_columns.push_back("Random");
    else if (name == "oracle") tables[3].value_columns.push_back("Oracle");
    else if (name == "linear") tables[3].value_columns.push_back("Linear");
    else if (name == "external") tables[3].value_columns.push_back("External");
    else if (name == "vector") tables[3].value_columns.push_back("k-NN vectors");
    else throw ValidationError("unknown predictor '" + name + "'");
  }

  for (Ablation ablation : options.ablations) {
    EncodeOptions enc;
    enc.ablation = ablation;
    std::vector<std::vector<EncodedExample>> train(kAllTasks.size()), test(kAllTasks.size());
    std::vector<EncodedExample> train_all;
    for (Task t : kAllTasks) {
      train[TaskIndex(t)] = EncodeRecords(records, split.train.turns, t, enc);
      test[TaskIndex(t)] = EncodeRecords(records, split.test.turns, t, enc);
      train_all.insert(train_all.end(), train[TaskIndex(t)].begin(), train[TaskIndex(t)].end());
    }
    const std::string prior(DisplayName(ablation));
    using Row = std::vector<std::optional<double>>;
    std::vector<Row> success_rows;
    std::vector<std::array<std::vector<Row>, 3>> model_rows(options.predictors.size());
    std::vector<std::string> model_names(options.predictors.size());
    for (int run = 0; run < options.runs; ++run) {
      std::vector<std::optional<double>> success_row;
      for (std::size_t pi = 0; pi < options.predictors.size(); ++pi) {
        const std::string& name = options.predictors[pi];
        std::unique_ptr<Predictor> pred;
        const std::uint64_t run_seed = ForkSeed(options.seed, name, static_cast<std::uint64_t>(run));
        if (name == "random") pred = std::make_unique<RandomPredictor>(train_all, run_seed);
        else if (name == "oracle") pred = std::make_unique<OraclePredictor>();
        else if (name == "vector") pred = std::make_unique<VectorPredictor>(store);
        else if (name == "external") {
          if (!options.endpoint) throw ValidationError("predictor 'external' needs --endpoint");
          pred = std::make_unique<ExternalPredictor>(*options.endpoint, options.budget);
        } else if (name == "linear") {
          TrainConfig cfg = options.train;
          cfg.seed = run_seed;
          if (auto m = TrainOn(train[TaskIndex(Task::kSuccessCls)], ablation, cfg))
            pred = std::make_unique<LinearSuccessPredictor>(std::move(*m));
        }
        Cells cells;
        for (Task t : kAllTasks) {
          const auto& examples = test[TaskIndex(t)];
          if (!pred || !pred->supports(t) || examples.empty()) continue;
          cells.by_task[TaskIndex(t)] =
              EvaluatePredictor(*pred, examples, ablation, store.get());
        }
        auto get = [&](Task t) -> const std::optional<TaskScores>& { return cells.by_task[TaskIndex(t)]; };
        auto field = [&](Task t, double TaskScores::*m) -> std::optional<double> {
          if (!get(t)) return std::nullopt;
          return (*get(t)).*m;
        };
        std::vector<std::optional<double>> r0 = {field(Task::kTargetSelection, &TaskScores::rouge1),
                                                 field(Task::kGuessSelection, &TaskScores::rouge1)};
        std::vector<std::optional<double>> r1 = {
            field(Task::kClueGen, &TaskScores::rouge1),
            get(Task::kClueGen) ? get(Task::kClueGen)->cosine : std::nullopt};
        std::vector<std::optional<double>> r2;
        for (Task t : {Task::kClueFraming, Task::kGuessFraming})
          for (auto m : {&TaskScores::rouge1, &TaskScores::rouge2, &TaskScores::rougel,
                         &TaskScores::bleu})
            r2.push_back(field(t, m));
        success_row.push_back(get(Task::kSuccessCls) ? get(Task::kSuccessCls)->macro_f1
                                                     : std::nullopt);
        std::vector<std::vector<std::optional<double>>> rs = {r0, r1, r2};
        const std::array<std::vector<Task>, 3> table_tasks = {
            std::vector<Task>{Task::kTargetSelection, Task::kGuessSelection},
            std::vector<Task>{Task::kClueGen},
            std::vector<Task>{Task::kClueFraming, Task::kGuessFraming}};
        for (int k = 0; k < 3; ++k) {
          if (!pred || std::none_of(table_tasks[k].begin(), table_tasks[k].end(),
                                    [&](Task t) { return pred->supports(t); }))
            continue;
          std::vector<std::string> l = {prior, pred->name()};
          model_names[pi] = l[1];
          if (multi) l.push_back(std::to_string(run + 1));
          tables[k].AddRow(l, rs[k]);
          model_rows[pi][k].push_back(rs[k]);
        }
      }
      std::vector<std::string> l = {prior};
      if (multi) l.push_back(std::to_string(run + 1));
      tables[3].AddRow(l, success_row);
      success_rows.push_back(success_row);
    }
    if (multi) {
      for (std::size_t pi = 0; pi < options.predictors.size(); ++pi)
        for (int k = 0; k < 3; ++k)
          if (!model_rows[pi][k].empty())
            tables[k].AddRow({prior, model_names[pi], "mean"}, MeanOf(model_rows[pi][k]));
      tables[3].AddRow({prior, "mean"}, MeanOf(success_rows));
    }
  }
  return tables;
}

ReportTable SuccessGrid(std::span<const GameRecord> records, const TrainConfig& config,
                        std::uint64_t split_seed, std::array<int, 3> ratios) {
  const DatasetSplit split = SplitByClueGiver(records, ratios, split_seed);
  ReportTable table;
  table.title = "Predicting Pragmatic Success (macro F-1)";
  table.label_columns = {"Priors"};
  table.value_columns = {"Random", "Linear"};
  table.display_scale = 1.0;
  for (Ablation ablation : kAllAblations) {
    EncodeOptions enc;
    enc.ablation = ablation;
    auto train = EncodeRecords(records, split.train.turns, Task::kSuccessCls, enc);
    auto test = EncodeRecords(records, split.test.turns, Task::kSuccessCls, enc);
    std::optional<double> random, linear;
    if (!test.empty()) {
      if (ablation == Ablation::kNone) {
        RandomPredictor rp({}, ForkSeed(split_seed, "random_success"));
        random = EvaluatePredictor(rp, test, ablation, nullptr).macro_f1;
      }
      if (auto m = TrainOn(train, ablation, config)) {
        LinearSuccessPredictor lp(std::move(*m));
        linear = EvaluatePredictor(lp, test, ablation, nullptr).macro_f1;
      }
    }
    table.AddRow({std::string(DisplayName(ablation))}, {random, linear});
  }
  return table;
}

std::vector<ExportCounts> ExportSplits(std::span<const GameRecord> records,
                                       std::span<const Task> tasks, const EncodeOptions& encode,
                                       std::uint64_t split_seed, std::array<int, 3> ratios,
                                       const std::filesystem::path& dir) {
  const DatasetSplit split = SplitByClueGiver(records, ratios, split_seed);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<ExportCounts> counts;
  for (Task t : tasks) {
    ExportCounts c{t, {}};
    for (int p = 0; p < 3; ++p) {
      auto examples = EncodeRecords(records, split.part(p).turns, t, encode);
      c.per_part[p] = examples.size();
      WriteExamples(dir / (std::string(FileStem(t)) + "." + std::string(kPartNames[p]) + ".jsonl"),
                    examples);
    }
    counts.push_back(c);
  }
  return counts;
}

std::vector<std::string> VerifySplits(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  // stem -> part -> givers
  std::map<std::string, std::map<std::string, std::set<std::string>>> seen;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (!name.ends_with(".jsonl")) continue;
    std::vector<std::string_view> parts = Split(name, '.');
    if (parts.size() != 3) continue;
    if (std::find(kPartNames.begin(), kPartNames.end(), parts[1]) == kPartNames.end()) continue;
    auto& givers = seen[std::string(parts[0])][std::string(parts[1])];
    for (const auto& e : ReadExamples(entry.path())) givers.insert(e.provenance.giver);
  }
  std::vector<std::string> problems;
  for (const auto& [stem, by_part] : seen)
    for (auto a = by_part.begin(); a != by_part.end(); ++a)
      for (auto b = std::next(a); b != by_part.end(); ++b)
        for (const auto& g : a->second)
          if (b->second.count(g))
            problems.push_back(stem + ": clue giver '" + g + "' appears in " + a->first + " and " +
                               b->first);
  return problems;
}

}  // namespace duet
