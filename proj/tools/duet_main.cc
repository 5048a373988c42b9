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

// duet: self-play, dataset replay, export and the game server.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "duet/agents.h"
#include "duet/classifier.h"
#include "duet/encoding.h"
#include "duet/error.h"
#include "duet/eval.h"
#include "duet/metrics.h"
#include "duet/records.h"
#include "duet/report.h"
#include "duet/server/server.h"
#include "duet/simulate.h"
#include "duet/vectors.h"
#include "duet/word_bank.h"

namespace {

using namespace duet;

struct SimulateArgs {
  std::size_t games = 100;
  std::uint64_t seed = 1;
  std::string agent_a = "random";
  std::string agent_b = "random";
  int turn_cap = kDefaultTurnCap;
  bool strict = false;
  std::size_t threads = 1;
  std::size_t pool = 40;
  std::string vectors;
  std::size_t fixture_dim = 0;
  std::string ablation = "NONE";
  std::string normalizer;
  std::string out;
  bool json = false;
};

struct ReplayArgs {
  std::string archive;
  std::vector<std::string> ablations = {"NONE"};
  std::vector<std::string> predictors = {"random", "oracle"};
  int runs = 1;
  std::uint64_t seed = 0;
  std::string vectors;
  std::string endpoint;
  int budget_ms = 2000;
  std::string format = "text";
  bool grid = false;
};

struct ExportArgs {
  std::string archive;
  std::vector<std::string> tasks;
  std::string ablation = "NONE";
  std::uint64_t seed = 0;
  std::string out = "export";
  std::string unselected = "own";
  bool raw = false;
};

struct TrainArgs {
  std::string archive;
  std::string ablation = "NONE";
  std::uint64_t seed = 0;
  TrainConfig config;
  bool grid = false;
  std::string format = "text";
};

struct ServeArgs {
  server::ServerOptions options;
  std::string static_dir;
  std::string allowlist;
  int idle_seconds = 300;
  std::uint64_t seed = 0;
  bool strict = false;
  std::string normalizer;
};

struct VectorArgs {
  std::size_t dim = 32;
  std::uint64_t seed = 7;
  double noise = 0.35;
  std::size_t distractors = 100;
  std::string words;
  std::string out = "fixture.vec";
};

void RequireFile(const std::string& path, const char* what) {
  if (!std::filesystem::exists(path)) throw IoError(std::string(what) + " not found: " + path);
}

std::array<int, 3> kRatios = kDefaultSplitRatios;

void AddRatios(CLI::App* cmd) {
  cmd->add_option("--ratios", kRatios, "train/val/test split ratios")->expected(3);
}

std::shared_ptr<const VectorStore> LoadStore(const std::string& path) {
  if (path.empty()) return nullptr;
  RequireFile(path, "vectors");
  return std::make_shared<const VectorStore>(LoadVectors(path));
}

void PrintTables(const std::vector<ReportTable>& tables, const std::string& format) {
  if (format == "json") {
    std::cout << ToJson(tables).dump(2) << "\n";
  } else if (format == "tsv") {
    for (const auto& t : tables) std::cout << FormatTsv(t) << "\n";
  } else {
    std::cout << FormatText(tables);
  }
}

int RunSimulate(const SimulateArgs& a) {
  SimulateOptions opt;
  opt.games = a.games;
  opt.seed = a.seed;
  opt.agents = {AgentSpec::Parse(a.agent_a), AgentSpec::Parse(a.agent_b)};
  opt.config.turn_cap = a.turn_cap;
  opt.config.clue_rules.strict = a.strict;
  opt.threads = a.threads;
  opt.pool_size = a.pool;
  opt.external_ablation = ParseAblation(a.ablation);

  std::shared_ptr<const VectorStore> store = LoadStore(a.vectors);
  if (!store && a.fixture_dim > 0)
    store = std::make_shared<const VectorStore>(
        MakeFixtureVectors(CanonicalWordList(), a.fixture_dim, ForkSeed(a.seed, "vectors")).store);
  for (const auto& spec : opt.agents)
    if (spec.kind == "vector" && !store)
      throw ValidationError("vector agents need --vectors or --fixture-dim");

  std::unique_ptr<Normalizer> normalizer;
  if (!a.normalizer.empty())
    normalizer = std::make_unique<ExternalNormalizer>(Endpoint::Parse(a.normalizer),
                                                      std::chrono::milliseconds(2000));
  SimulationResult result = Simulate(opt, store, normalizer.get());
  for (const auto& r : result.records) ValidateRecord(r);
  if (!a.out.empty()) WriteArchive(a.out, result.records);

  DatasetStats stats = ComputeStats(result.records);
  if (a.json) {
    Json j;
    j["seed"] = a.seed;
    j["games"] = stats.games;
    j["turns"] = stats.turns;
    j["wins"] = stats.wins;
    j["losses"] = stats.losses;
    j["avg_turns"] = stats.AvgTurns();
    j["avg_targets_per_turn"] = stats.AvgTargetsPerTurn();
    j["fallbacks"] = result.log.fallbacks;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "seed=" << a.seed << " " << FormatStats(stats);
    if (result.log.fallbacks) std::cout << " fallbacks=" << result.log.fallbacks;
    std::cout << "\n";
  }
  return kExitOk;
}

int RunStats(const std::string& archive, bool json) {
  RequireFile(archive, "archive");
  auto records = ReadArchive(archive);
  DatasetStats s = ComputeStats(records);
  if (json) {
    Json j;
    j["games"] = s.games;
    j["turns"] = s.turns;
    j["targets"] = s.targets;
    j["wins"] = s.wins;
    j["losses"] = s.losses;
    j["avg_turns"] = s.AvgTurns();
    j["avg_targets_per_turn"] = s.AvgTargetsPerTurn();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << FormatStats(s) << "\n";
  }
  return kExitOk;
}

int RunReplayEval(const ReplayArgs& a) {
  RequireFile(a.archive, "archive");
  auto records = ReadArchive(a.archive);
  ReplayEvalOptions opt;
  opt.ablations.clear();
  for (const auto& s : a.ablations) opt.ablations.push_back(ParseAblation(s));
  opt.predictors = a.predictors;
  opt.runs = a.runs;
  opt.seed = a.seed;
  opt.ratios = kRatios;
  if (!a.endpoint.empty()) opt.endpoint = Endpoint::Parse(a.endpoint);
  opt.budget = std::chrono::milliseconds(a.budget_ms);
  auto store = LoadStore(a.vectors);
  auto tables = ReplayEval(records, opt, store);
  if (a.grid) tables.push_back(SuccessGrid(records, opt.train, a.seed, kRatios));
  PrintTables(tables, a.format);
  return kExitOk;
}

int RunExport(const ExportArgs& a) {
  RequireFile(a.archive, "archive");
  auto records = ReadArchive(a.archive);
  std::vector<Task> tasks;
  if (a.tasks.empty()) {
    tasks.assign(kAllTasks.begin(), kAllTasks.end());
  } else {
    for (const auto& t : a.tasks) tasks.push_back(ParseTask(t));
  }
  EncodeOptions enc;
  enc.ablation = ParseAblation(a.ablation);
  enc.use_normalized = !a.raw;
  enc.unselected = a.unselected == "all" ? UnselectedPolicy::kAllNeutralMarks
                                         : UnselectedPolicy::kOwnNeutralMarks;
  std::filesystem::create_directories(a.out);
  auto counts = ExportSplits(records, tasks, enc, a.seed, kRatios, a.out);
  std::cout << "seed=" << a.seed << " ablation=" << ToString(enc.ablation) << "\n";
  for (const auto& c : counts)
    std::cout << ToString(c.task) << " train=" << c.per_part[0] << " val=" << c.per_part[1]
              << " test=" << c.per_part[2] << " total=" << c.total() << "\n";
  return kExitOk;
}

int RunVerifySplits(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir);
  auto problems = VerifySplits(dir);
  for (const auto& p : problems) std::cout << p << "\n";
  if (!problems.empty()) {
    std::cout << problems.size() << " shared clue-giver id(s)\n";
    return kExitValidation;
  }
  std::cout << "ok: no clue-giver id appears in more than one split\n";
  return kExitOk;
}

int RunTrain(const TrainArgs& a) {
  RequireFile(a.archive, "archive");
  auto records = ReadArchive(a.archive);
  if (a.grid) {
    PrintTables({SuccessGrid(records, a.config, a.seed, kRatios)}, a.format);
    return kExitOk;
  }
  Ablation ablation = ParseAblation(a.ablation);
  auto split = SplitByClueGiver(records, kRatios, a.seed);
  EncodeOptions enc;
  enc.ablation = ablation;
  auto train = EncodeRecords(records, split.train.turns, Task::kSuccessCls, enc);
  auto test = EncodeRecords(records, split.test.turns, Task::kSuccessCls, enc);
  auto train_data = FeaturizeAll(train, ablation, a.config.feature_seed);
  auto model = TrainSuccessModel(train_data.xs, train_data.labels, a.config, ablation);
  auto f1 = [&](const SuccessData& d) {
    std::vector<bool> pred;
    for (const auto& x : d.xs) pred.push_back(model.PredictLabel(x));
    return MacroF1(pred, d.labels);
  };
  auto test_data = FeaturizeAll(test, ablation, a.config.feature_seed);
  std::cout << "seed=" << a.seed << " ablation=" << ToString(ablation)
            << " train_n=" << train_data.xs.size() << " test_n=" << test_data.xs.size() << "\n";
  std::cout << "train_macro_f1=" << f1(train_data);
  if (!test_data.xs.empty()) std::cout << " test_macro_f1=" << f1(test_data);
  std::cout << " loss=" << Loss(model, train_data.xs, train_data.labels, a.config.l2) << "\n";
  return kExitOk;
}

int RunServe(ServeArgs& a, bool seed_given) {
  auto& o = a.options;
  if (!a.static_dir.empty()) {
    if (!std::filesystem::is_directory(a.static_dir))
      throw IoError("static dir not found: " + a.static_dir);
    o.static_dir = a.static_dir;
  }
  if (!a.allowlist.empty()) {
    RequireFile(a.allowlist, "allowlist");
    o.allowlist = a.allowlist;
  }
  o.idle_timeout = std::chrono::seconds(a.idle_seconds);
  if (seed_given) o.seed = a.seed;
  o.game.clue_rules.strict = a.strict;
  if (!a.normalizer.empty()) o.normalizer = Endpoint::Parse(a.normalizer);
  server::Server srv(o);
  srv.InstallSignalHandlers();
  std::cout << "listening on " << o.host << ":" << srv.port() << " archive=" << o.archive.string()
            << std::endl;
  srv.Run();
  std::cout << "stopped; archived " << srv.Health()["archived"].get<std::size_t>() << " game(s)"
            << std::endl;
  return kExitOk;
}

int RunMakeVectors(const VectorArgs& a) {
  WordList words = CanonicalWordList();
  if (!a.words.empty()) {
    RequireFile(a.words, "word list");
    words = LoadWordList(a.words);
  }
  auto fixture = MakeFixtureVectors(words, a.dim, a.seed, a.noise, a.distractors);
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw IoError("cannot write " + a.out);
  out << FormatVectors(fixture.store);
  std::cout << "wrote " << fixture.store.size() << " vectors of dim " << a.dim << " to " << a.out
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Codenames Duet laboratory"};
  app.set_config("--config", "", "flat key=value config file; flags override it");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "self-play games between agents");
  c_sim->add_option("-n,--games", sim.games, "number of games")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "root seed")->capture_default_str();
  c_sim->add_option("--agent-a", sim.agent_a,
                    "player 0: random | vector[:k[:min|mean]] | external:host:port")
      ->capture_default_str();
  c_sim->add_option("--agent-b", sim.agent_b, "player 1")->capture_default_str();
  c_sim->add_option("--turn-cap", sim.turn_cap)->capture_default_str();
  c_sim->add_flag("--strict-clues", sim.strict, "also forbid prefix/suffix clues");
  c_sim->add_option("-j,--threads", sim.threads)->capture_default_str();
  c_sim->add_option("--pool-size", sim.pool, "synthetic player pool")->capture_default_str();
  c_sim->add_option("--vectors", sim.vectors, "word vectors (text format)");
  c_sim->add_option("--fixture-dim", sim.fixture_dim, "use generated fixture vectors of this dim");
  c_sim->add_option("--ablation", sim.ablation, "prefix sent to external agents")
      ->capture_default_str();
  c_sim->add_option("--normalizer", sim.normalizer, "external rationale normalizer host:port");
  c_sim->add_option("-o,--out", sim.out, "archive to write");
  c_sim->add_flag("--json", sim.json, "summary as JSON");

  std::string stats_archive;
  bool stats_json = false;
  auto* c_stats = app.add_subcommand("stats", "dataset statistics of an archive");
  c_stats->add_option("archive", stats_archive)->required();
  c_stats->add_flag("--json", stats_json);

  ReplayArgs rep;
  auto* c_rep = app.add_subcommand("replay-eval", "score predictors on an archive");
  c_rep->add_option("archive", rep.archive)->required();
  c_rep->add_option("--ablation", rep.ablations, "NONE DEMO_REQ DEMO_ALL PERSONALITY MORALITY ALL")
      ->capture_default_str();
  c_rep->add_option("--predictor", rep.predictors, "random oracle vector linear external")
      ->capture_default_str();
  c_rep->add_option("--runs", rep.runs)->capture_default_str();
  c_rep->add_option("--seed", rep.seed)->capture_default_str();
  c_rep->add_option("--vectors", rep.vectors);
  c_rep->add_option("--endpoint", rep.endpoint, "external predictor host:port");
  c_rep->add_option("--budget-ms", rep.budget_ms)->capture_default_str();
  c_rep->add_option("--format", rep.format)->check(CLI::IsMember({"text", "tsv", "json"}));
  c_rep->add_flag("--grid", rep.grid, "append the six-prior success grid");
  AddRatios(c_rep);

  ExportArgs exp;
  auto* c_exp = app.add_subcommand("export", "write clue-giver-disjoint encoded splits");
  c_exp->add_option("archive", exp.archive)->required();
  c_exp->add_option("--task", exp.tasks, "tasks to export (default all)");
  c_exp->add_option("--ablation", exp.ablation)->capture_default_str();
  c_exp->add_option("--seed", exp.seed)->capture_default_str();
  c_exp->add_option("-o,--out", exp.out, "output directory")->capture_default_str();
  c_exp->add_option("--unselected", exp.unselected)->check(CLI::IsMember({"own", "all"}));
  c_exp->add_flag("--raw-rationales", exp.raw, "ignore normalized rationales");
  AddRatios(c_exp);

  std::string verify_dir;
  auto* c_ver = app.add_subcommand("verify-splits", "check exported splits for shared givers");
  c_ver->add_option("dir", verify_dir)->required();

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "train the pragmatic-success classifier");
  c_tr->add_option("archive", tr.archive)->required();
  c_tr->add_option("--ablation", tr.ablation)->capture_default_str();
  c_tr->add_option("--seed", tr.seed)->capture_default_str();
  c_tr->add_option("--lr", tr.config.learning_rate)->capture_default_str();
  c_tr->add_option("--epochs", tr.config.epochs)->capture_default_str();
  c_tr->add_option("--l2", tr.config.l2)->capture_default_str();
  c_tr->add_option("--batch", tr.config.batch_size)->capture_default_str();
  c_tr->add_flag("--grid", tr.grid, "train every prior and print the grid");
  c_tr->add_option("--format", tr.format)->check(CLI::IsMember({"text", "tsv", "json"}));
  AddRatios(c_tr);

  ServeArgs srv;
  auto* c_srv = app.add_subcommand("serve", "run the two-player game server");
  c_srv->add_option("--host", srv.options.host)->capture_default_str();
  c_srv->add_option("--port", srv.options.port)->envname("DUET_PORT")->capture_default_str();
  c_srv->add_option("--archive", srv.options.archive)
      ->envname("DUET_ARCHIVE")
      ->capture_default_str();
  c_srv->add_option("--static-dir", srv.static_dir, "web client assets");
  c_srv->add_option("--allowlist", srv.allowlist, "tokens allowed to join, one per line");
  c_srv->add_option("--idle-timeout", srv.idle_seconds, "seconds")->capture_default_str();
  auto* srv_seed = c_srv->add_option("--seed", srv.seed, "board seed root (random if unset)");
  c_srv->add_option("--turn-cap", srv.options.game.turn_cap)->capture_default_str();
  c_srv->add_flag("--strict-clues", srv.strict);
  c_srv->add_option("--normalizer", srv.normalizer, "external rationale normalizer host:port");

  VectorArgs vec;
  auto* c_vec = app.add_subcommand("make-vectors", "write a fixture embedding file");
  c_vec->add_option("--dim", vec.dim)->capture_default_str();
  c_vec->add_option("--seed", vec.seed)->capture_default_str();
  c_vec->add_option("--noise", vec.noise)->capture_default_str();
  c_vec->add_option("--distractors", vec.distractors)->capture_default_str();
  c_vec->add_option("--words", vec.words, "word list (default canonical)");
  c_vec->add_option("-o,--out", vec.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*c_sim) return RunSimulate(sim);
    if (*c_stats) return RunStats(stats_archive, stats_json);
    if (*c_rep) return RunReplayEval(rep);
    if (*c_exp) return RunExport(exp);
    if (*c_ver) return RunVerifySplits(verify_dir);
    if (*c_tr) return RunTrain(tr);
    if (*c_srv) return RunServe(srv, srv_seed->count() > 0);
    if (*c_vec) return RunMakeVectors(vec);
  } catch (const SchemaVersionError& e) {
    std::cerr << "error: " << e.what() << " (this build reads schema_version " << kSchemaVersion
              << ")\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
