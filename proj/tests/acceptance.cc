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

// Prints one PASS, FAIL or SKIP line per acceptance criterion and exits
// non-zero when any criterion fails.

#include <signal.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "duet/agents.h"
#include "duet/classifier.h"
#include "duet/encoding.h"
#include "duet/eval.h"
#include "duet/game.h"
#include "duet/metrics.h"
#include "duet/records.h"
#include "duet/rng.h"
#include "duet/server/server.h"
#include "duet/simulate.h"
#include "duet/word_bank.h"
#include "server_harness.h"
#include "test_util.h"

namespace duet {
namespace {

using namespace std::chrono_literals;

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kPass;
  std::string detail;
};

// Collects failed checks of one criterion.
class Checks {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void Note(const std::string& s) { notes_.push_back(s); }
  Outcome Result() const {
    Outcome o;
    o.status = failed_ ? Outcome::kFail : Outcome::kPass;
    std::ostringstream d;
    const auto& items = failed_ ? failures_ : notes_;
    for (std::size_t i = 0; i < items.size(); ++i) d << (i ? "; " : "") << items[i];
    if (failed_ > failures_.size()) d << "; +" << failed_ - failures_.size() << " more";
    o.detail = d.str();
    return o;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t failed_ = 0;
};

std::string Fmt(double v, int decimals = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(decimals);
  s << v;
  return s.str();
}

std::size_t Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome CanonicalWords() {
  Checks c;
  const auto& list = CanonicalWordList();
  c.Expect(list.size() == 100, "list has " + std::to_string(list.size()) + " words");
  c.Expect(list.words() == testing::PublishedWordList(), "shipped list differs from published");
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    c.Expect(FilterCandidates(testing::SyntheticLexicon(seed), 100) == list,
             "filter on shuffled lexicon " + std::to_string(seed) + " differs");
  c.Note("100 words, filter reproduces list on 5 shuffled lexicons");
  return c.Result();
}

Outcome EngineInvariants() {
  Checks c;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    GameState s = NewGame(SampleBoard(CanonicalWordList(), seed), seed);
    for (PlayerId p = 0; p < kNumPlayers; ++p) {
      const KeyCard& k = s.key_card(p);
      c.Expect(k.WordsWith(Role::kGoal).size() == 9 && k.WordsWith(Role::kAvoid).size() == 3 &&
                   k.WordsWith(Role::kNeutral).size() == 13,
               "seed " + std::to_string(seed) + " key card counts");
    }
  }
  SimulateOptions o;
  o.games = 1000;
  o.seed = 2024;
  o.threads = Threads();
  auto result = Simulate(o);
  o.threads = 1;
  auto serial = Simulate(o);
  std::size_t wins = 0;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const GameRecord& r = result.records[i];
    GameState a = ReplayRecord(r);
    GameState b = ReplayRecord(r);
    c.Expect(a == b, r.game_id + " replay not deterministic");
    c.Expect(a.IsTerminal(), r.game_id + " did not terminate");
    c.Expect(a.completed_turns() <= kDefaultTurnCap, r.game_id + " exceeded the turn cap");
    GameRecord again = MakeRecord(r.game_id, r.players, r.profiles, a, r.termination);
    c.Expect(again.turns == r.turns && again.outcome == r.outcome, r.game_id + " replay differs");
    c.Expect(SerializeGame(r) == SerializeGame(serial.records[i]),
             r.game_id + " differs between thread counts");
    wins += r.outcome == GameOutcome::kWin;
  }
  c.Expect(result.records.size() == 1000, "expected 1000 games");
  c.Note("20000 key cards valid; 1000 self-play games terminated and replayed (" +
         std::to_string(wins) + " wins)");
  return c.Result();
}

Outcome GoldenEncodings() {
  Checks c;
  std::size_t files = 0;
  for (Task t : kAllTasks)
    for (Ablation a : {Ablation::kNone, Ablation::kDemoReq, Ablation::kAll}) {
      auto path = testing::GoldenPath(t, a);
      std::string golden;
      try {
        golden = testing::ReadFile(path);
      } catch (const std::exception&) {
      }
      c.Expect(!golden.empty() && testing::EncodeFixtureLines(t, a) == golden,
               path.filename().string() + " mismatch");
      ++files;
    }
  // The guesser left big5, political and six demo_all items unanswered.
  std::vector<GameRecord> rs = {testing::FixtureRecord()};
  EncodeOptions opt;
  opt.ablation = Ablation::kAll;
  auto ex = EncodeAll(rs, Task::kClueGen, opt);
  DecodedInput d = DecodeInput(Task::kClueGen, ex[0].input, Ablation::kAll);
  auto nones = [](const auto& attrs) {
    return std::count_if(attrs.begin(), attrs.end(),
                         [](const auto& kv) { return kv.second == tok::kNoneValue; });
  };
  c.Expect(d.giver_attributes.size() == 32 && d.guesser_attributes.size() == 32,
           "ALL prefix should carry 32 attributes per player");
  c.Expect(nones(d.giver_attributes) == 0, "giver prefix has None values");
  c.Expect(nones(d.guesser_attributes) == 17,
           "guesser prefix has " + std::to_string(nones(d.guesser_attributes)) + " None values");
  c.Note(std::to_string(files) + " golden files byte-exact; 17 unanswered items render None");
  return c.Result();
}

Outcome DatasetReplay() {
  const char* env = std::getenv("DUET_DATASET");
  if (!env || !*env) return {Outcome::kSkip, "DUET_DATASET not set; released dataset absent"};
  Checks c;
  auto records = ReadArchive(env);
  DatasetStats s = ComputeStats(records);
  c.Expect(s.games == 794, "games=" + std::to_string(s.games));
  c.Expect(s.turns == 7703, "turns=" + std::to_string(s.turns));
  c.Expect(s.wins == 199, "wins=" + std::to_string(s.wins));
  c.Expect(s.losses == 595, "losses=" + std::to_string(s.losses));
  c.Expect(std::fabs(s.AvgTurns() - 9.7) <= 0.05, "avg_turns=" + Fmt(s.AvgTurns()));
  c.Expect(std::fabs(s.AvgTargetsPerTurn() - 1.24) <= 0.01,
           "avg_targets_per_turn=" + Fmt(s.AvgTargetsPerTurn()));
  testing::TempDir dir;
  std::vector<Task> tasks(kAllTasks.begin(), kAllTasks.end());
  auto counts = ExportSplits(records, tasks, {}, 0, kDefaultSplitRatios, dir.path());
  const std::map<Task, std::size_t> expected = {
      {Task::kClueGen, 7703},     {Task::kClueFraming, 9519},  {Task::kGuessSelection, 7703},
      {Task::kGuessFraming, 9382}, {Task::kSuccessCls, 9519}};
  for (const auto& ct : counts) {
    auto it = expected.find(ct.task);
    if (it == expected.end()) {
      c.Note(std::string(ToString(ct.task)) + "=" + std::to_string(ct.total()) + " (not compared)");
      continue;
    }
    c.Expect(ct.total() == it->second,
             std::string(ToString(ct.task)) + "=" + std::to_string(ct.total()));
  }
  auto problems = VerifySplits(dir.path());
  c.Expect(problems.empty(), std::to_string(problems.size()) + " shared clue-giver ids");
  c.Note("794/7703/199/595; export counts match; splits disjoint");
  return c.Result();
}

std::vector<std::string> RandomTokens(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "luck", "the"};
  std::vector<std::string> out(rng.Below(max_len + 1));
  for (auto& t : out) t = vocab[rng.Below(vocab.size())];
  return out;
}

Outcome MetricOracles() {
  Checks c;
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    auto a = RandomTokens(rng, 12), b = RandomTokens(rng, 12);
    for (int n : {1, 2})
      c.Expect(RougeN(a, b, n) == testing::BruteRougeN(a, b, n),
               "ROUGE-" + std::to_string(n) + " pair " + std::to_string(i));
    double lcs = static_cast<double>(testing::QuadraticLcs(a, b));
    double expect;
    if (a.empty() || b.empty()) {
      expect = a == b ? 1.0 : 0.0;
    } else if (lcs == 0) {
      expect = 0.0;
    } else {
      double p = lcs / double(a.size()), r = lcs / double(b.size());
      expect = 2 * p * r / (p + r);
    }
    c.Expect(std::fabs(RougeL(a, b) - expect) <= 1e-12, "ROUGE-L pair " + std::to_string(i));
  }
  const std::vector<std::tuple<std::string, std::string, double>> bleu = {
      {"the cat sat on the mat", "the cat sat on the mat", 1.0},
      {"the cat", "the cat sat on the mat", std::exp(-2.0)},
      {"the the the the", "the cat", std::pow(1.0 / 96.0, 0.25)},
      {"a b c d", "a b x d e", 0.5 * std::exp(-0.25)},
      {"x y", "a b", 0.0}};
  for (const auto& [cand, ref, want] : bleu)
    c.Expect(std::fabs(Bleu(cand, ref) - want) <= 1e-9, "BLEU '" + cand + "'");
  Rng coin(5);
  std::vector<bool> pred, gold;
  for (int i = 0; i < 10000; ++i) {
    pred.push_back(coin.Bernoulli(0.5));
    gold.push_back(i % 2 == 0);
  }
  double f1 = MacroF1(pred, gold);
  c.Expect(std::fabs(f1 - 0.5) <= 0.02, "random macro F1 " + Fmt(f1));
  c.Note("ROUGE-1/2/L exact on 200 pairs; 5 BLEU fixtures; random macro F1 " + Fmt(f1));
  return c.Result();
}

Outcome ClassifierNumerics() {
  Checks c;
  Rng rng(5);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const std::uint32_t dims = 40;
    std::vector<SparseVector> xs;
    std::vector<bool> ys;
    for (int i = 0; i < 8; ++i) {
      xs.push_back(testing::RandomSparse(rng, 1 + rng.Below(6), dims));
      ys.push_back(rng.Bernoulli(0.5));
    }
    SuccessModel m;
    for (std::uint32_t d = 0; d < dims; ++d) m.weights[d] = rng.Uniform01() * 2 - 1;
    m.bias = rng.Uniform01() - 0.5;
    const double l2 = 0.01 * rng.Uniform01();
    Gradient g = LossGradient(m, xs, ys, l2);
    const double h = 1e-5;
    for (std::uint32_t d = 0; d <= dims; ++d) {
      SuccessModel plus = m, minus = m;
      double& up = d == dims ? plus.bias : plus.weights[d];
      double& down = d == dims ? minus.bias : minus.weights[d];
      up += h;
      down -= h;
      double numeric = (Loss(plus, xs, ys, l2) - Loss(minus, xs, ys, l2)) / (2 * h);
      double analytic = d == dims ? g.bias : g.weights[d];
      worst = std::max(worst, std::fabs(analytic - numeric) /
                                  std::max(1e-3, std::fabs(analytic) + std::fabs(numeric)));
    }
  }
  c.Expect(worst < 1e-6, "gradient relative error " + std::to_string(worst));

  auto make = [&](std::size_t n, std::vector<SparseVector>& xs, std::vector<bool>& ys) {
    for (std::size_t i = 0; i < n; ++i) {
      bool y = rng.Bernoulli(0.5);
      xs.push_back(testing::PooledLabelExample(rng, y));
      ys.push_back(y);
    }
  };
  std::vector<SparseVector> train, test;
  std::vector<bool> train_y, test_y;
  make(1000, train, train_y);
  make(1000, test, test_y);
  SuccessModel sep = TrainSuccessModel(train, train_y, TrainConfig{});
  std::size_t correct = 0;
  for (std::size_t i = 0; i < train.size(); ++i) correct += sep.PredictLabel(train[i]) == train_y[i];
  const double acc = double(correct) / double(train.size());
  c.Expect(acc >= 0.99, "separable train accuracy " + Fmt(acc));

  std::vector<bool> shuffled = train_y;
  for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
    std::size_t j = rng.Below(i + 1);
    bool t = shuffled[i];
    shuffled[i] = shuffled[j];
    shuffled[j] = t;
  }
  SuccessModel ctl = TrainSuccessModel(train, shuffled, TrainConfig{});
  std::vector<bool> pred;
  for (const auto& x : test) pred.push_back(ctl.PredictLabel(x));
  const double f1 = MacroF1(pred, test_y);
  c.Expect(std::fabs(f1 - 0.5) <= 0.05, "label-shuffle macro F1 " + Fmt(f1));

  auto store = std::make_shared<const VectorStore>(
      MakeFixtureVectors(CanonicalWordList(), 24, 9).store);
  SimulateOptions o;
  o.games = 300;
  o.seed = 31;
  o.threads = Threads();
  o.agents = {AgentSpec::Parse("vector:2"), AgentSpec::Parse("random")};
  auto records = Simulate(o, store).records;
  ReportTable grid = SuccessGrid(records, TrainConfig{});
  const std::vector<std::string> rows = {"None", "Demo_Req", "Demo_All", "Personality",
                                         "Morality", "All"};
  c.Expect(grid.rows.size() == rows.size(), "grid has " + std::to_string(grid.rows.size()) + " rows");
  c.Expect(grid.value_columns == std::vector<std::string>{"Random", "Linear"}, "grid columns");
  for (std::size_t i = 0; i < std::min(rows.size(), grid.rows.size()); ++i) {
    c.Expect(grid.rows[i].labels == std::vector<std::string>{rows[i]}, "grid row " + rows[i]);
    c.Expect(grid.rows[i].values[1].has_value(), "no Linear score for " + rows[i]);
    c.Expect(grid.rows[i].values[0].has_value() == (i == 0), "Random cell for " + rows[i]);
  }
  c.Note("max gradient error " + Fmt(worst * 1e9, 3) + "e-9; separable accuracy " + Fmt(acc) +
         "; shuffled macro F1 " + Fmt(f1) + "; 6x2 grid");
  return c.Result();
}

// P(X >= k) for X ~ Binomial(n, 1/2).
double SignTestP(std::size_t k, std::size_t n) {
  double p = 0;
  for (std::size_t i = k; i <= n; ++i)
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                  double(n) * std::log(2.0));
  return p;
}

Outcome VectorAgentSanity() {
  Checks c;
  auto store = std::make_shared<const VectorStore>(
      MakeFixtureVectors(CanonicalWordList(), 32, 7).store);
  Board board = SampleBoard(CanonicalWordList(), 3);
  for (const auto& w : board.words) {
    auto ranked = RankWords(board.words, w, *store);
    c.Expect(ranked.front().first == w && std::fabs(ranked.front().second - 1.0) <= 1e-12,
             "on-board clue '" + w + "' not ranked first with cosine 1");
  }
  SimulateOptions o;
  o.games = 500;
  o.seed = 99;
  o.threads = Threads();
  o.agents = {AgentSpec::Parse("vector"), AgentSpec::Parse("vector")};
  auto vec = Simulate(o, store).records;
  o.agents = {AgentSpec::Parse("random"), AgentSpec::Parse("random")};
  auto rnd = Simulate(o, store).records;
  std::size_t vw = 0, rw = 0, k = 0, n = 0;
  for (std::size_t i = 0; i < vec.size(); ++i) {
    bool a = vec[i].outcome == GameOutcome::kWin, b = rnd[i].outcome == GameOutcome::kWin;
    vw += a;
    rw += b;
    if (a != b) {
      ++n;
      k += a;
    }
  }
  const double p = SignTestP(k, n);
  c.Expect(vw > rw, "vector wins " + std::to_string(vw) + " vs random " + std::to_string(rw));
  c.Expect(p < 0.01, "sign test p=" + std::to_string(p));
  std::ostringstream note;
  note << "vector " << vw << "/500 vs random " << rw << "/500 wins, one-sided p=" << p;
  c.Note(note.str());
  return c.Result();
}

Outcome ServerRedaction() {
  Checks c;
  testing::TempDir dir;
  {
    server::ServerOptions opts;
    opts.port = 0;
    opts.archive = dir / "games.jsonl";
    opts.seed = 4;
    server::Server srv(opts);
    std::thread loop([&] { srv.Run(); });
    std::size_t leaks = 0, games = 0;
    std::vector<testing::GameTranscript> transcripts;
    {
      testing::RecordingProxy proxy({"127.0.0.1", srv.port()});
      const testing::Script scripts[] = {testing::Script::kWin, testing::Script::kStall,
                                         testing::Script::kAvoid};
      for (int g = 0; g < 50; ++g) {
        auto t = testing::PlayFramedGame(proxy.endpoint(), "acc" + std::to_string(g), scripts[g % 3]);
        games += !t.outcome.empty();
        transcripts.push_back(std::move(t));
      }
      std::map<std::string, std::vector<server::SessionMessage>> wire;
      for (auto& m : testing::DecodeStreams(proxy.Downstream())) wire[m.token].push_back(m);
      for (const auto& t : transcripts)
        for (PlayerId p = 0; p < kNumPlayers; ++p)
          for (const auto& leak : testing::FindLeaks(wire[t.tokens[p]], t.authored[p])) {
            ++leaks;
            c.Expect(false, t.tokens[p] + " " + leak);
          }
    }
    srv.Stop();
    loop.join();
    c.Expect(games == 50, std::to_string(games) + " of 50 games finished");
    c.Note("50 games via proxy, " + std::to_string(leaks) + " leaks");
  }
  const std::string archive = (dir / "crash.jsonl").string();
  std::size_t finished = 0;
  for (int life = 0; life < 3; ++life) {
    testing::ServerProcess srv({"--port", "0", "--archive", archive, "--seed",
                                std::to_string(50 + life)});
    for (int g = 0; g < 4; ++g) {
      auto t = testing::PlayFramedGame(srv.endpoint(),
                                       "c" + std::to_string(life) + "g" + std::to_string(g),
                                       g % 2 ? testing::Script::kAvoid : testing::Script::kWin);
      finished += !t.outcome.empty();
    }
    testing::PlayFramedGame(srv.endpoint(), "c" + std::to_string(life) + "open",
                            testing::Script::kStall, 5);
    srv.Signal(SIGKILL);
    srv.Wait();
    if (life == 1) testing::WriteFile(archive, testing::ReadFile(archive) + "{\"schema_version\":1,\"ga");
  }
  {
    testing::ServerProcess reopen({"--port", "0", "--archive", archive});
    reopen.Signal(SIGTERM);
    reopen.Wait();
  }
  std::vector<GameRecord> records;
  try {
    records = ReadArchive(archive);
  } catch (const std::exception& e) {
    c.Expect(false, std::string("archive unreadable: ") + e.what());
  }
  for (const auto& r : records) {
    try {
      ReplayRecord(r);
    } catch (const std::exception& e) {
      c.Expect(false, r.game_id + " does not replay: " + e.what());
    }
  }
  c.Expect(!records.empty() && records.size() <= finished, "archive holds " +
                                                               std::to_string(records.size()) +
                                                               " records");
  c.Note("3 kills + torn tail: " + std::to_string(records.size()) + "/" +
         std::to_string(finished) + " finished games archived, all replay");
  return c.Result();
}

}  // namespace
}  // namespace duet

int main() {
  using duet::Outcome;
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"canonical word list", 1, duet::CanonicalWords},
      {"engine invariants", 30, duet::EngineInvariants},
      {"golden encodings", 1, duet::GoldenEncodings},
      {"dataset replay", 60, duet::DatasetReplay},
      {"metric oracles", 10, duet::MetricOracles},
      {"classifier numerics", 60, duet::ClassifierNumerics},
      {"vector agent", 120, duet::VectorAgentSanity},
      {"server redaction", 120, duet::ServerRedaction},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.status == Outcome::kPass && secs > c.budget_s) {
      o.status = Outcome::kFail;
      o.detail += "; over the " + std::to_string(int(c.budget_s)) + " s budget";
    }
    const char* tag = o.status == Outcome::kPass ? "PASS" : o.status == Outcome::kSkip ? "SKIP" : "FAIL";
    failed += o.status == Outcome::kFail;
    std::printf("%s %s (%.2f s): %s\n", tag, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
