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

#include "test_util.h"

#include <unistd.h>

#include <fstream>
#include <map>
#include <sstream>

#include "duet/rng.h"
#include "duet/simulate.h"
#include "duet/word_bank.h"

#ifndef DUET_SOURCE_DIR
#define DUET_SOURCE_DIR "."
#endif

namespace duet::testing {
namespace {

std::vector<Role> Roles(std::initializer_list<int> goal, std::initializer_list<int> avoid) {
  std::vector<Role> roles(kBoardSize, Role::kNeutral);
  for (int i : goal) roles[i] = Role::kGoal;
  for (int i : avoid) roles[i] = Role::kAvoid;
  return roles;
}

}  // namespace

SocioProfile FixtureGiverProfile() {
  SocioProfile p;
  p.demo_req = DemoReq{34, "United States", true};
  DemoAll a;
  a.gender = "Woman";
  a.age_range = "30-45 years old";
  a.race = "White / Caucasian";
  a.continent = "North America";
  a.education = "Doctorate Degree";
  a.marital_status = "Married or in a domestic partnership";
  a.native_language = "English";
  a.religion = "Catholicism/Christianity";
  p.demo_all = a;
  p.big5 = std::array<int, kBig5Items>{1, -1, 2, 0, -2, 1, 0, 2, -1, 1};
  p.mfq = std::array<int, kMfqItems>{4, 5, 2, 1, 3, 0, 5, 4, 3, 2};
  p.political = Political::kLiberal;
  return p;
}

SocioProfile FixtureGuesserProfile() {
  SocioProfile p;
  p.demo_req = DemoReq{27, "India", false};
  DemoAll a;
  a.gender = "Man";
  a.education = "Master's Degree";
  p.demo_all = a;
  p.mfq = std::array<int, kMfqItems>{3, 3, 4, 2, 1, 1, 4, 3, 3, 1};
  return p;
}

GameRecord FixtureRecord() {
  const auto& words = CanonicalWordList().words();
  Board board;
  board.words.assign(words.begin(), words.begin() + kBoardSize);
  board.seed = 0;
  KeyCard k0(board, Roles({0, 1, 2, 3, 4, 5, 6, 7, 8}, {9, 10, 11}));
  KeyCard k1(board, Roles({8, 9, 10, 11, 12, 13, 14, 15, 16}, {0, 1, 17}));
  GameState s = NewGameWithKeys(board, k0, k1);

  s = SubmitClue(s, "fortune", {"luck", "life"},
                 {"Fortune means  LUCK", "a good life needs fortune"});
  s = SubmitGuess(s, "luck", "luck is fortune").first;
  s = SubmitGuess(s, "grace", "Grace brings fortune").first;
  s = SubmitGuess(s, "ghost", "ghost of fortune").first;  // neutral, ends the turn

  s = SubmitClue(s, "electric", {"charge"}, {"electric charge"});
  s = SubmitGuess(s, "charge", "charge is electric").first;
  s = EndTurn(s);

  s = SubmitClue(s, "spirit", {"soul"}, {"spirit means soul"});
  s = SubmitGuess(s, "soul", "soul is a spirit").first;
  s = SubmitGuess(s, "wake", "wake the spirit").first;  // neutral

  GameRecord r = MakeRecord("fixture-1", {"giver-a", "guesser-b"},
                            {FixtureGiverProfile(), FixtureGuesserProfile()}, s,
                            Termination::kAbandoned);
  IdentityNormalizer id;
  NormalizeRecord(r, id);
  return r;
}

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "duet-test-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

const std::vector<std::string>& PublishedWordList() {
  static const std::vector<std::string> words = {
    "luck",       "grace",     "soul",       "fair",     "life",      "pass",     "revolution",
    "change",     "charge",    "degree",     "force",    "code",      "genius",   "compound",
    "time",       "wake",      "plot",       "draft",    "ghost",     "play",     "part",
    "spell",      "well",      "point",      "link",     "mass",      "disease",  "sub",
    "state",      "alien",     "space",      "mine",     "ray",       "millionaire", "agent",
    "bond",       "unicorn",   "figure",     "war",      "cycle",     "boom",     "sound",
    "trip",       "centaur",   "death",      "club",     "crash",     "angel",    "cold",
    "center",     "spring",    "round",      "date",     "press",     "cast",     "day",
    "row",        "wind",      "fighter",    "embassy",  "beat",      "leprechaun", "comic",
    "pitch",      "mount",     "march",      "fall",     "undertaker", "green",   "switch",
    "strike",     "king",      "superhero",  "capital",  "slip",      "lead",     "check",
    "lap",        "mammoth",   "air",        "match",    "spy",       "roulette", "contract",
    "witch",      "stock",     "light",      "drop",     "spot",      "novel",    "vacuum",
    "cover",      "scientist", "tag",        "conductor", "field",    "racket",   "poison",
    "ninja",      "opera"};
  return words;
}

std::vector<LexiconEntry> SyntheticLexicon(std::uint64_t seed) {
  std::vector<LexiconEntry> lex;
  for (std::size_t i = 0; i < PublishedWordList().size(); ++i)
    lex.push_back({PublishedWordList()[i], 2 + int(i % 5), 1.2 + 0.02 * double(i)});
  // Abstract but monosemous, and polysemous but concrete.
  for (int i = 0; i < 150; ++i) lex.push_back({"mono" + std::string(1, 'a' + i % 26) + std::to_string(i), 1, 1.0});
  for (int i = 0; i < 150; ++i) lex.push_back({"poly" + std::string(1, 'a' + i % 26) + std::to_string(i), 4, 3.5 + 0.001 * i});
  Rng rng(seed);
  rng.Shuffle(lex);
  return lex;
}

std::filesystem::path GoldenPath(Task task, Ablation ablation) {
  std::string name = std::string(ToString(task)) + "." + std::string(ToString(ablation)) + ".jsonl";
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return SourceDir() / "tests" / "golden" / name;
}

std::string EncodeFixtureLines(Task task, Ablation ablation) {
  EncodeOptions opt;
  opt.ablation = ablation;
  std::vector<GameRecord> rs = {FixtureRecord()};
  std::ostringstream out;
  for (const auto& e : EncodeAll(rs, task, opt)) out << ToJson(e).dump() << "\n";
  return out.str();
}

std::string SecretMarker(std::size_t turn, bool guess, std::size_t index) {
  return std::string(guess ? "zqxg" : "zqxt") + std::to_string(turn) + "n" + std::to_string(index);
}

ScriptedAction NextAction(const GameState& state, Script script) {
  ScriptedAction a;
  const PlayerId giver = state.active_giver();
  const KeyCard& card = state.key_card(giver);
  const std::size_t turn = state.turns().size();
  if (state.phase() == Phase::kAwaitClue) {
    a.player = giver;
    a.kind = server::MessageKind::kSubmitClue;
    std::string target = state.UncoveredGoals(giver).front();
    std::string clue = "clue";
    for (std::size_t t = turn + 1; t > 0; t /= 26) clue.push_back(static_cast<char>('a' + t % 26));
    a.payload = {{"clue", clue},
                 {"targets", Json::array({target})},
                 {"rationales", Json::array({"because " + SecretMarker(turn, false, 0)})}};
    return a;
  }
  a.player = state.active_guesser();
  const TurnRecord& open = state.turns().back();
  if (!open.guesses.empty()) {
    a.kind = server::MessageKind::kEndTurn;
    return a;
  }
  std::string word;
  std::vector<std::string> unselected = state.Unselected(a.player);
  for (const auto& w : unselected) {
    Role r = card.RoleOf(w);
    if ((script == Script::kStall && r == Role::kNeutral) ||
        (script == Script::kAvoid && r == Role::kAvoid)) {
      word = w;
      break;
    }
  }
  if (script == Script::kWin) word = open.targets.front();
  if (word.empty()) throw Error("scripted player found no word");
  a.kind = server::MessageKind::kSubmitGuess;
  a.payload = {{"word", word}, {"rationale", "guessed " + SecretMarker(turn, true, 0)}};
  return a;
}

SparseVector RandomSparse(Rng& rng, std::size_t nnz, std::uint32_t dims) {
  std::map<std::uint32_t, double> cells;
  while (cells.size() < nnz)
    cells.emplace(static_cast<std::uint32_t>(rng.Below(dims)), rng.Uniform01() * 2 - 1);
  SparseVector x;
  for (const auto& [i, v] : cells) {
    x.index.push_back(i);
    x.value.push_back(v);
  }
  return x;
}

SparseVector PooledLabelExample(Rng& rng, bool label) {
  std::map<std::uint32_t, double> cells;
  while (cells.size() < 3) cells.emplace(static_cast<std::uint32_t>(rng.Below(1000)), 1.0);
  const std::uint32_t base = label ? 10000 : 12000;
  while (cells.size() < 11) cells.emplace(base + static_cast<std::uint32_t>(rng.Below(2000)), 1.0);
  SparseVector x;
  for (const auto& [i, v] : cells) {
    x.index.push_back(i);
    x.value.push_back(v);
  }
  return x;
}

std::filesystem::path SourceDir() { return DUET_SOURCE_DIR; }

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

double BruteRougeN(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                   int n) {
  auto grams = [n](const std::vector<std::string>& t) {
    std::map<std::vector<std::string>, int> m;
    for (std::size_t i = 0; i + n <= t.size(); ++i)
      ++m[std::vector<std::string>(t.begin() + i, t.begin() + i + n)];
    return m;
  };
  auto c = grams(cand);
  auto r = grams(ref);
  int nc = 0, nr = 0, overlap = 0;
  for (auto& [g, k] : c) nc += k;
  for (auto& [g, k] : r) nr += k;
  if (nc == 0 || nr == 0) return cand == ref ? 1.0 : 0.0;
  for (auto& [g, k] : c) {
    auto it = r.find(g);
    if (it != r.end()) overlap += std::min(k, it->second);
  }
  if (overlap == 0) return 0.0;
  double p = double(overlap) / nc, rec = double(overlap) / nr;
  return 2 * p * rec / (p + rec);
}

std::size_t QuadraticLcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1 : std::max(dp[i - 1][j], dp[i][j - 1]);
  return dp[a.size()][b.size()];
}

}  // namespace duet::testing
