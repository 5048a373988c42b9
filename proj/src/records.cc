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

#include "duet/records.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "duet/rng.h"
#include "duet/text.h"

namespace duet {
namespace {

[[noreturn]] void Missing(std::string_view key) {
  throw ParseError("missing or mistyped field '" + std::string(key) + "'", 0);
}

const Json& Field(const Json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end()) Missing(key);
  return *it;
}

template <typename T>
T Get(const Json& j, std::string_view key) {
  try {
    return Field(j, key).get<T>();
  } catch (const nlohmann::json::exception&) {
    Missing(key);
  }
}

template <typename T>
std::optional<T> GetOpt(const Json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    Missing(key);
  }
}

template <typename T>
void PutOpt(Json& j, std::string_view key, const std::optional<T>& v) {
  if (v) j[std::string(key)] = *v;
}

Json KeyCardJson(const KeyCard& card) {
  Json j;
  j["goal"] = card.WordsWith(Role::kGoal);
  j["avoid"] = card.WordsWith(Role::kAvoid);
  j["neutral"] = card.WordsWith(Role::kNeutral);
  return j;
}

KeyCard KeyCardFromJson(const Json& j, const Board& board) {
  std::vector<Role> roles(board.words.size(), Role::kNeutral);
  std::vector<bool> assigned(board.words.size(), false);
  auto assign = [&](std::string_view key, Role role) {
    for (const auto& w : Get<std::vector<std::string>>(j, key)) {
      std::size_t idx = board.IndexOf(w);
      if (idx >= board.words.size())
        throw ValidationError("key card word '" + w + "' is not on the board");
      if (assigned[idx]) throw ValidationError("key card assigns '" + w + "' twice");
      assigned[idx] = true;
      roles[idx] = role;
    }
  };
  assign("goal", Role::kGoal);
  assign("avoid", Role::kAvoid);
  assign("neutral", Role::kNeutral);
  if (std::find(assigned.begin(), assigned.end(), false) != assigned.end())
    throw ValidationError("key card leaves a board word unassigned");
  return KeyCard(board, std::move(roles));
}

Json RolesJson(const std::vector<Role>& roles) {
  Json arr = Json::array();
  for (Role r : roles) arr.push_back(ToString(r));
  return arr;
}

std::string Dump(const Json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace

std::string_view ToString(GameOutcome o) { return o == GameOutcome::kWin ? "WIN" : "LOSS"; }
std::string_view ToString(Termination t) {
  return t == Termination::kCompleted ? "COMPLETED" : "ABANDONED";
}

GameRecord MakeRecord(std::string game_id, std::array<std::string, kNumPlayers> players,
                      std::array<SocioProfile, kNumPlayers> profiles, const GameState& state,
                      Termination termination) {
  GameRecord r;
  r.game_id = std::move(game_id);
  r.players = std::move(players);
  r.profiles = std::move(profiles);
  r.board = state.board();
  r.key_cards = {state.key_card(0), state.key_card(1)};
  r.config = state.config();
  r.turns = state.turns();
  if (!r.turns.empty() && state.phase() == Phase::kAwaitGuess) r.turns.pop_back();
  r.outcome = state.phase() == Phase::kWon ? GameOutcome::kWin : GameOutcome::kLoss;
  r.termination = termination;
  r.completeness = CompletenessOf(r.profiles[0], r.profiles[1]);
  return r;
}

GameState StateBeforeTurn(const GameRecord& record, std::size_t turn_index) {
  GameState s = NewGameWithKeys(record.board, record.key_cards[0], record.key_cards[1],
                                record.config);
  for (std::size_t i = 0; i < turn_index && i < record.turns.size(); ++i)
    s = ApplyTurn(s, record.turns[i]);
  return s;
}

GameState ReplayRecord(const GameRecord& record) {
  return StateBeforeTurn(record, record.turns.size());
}

void ValidateRecord(const GameRecord& record) {
  if (!record.normalized.empty() && record.normalized.size() != record.turns.size())
    throw ValidationError(record.game_id + ": normalized rationales do not match turns");
  GameState s = ReplayRecord(record);
  for (std::size_t i = 0; i < record.turns.size(); ++i)
    if (record.turns[i].intentional != LabelIntentionality(record.turns[i]))
      throw ValidationError(record.game_id + ": turn " + std::to_string(i) +
                            " intentional flags disagree with targets");
  if (record.termination == Termination::kAbandoned) {
    if (s.IsTerminal())
      throw ValidationError(record.game_id + ": abandoned game replays to a finished game");
    if (record.outcome != GameOutcome::kLoss)
      throw ValidationError(record.game_id + ": abandoned games are recorded as losses");
    if (static_cast<int>(record.turns.size()) < kMinQualifyingTurns)
      throw ValidationError(record.game_id + ": abandoned game has fewer than 7 turns");
    return;
  }
  Phase expected = record.outcome == GameOutcome::kWin ? Phase::kWon : Phase::kLost;
  if (s.phase() != expected)
    throw ValidationError(record.game_id + ": stored outcome " +
                          std::string(ToString(record.outcome)) + " but replay ends in " +
                          std::string(ToString(s.phase())));
}

Json ToJson(const SocioProfile& p) {
  Json j = Json::object();
  if (p.demo_req) {
    Json d = Json::object();
    PutOpt(d, "age", p.demo_req->age);
    PutOpt(d, "country", p.demo_req->country);
    PutOpt(d, "native_english", p.demo_req->native_english);
    j["demo_req"] = d;
  }
  if (p.demo_all) {
    const DemoAll& a = *p.demo_all;
    Json d = Json::object();
    PutOpt(d, "gender", a.gender);
    PutOpt(d, "age_range", a.age_range);
    PutOpt(d, "race", a.race);
    PutOpt(d, "continent", a.continent);
    PutOpt(d, "education", a.education);
    PutOpt(d, "marital_status", a.marital_status);
    PutOpt(d, "native_language", a.native_language);
    PutOpt(d, "religion", a.religion);
    j["demo_all"] = d;
  }
  if (p.big5) j["big5"] = *p.big5;
  if (p.mfq) j["mfq"] = *p.mfq;
  if (p.political) j["political"] = ToString(*p.political);
  return j;
}

SocioProfile ProfileFromJson(const Json& j) {
  if (!j.is_object()) throw ParseError("profile must be an object", 0);
  SocioProfile p;
  if (auto it = j.find("demo_req"); it != j.end()) {
    DemoReq d;
    d.age = GetOpt<int>(*it, "age");
    d.country = GetOpt<std::string>(*it, "country");
    d.native_english = GetOpt<bool>(*it, "native_english");
    p.demo_req = d;
  }
  if (auto it = j.find("demo_all"); it != j.end()) {
    DemoAll a;
    a.gender = GetOpt<std::string>(*it, "gender");
    a.age_range = GetOpt<std::string>(*it, "age_range");
    a.race = GetOpt<std::string>(*it, "race");
    a.continent = GetOpt<std::string>(*it, "continent");
    a.education = GetOpt<std::string>(*it, "education");
    a.marital_status = GetOpt<std::string>(*it, "marital_status");
    a.native_language = GetOpt<std::string>(*it, "native_language");
    a.religion = GetOpt<std::string>(*it, "religion");
    p.demo_all = a;
  }
  auto read_items = [&](std::string_view key, int n) -> std::optional<std::array<int, 10>> {
    auto v = GetOpt<std::vector<int>>(j, key);
    if (!v) return std::nullopt;
    if (static_cast<int>(v->size()) != n)
      throw ValidationError(std::string(key) + ": expected " + std::to_string(n) +
                            " answers, got " + std::to_string(v->size()));
    std::array<int, 10> out{};
    std::copy(v->begin(), v->end(), out.begin());
    return out;
  };
  p.big5 = read_items("big5", kBig5Items);
  p.mfq = read_items("mfq", kMfqItems);
  if (auto pol = GetOpt<std::string>(j, "political")) p.political = ParsePolitical(*pol);
  return p;
}

Json ToJson(const TurnRecord& t) {
  Json j;
  j["giver"] = t.giver;
  j["clue"] = t.clue;
  j["targets"] = t.targets;
  j["target_rationales"] = t.target_rationales;
  Json guesses = Json::array();
  for (std::size_t i = 0; i < t.guesses.size(); ++i) {
    Json g;
    g["word"] = t.guesses[i].word;
    g["rationale"] = t.guesses[i].rationale;
    g["outcome"] = ToString(t.guesses[i].outcome);
    g["intentional"] = i < t.intentional.size() && t.intentional[i];
    guesses.push_back(std::move(g));
  }
  j["guesses"] = std::move(guesses);
  return j;
}

Json ToJson(const GameRecord& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["game_id"] = r.game_id;
  j["players"] = r.players;
  j["profiles"] = Json::array({ToJson(r.profiles[0]), ToJson(r.profiles[1])});
  j["board"] = {{"seed", r.board.seed}, {"words", r.board.words}};
  j["key_cards"] = Json::array({KeyCardJson(r.key_cards[0]), KeyCardJson(r.key_cards[1])});
  j["config"] = {{"turn_cap", r.config.turn_cap},
                 {"first_giver", r.config.first_giver},
                 {"strict_clues", r.config.clue_rules.strict}};
  Json turns = Json::array();
  for (std::size_t i = 0; i < r.turns.size(); ++i) {
    Json t = ToJson(r.turns[i]);
    if (i < r.normalized.size()) {
      t["normalized"] = {{"targets", r.normalized[i].targets},
                         {"guesses", r.normalized[i].guesses},
                         {"fallback", r.normalized[i].fallback}};
    }
    turns.push_back(std::move(t));
  }
  j["turns"] = std::move(turns);
  j["outcome"] = ToString(r.outcome);
  j["termination"] = ToString(r.termination);
  j["survey_completeness"] = ToString(r.completeness);
  return j;
}

GameRecord RecordFromJson(const Json& j) {
  if (!j.is_object()) throw ParseError("record must be a JSON object", 0);
  int version = Get<int>(j, "schema_version");
  if (version != kSchemaVersion) throw SchemaVersionError(version, kSchemaVersion);
  GameRecord r;
  r.game_id = Get<std::string>(j, "game_id");
  auto players = Get<std::vector<std::string>>(j, "players");
  if (players.size() != kNumPlayers) throw ValidationError("expected two players");
  r.players = {players[0], players[1]};
  const Json& profiles = Field(j, "profiles");
  if (!profiles.is_array() || profiles.size() != kNumPlayers)
    throw ValidationError("expected two profiles");
  r.profiles = {ProfileFromJson(profiles[0]), ProfileFromJson(profiles[1])};
  const Json& board = Field(j, "board");
  r.board.seed = Get<std::uint64_t>(board, "seed");
  r.board.words = Get<std::vector<std::string>>(board, "words");
  if (r.board.words.size() != kBoardSize) throw ValidationError("board must have 25 words");
  const Json& cards = Field(j, "key_cards");
  if (!cards.is_array() || cards.size() != kNumPlayers)
    throw ValidationError("expected two key cards");
  r.key_cards = {KeyCardFromJson(cards[0], r.board), KeyCardFromJson(cards[1], r.board)};
  const Json& config = Field(j, "config");
  r.config.turn_cap = Get<int>(config, "turn_cap");
  r.config.first_giver = Get<int>(config, "first_giver");
  r.config.clue_rules.strict = Get<bool>(config, "strict_clues");
  const Json& turns = Field(j, "turns");
  if (!turns.is_array()) Missing("turns");
  bool any_normalized = false;
  for (const Json& tj : turns) {
    TurnRecord t;
    t.giver = Get<int>(tj, "giver");
    if (!IsPlayer(t.giver)) throw ValidationError("turn giver must be 0 or 1");
    t.clue = Get<std::string>(tj, "clue");
    t.targets = Get<std::vector<std::string>>(tj, "targets");
    t.target_rationales = Get<std::vector<std::string>>(tj, "target_rationales");
    const Json& guesses = Field(tj, "guesses");
    if (!guesses.is_array()) Missing("guesses");
    for (const Json& gj : guesses) {
      t.guesses.push_back({Get<std::string>(gj, "word"), Get<std::string>(gj, "rationale"),
                           ParseGuessOutcome(Get<std::string>(gj, "outcome"))});
      t.intentional.push_back(Get<bool>(gj, "intentional"));
    }
    NormalizedTurn n;
    if (auto it = tj.find("normalized"); it != tj.end()) {
      any_normalized = true;
      n.targets = Get<std::vector<std::string>>(*it, "targets");
      n.guesses = Get<std::vector<std::string>>(*it, "guesses");
      n.fallback = Get<bool>(*it, "fallback");
    }
    r.normalized.push_back(std::move(n));
    r.turns.push_back(std::move(t));
  }
  if (!any_normalized) r.normalized.clear();
  std::string outcome = Get<std::string>(j, "outcome");
  if (outcome == "WIN") r.outcome = GameOutcome::kWin;
  else if (outcome == "LOSS") r.outcome = GameOutcome::kLoss;
  else throw ValidationError("unknown outcome '" + outcome + "'");
  std::string term = Get<std::string>(j, "termination");
  if (term == "COMPLETED") r.termination = Termination::kCompleted;
  else if (term == "ABANDONED") r.termination = Termination::kAbandoned;
  else throw ValidationError("unknown termination '" + term + "'");
  r.completeness = ParseSurveyCompleteness(Get<std::string>(j, "survey_completeness"));
  return r;
}

Json ToJson(const PlayerView& v) {
  Json j;
  j["player"] = v.player;
  j["phase"] = ToString(v.phase);
  j["active_giver"] = v.active_giver;
  j["completed_turns"] = v.completed_turns;
  j["turn_cap"] = v.turn_cap;
  j["strict_clues"] = v.strict_clues;
  j["board"] = v.board;
  j["own_key"] = RolesJson(v.own_key);
  if (v.partner_key) j["partner_key"] = RolesJson(*v.partner_key);
  j["covered"] = v.covered;
  j["neutral_marks"] = Json::array({v.neutral_marks[0], v.neutral_marks[1]});
  Json history = Json::array();
  for (const auto& t : v.history) {
    Json tj;
    tj["giver"] = t.giver;
    tj["clue"] = t.clue;
    tj["target_count"] = t.target_count;
    if (t.targets) tj["targets"] = *t.targets;
    if (t.target_rationales) tj["target_rationales"] = *t.target_rationales;
    Json guesses = Json::array();
    for (const auto& g : t.guesses) {
      Json gj;
      gj["word"] = g.word;
      gj["outcome"] = ToString(g.outcome);
      if (g.rationale) gj["rationale"] = *g.rationale;
      guesses.push_back(std::move(gj));
    }
    tj["guesses"] = std::move(guesses);
    history.push_back(std::move(tj));
  }
  j["history"] = std::move(history);
  return j;
}

PlayerView PlayerViewFromJson(const Json& j) {
  auto roles = [&](const Json& arr) {
    std::vector<Role> out;
    for (const auto& r : arr) out.push_back(ParseRole(r.get<std::string>()));
    return out;
  };
  try {
    PlayerView v;
    v.player = Get<int>(j, "player");
    v.phase = ParsePhase(Get<std::string>(j, "phase"));
    v.active_giver = Get<int>(j, "active_giver");
    v.completed_turns = Get<int>(j, "completed_turns");
    v.turn_cap = Get<int>(j, "turn_cap");
    v.strict_clues = GetOpt<bool>(j, "strict_clues").value_or(false);
    v.board = Get<std::vector<std::string>>(j, "board");
    v.own_key = roles(Field(j, "own_key"));
    if (j.contains("partner_key")) v.partner_key = roles(j.at("partner_key"));
    v.covered = Get<std::vector<std::string>>(j, "covered");
    const Json& marks = Field(j, "neutral_marks");
    for (int p = 0; p < kNumPlayers; ++p) v.neutral_marks[p] = marks.at(p).get<std::vector<std::string>>();
    for (const Json& tj : Field(j, "history")) {
      PublicTurn t;
      t.giver = Get<int>(tj, "giver");
      t.clue = Get<std::string>(tj, "clue");
      t.target_count = Get<int>(tj, "target_count");
      t.targets = GetOpt<std::vector<std::string>>(tj, "targets");
      t.target_rationales = GetOpt<std::vector<std::string>>(tj, "target_rationales");
      for (const Json& gj : Field(tj, "guesses")) {
        PublicGuess g;
        g.word = Get<std::string>(gj, "word");
        g.outcome = ParseGuessOutcome(Get<std::string>(gj, "outcome"));
        g.rationale = GetOpt<std::string>(gj, "rationale");
        t.guesses.push_back(std::move(g));
      }
      v.history.push_back(std::move(t));
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed player view: ") + e.what(), 0);
  }
}

std::string SerializeGame(const GameRecord& record) { return Dump(ToJson(record)); }

GameRecord ParseGame(std::string_view bytes) {
  Json j;
  try {
    j = Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed record at byte " + std::to_string(e.byte) + ": " + e.what(),
                     e.byte);
  }
  return RecordFromJson(j);
}

std::vector<GameRecord> ParseArchive(std::string_view text) {
  std::vector<GameRecord> out;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    if (!Trim(line).empty()) {
      try {
        out.push_back(ParseGame(line));
      } catch (const ParseError& e) {
        std::size_t at = offset + e.position();
        throw ParseError("archive byte " + std::to_string(at) + " (record " +
                             std::to_string(out.size() + 1) + "): " + e.what(),
                         at);
      }
    }
    offset = end + 1;
  }
  return out;
}

std::vector<GameRecord> ReadArchive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open archive " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseArchive(buffer.str());
}

void WriteArchive(const std::filesystem::path& path, std::span<const GameRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write archive " + path.string());
  for (const auto& r : records) out << SerializeGame(r) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

ArchiveWriter::ArchiveWriter(const std::filesystem::path& path) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
  if (fd_ < 0) throw IoError("cannot open archive " + path.string() + ": " + std::strerror(errno));
  struct stat st {};
  if (::fstat(fd_, &st) != 0) throw IoError("cannot stat " + path.string());
  const off_t size = st.st_size;
  if (size > 0) {
    // Scan backwards for the last newline; anything after it is a torn write.
    off_t keep = 0;
    char buf[4096];
    off_t pos = size;
    bool found = false;
    while (pos > 0 && !found) {
      off_t chunk = std::min<off_t>(pos, sizeof(buf));
      pos -= chunk;
      if (::pread(fd_, buf, static_cast<std::size_t>(chunk), pos) != chunk)
        throw IoError("cannot read " + path.string());
      for (off_t i = chunk; i > 0; --i)
        if (buf[i - 1] == '\n') {
          keep = pos + i;
          found = true;
          break;
        }
    }
    if (keep != size) {
      if (::ftruncate(fd_, keep) != 0) throw IoError("cannot repair " + path.string());
      repaired_bytes_ = static_cast<std::size_t>(size - keep);
    }
  }
  if (::lseek(fd_, 0, SEEK_END) < 0) throw IoError("cannot seek " + path.string());
}

ArchiveWriter::~ArchiveWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void ArchiveWriter::Append(const GameRecord& record) {
  std::string line = SerializeGame(record);
  line.push_back('\n');
  std::lock_guard<std::mutex> lock(mu_);
  const char* p = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError(std::string("archive write failed: ") + std::strerror(errno));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  ::fsync(fd_);
}

DatasetStats ComputeStats(std::span<const GameRecord> records) {
  if (records.empty()) throw ValidationError("dataset_stats: no records");
  DatasetStats s;
  s.games = records.size();
  for (const auto& r : records) {
    s.turns += r.turns.size();
    for (const auto& t : r.turns) s.targets += t.targets.size();
    (r.outcome == GameOutcome::kWin ? s.wins : s.losses) += 1;
  }
  return s;
}

std::string FormatStats(const DatasetStats& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "games=%zu turns=%zu avg_turns=%.2f avg_targets_per_turn=%.2f wins=%zu "
                "losses=%zu",
                s.games, s.turns, s.AvgTurns(), s.AvgTargetsPerTurn(), s.wins, s.losses);
  return buf;
}

std::array<std::size_t, 3> Apportion(std::size_t n, std::array<int, 3> ratios) {
  int total = ratios[0] + ratios[1] + ratios[2];
  if (total != 100 || std::any_of(ratios.begin(), ratios.end(), [](int r) { return r < 0; }))
    throw ValidationError("split ratios must be non-negative and sum to 100");
  std::array<std::size_t, 3> counts{};
  std::array<std::size_t, 3> rem{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t scaled = n * static_cast<std::size_t>(ratios[i]);
    counts[i] = scaled / 100;
    rem[i] = scaled % 100;
    assigned += counts[i];
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (rem[i] > rem[best]) best = i;
    ++counts[best];
    rem[best] = 0;
    ++assigned;
  }
  return counts;
}

DatasetSplit SplitByClueGiver(std::span<const GameRecord> records, std::array<int, 3> ratios,
                              std::uint64_t seed) {
  std::set<std::string> giver_set;
  for (const auto& r : records)
    for (const auto& t : r.turns) giver_set.insert(r.GiverId(t));
  const int parts = static_cast<int>(std::count_if(ratios.begin(), ratios.end(),
                                                   [](int x) { return x > 0; }));
  if (giver_set.size() < static_cast<std::size_t>(parts))
    throw ValidationError("split_by_clue_giver: " + std::to_string(giver_set.size()) +
                          " clue givers cannot fill " + std::to_string(parts) + " splits");
  std::array<std::size_t, 3> counts = Apportion(giver_set.size(), ratios);

  std::vector<std::string> givers(giver_set.begin(), giver_set.end());
  Rng rng(ForkSeed(seed, "split_by_clue_giver"));
  rng.Shuffle(givers);

  std::map<std::string, int> assignment;
  std::size_t next = 0;
  DatasetSplit split;
  SplitPart* out[3] = {&split.train, &split.val, &split.test};
  for (int p = 0; p < 3; ++p)
    for (std::size_t k = 0; k < counts[p]; ++k, ++next) {
      assignment[givers[next]] = p;
      out[p]->givers.push_back(givers[next]);
    }
  for (auto* part : out) std::sort(part->givers.begin(), part->givers.end());
  for (std::size_t g = 0; g < records.size(); ++g)
    for (std::size_t t = 0; t < records[g].turns.size(); ++t)
      out[assignment.at(records[g].GiverId(records[g].turns[t]))]->turns.push_back({g, t});
  return split;
}

}  // namespace duet
