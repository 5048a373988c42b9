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

#include "duet/encoding.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "duet/error.h"
#include "duet/normalizer.h"
#include "duet/text.h"

namespace duet {
namespace {

constexpr std::array<std::string_view, 3> kDemoReqKeys = {"age", "country", "native_english"};
constexpr std::array<std::string_view, 8> kDemoAllKeys = {
    "gender",    "age_range",      "race",           "continent",
    "education", "marital_status", "native_language", "religion"};
// Question order of the 10-item BFI.
constexpr std::array<std::string_view, kBig5Items> kBig5Keys = {
    "thorough", "reserved",     "outgoing", "nervous", "artistic",
    "relaxed",  "faultfinding", "trusting", "lazy",    "imaginative"};
// MFQ relevance items (a)..(j), then the political question.
constexpr std::array<std::string_view, kMfqItems + 1> kMoralityKeys = {
    "emotional_suffering", "unequal_treatment", "love_of_country", "disrespect_authority",
    "purity",              "good_at_math",      "care_for_weak",   "unfairness",
    "betrayal",            "traditions",        "political"};

class TokenWriter {
 public:
  void Add(std::string_view t) {
    if (t.empty()) return;
    if (!out_.empty()) out_ += ' ';
    out_ += t;
  }
  void AddAll(std::span<const std::string> words) {
    for (const auto& w : words) Add(w);
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

using Attr = std::pair<std::string_view, std::string>;

std::string OrNone(const std::optional<std::string>& v) {
  return v ? SanitizeText(*v) : std::string(tok::kNoneValue);
}

std::vector<Attr> BlockAttributes(const SocioProfile& p, Ablation block) {
  std::vector<Attr> out;
  switch (block) {
    case Ablation::kDemoReq: {
      const DemoReq d = p.demo_req.value_or(DemoReq{});
      out.emplace_back(kDemoReqKeys[0], d.age ? std::to_string(*d.age) : std::string(tok::kNoneValue));
      out.emplace_back(kDemoReqKeys[1], OrNone(d.country));
      out.emplace_back(kDemoReqKeys[2], d.native_english ? (*d.native_english ? "yes" : "no")
                                                         : std::string(tok::kNoneValue));
      break;
    }
    case Ablation::kDemoAll: {
      const DemoAll d = p.demo_all.value_or(DemoAll{});
      const std::optional<std::string>* values[] = {&d.gender,    &d.age_range,      &d.race,
                                                    &d.continent, &d.education,      &d.marital_status,
                                                    &d.native_language, &d.religion};
      for (std::size_t i = 0; i < kDemoAllKeys.size(); ++i)
        out.emplace_back(kDemoAllKeys[i], OrNone(*values[i]));
      break;
    }
    case Ablation::kPersonality:
      for (int i = 0; i < kBig5Items; ++i)
        out.emplace_back(kBig5Keys[i], p.big5 ? std::to_string((*p.big5)[i])
                                              : std::string(tok::kNoneValue));
      break;
    case Ablation::kMorality:
      for (int i = 0; i < kMfqItems; ++i)
        out.emplace_back(kMoralityKeys[i], p.mfq ? std::to_string((*p.mfq)[i])
                                                 : std::string(tok::kNoneValue));
      out.emplace_back(kMoralityKeys[kMfqItems],
                       p.political ? std::string(ToString(*p.political))
                                   : std::string(tok::kNoneValue));
      break;
    default:
      break;
  }
  return out;
}

std::vector<Ablation> BlocksOf(Ablation ablation) {
  if (ablation == Ablation::kAll)
    return {Ablation::kDemoReq, Ablation::kDemoAll, Ablation::kPersonality, Ablation::kMorality};
  if (ablation == Ablation::kNone) return {};
  return {ablation};
}

void AddAttributes(TokenWriter& w, const SocioProfile& p, Ablation ablation) {
  for (Ablation block : BlocksOf(ablation))
    for (const auto& [key, value] : BlockAttributes(p, block)) {
      w.Add(std::string(key) + ":");
      w.Add(value);
    }
}

void RequireMember(std::span<const std::string> set, std::string_view word,
                   std::string_view what) {
  if (std::find(set.begin(), set.end(), word) == set.end())
    throw ValidationError(std::string(what) + " '" + std::string(word) + "' is not in its section");
}

struct TaskLayout {
  std::vector<std::string_view> markers;  // "" stands for words right after <bos>
};

TaskLayout LayoutOf(Task task) {
  switch (task) {
    case Task::kTargetSelection: return {{""}};
    case Task::kClueGen: return {{tok::kAvo, tok::kNeu, tok::kTgt}};
    case Task::kClueFraming: return {{tok::kTgts, tok::kClue, tok::kTgt}};
    case Task::kGuessSelection: return {{tok::kUn, tok::kClue}};
    case Task::kGuessFraming: return {{tok::kGuesses, tok::kClue, tok::kGuess}};
    case Task::kSuccessCls: return {{tok::kUn, tok::kTr, tok::kClue}};
  }
  return {};
}

std::vector<std::string> Sorted(std::vector<std::string> words, const Board& board) {
  std::stable_sort(words.begin(), words.end(), [&](const std::string& a, const std::string& b) {
    return board.IndexOf(a) < board.IndexOf(b);
  });
  return words;
}

}  // namespace

const std::array<std::string_view, 13>& SpecialTokens() {
  static constexpr std::array<std::string_view, 13> kAll = {
      tok::kBos, tok::kEos,   tok::kAvo,     tok::kNeu, tok::kTgt, tok::kTgts,   tok::kClue,
      tok::kGuess, tok::kGuesses, tok::kUn, tok::kTr,  tok::kGiver, tok::kGuesser};
  return kAll;
}

bool IsSpecialToken(std::string_view token) {
  const auto& all = SpecialTokens();
  return std::find(all.begin(), all.end(), token) != all.end();
}

std::string_view ToString(Task task) {
  switch (task) {
    case Task::kTargetSelection: return "TARGET_SELECTION";
    case Task::kClueGen: return "CLUE_GEN";
    case Task::kClueFraming: return "CLUE_FRAMING";
    case Task::kGuessSelection: return "GUESS_SELECTION";
    case Task::kGuessFraming: return "GUESS_FRAMING";
    case Task::kSuccessCls: return "SUCCESS_CLS";
  }
  return "?";
}

std::string_view ToString(Ablation a) {
  switch (a) {
    case Ablation::kNone: return "NONE";
    case Ablation::kDemoReq: return "DEMO_REQ";
    case Ablation::kDemoAll: return "DEMO_ALL";
    case Ablation::kPersonality: return "PERSONALITY";
    case Ablation::kMorality: return "MORALITY";
    case Ablation::kAll: return "ALL";
  }
  return "?";
}

std::string_view DisplayName(Ablation a) {
  switch (a) {
    case Ablation::kNone: return "None";
    case Ablation::kDemoReq: return "Demo_Req";
    case Ablation::kDemoAll: return "Demo_All";
    case Ablation::kPersonality: return "Personality";
    case Ablation::kMorality: return "Morality";
    case Ablation::kAll: return "All";
  }
  return "?";
}

Task ParseTask(std::string_view s) {
  for (Task t : kAllTasks)
    if (s == ToString(t)) return t;
  throw ValidationError("unknown task '" + std::string(s) + "'");
}

Ablation ParseAblation(std::string_view s) {
  std::string upper(s);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Ablation a : kAllAblations)
    if (upper == ToString(a)) return a;
  throw ValidationError("unknown ablation '" + std::string(s) + "'");
}

std::vector<std::string_view> PrefixAttributes(Ablation ablation) {
  std::vector<std::string_view> keys;
  for (Ablation block : BlocksOf(ablation))
    for (const auto& [key, value] : BlockAttributes(SocioProfile{}, block)) keys.push_back(key);
  return keys;
}

std::string SocioPrefix(const SocioProfile& giver, const SocioProfile& guesser,
                        Ablation ablation) {
  if (ablation == Ablation::kNone) return "";
  TokenWriter w;
  w.Add(tok::kGiver);
  AddAttributes(w, giver, ablation);
  w.Add(tok::kGuesser);
  AddAttributes(w, guesser, ablation);
  return w.Take();
}

std::string WithPrefix(std::string_view prefix, std::string_view body) {
  if (prefix.empty()) return std::string(body);
  std::string out(tok::kBos);
  out += ' ';
  out += prefix;
  out += ' ';
  out += body;
  return out;
}

std::string SanitizeText(std::string_view text) {
  std::string stripped;
  stripped.reserve(text.size());
  for (char c : text)
    if (c != '<' && c != '>') stripped.push_back(c);
  return CleanText(stripped);
}

std::string EncodeTargetSelectionInput(std::span<const std::string> goal_words) {
  if (goal_words.empty()) throw ValidationError("target selection needs at least one goal word");
  TokenWriter w;
  w.Add(tok::kBos);
  w.AddAll(goal_words);
  w.Add(tok::kEos);
  return w.Take();
}

std::string EncodeClueGenerationInput(std::span<const std::string> avoid,
                                      std::span<const std::string> neutral,
                                      std::span<const std::string> targets) {
  if (targets.empty()) throw ValidationError("clue generation needs at least one target");
  auto overlaps = [](std::span<const std::string> a, std::span<const std::string> b) {
    return std::any_of(a.begin(), a.end(), [&](const std::string& x) {
      return std::find(b.begin(), b.end(), x) != b.end();
    });
  };
  if (overlaps(avoid, neutral) || overlaps(avoid, targets) || overlaps(neutral, targets))
    throw ValidationError("avoid, neutral and target sections must be disjoint");
  TokenWriter w;
  w.Add(tok::kBos);
  w.Add(tok::kAvo);
  w.AddAll(avoid);
  w.Add(tok::kNeu);
  w.AddAll(neutral);
  w.Add(tok::kTgt);
  w.AddAll(targets);
  w.Add(tok::kEos);
  return w.Take();
}

std::string EncodeClueFramingInput(std::span<const std::string> targets, std::string_view clue,
                                   std::string_view focus_target) {
  RequireMember(targets, focus_target, "focus target");
  TokenWriter w;
  w.Add(tok::kBos);
  w.Add(tok::kTgts);
  w.AddAll(targets);
  w.Add(tok::kClue);
  w.Add(clue);
  w.Add(tok::kTgt);
  w.Add(focus_target);
  w.Add(tok::kEos);
  return w.Take();
}

std::string EncodeGuessSelectionInput(std::span<const std::string> unselected,
                                      std::string_view clue) {
  if (unselected.empty()) throw ValidationError("guess selection needs unselected words");
  TokenWriter w;
  w.Add(tok::kBos);
  w.Add(tok::kUn);
  w.AddAll(unselected);
  w.Add(tok::kClue);
  w.Add(clue);
  w.Add(tok::kEos);
  return w.Take();
}

std::string EncodeGuessFramingInput(std::span<const std::string> guesses, std::string_view clue,
                                    std::string_view focus_guess) {
  RequireMember(guesses, focus_guess, "focus guess");
  TokenWriter w;
  w.Add(tok::kBos);
  w.Add(tok::kGuesses);
  w.AddAll(guesses);
  w.Add(tok::kClue);
  w.Add(clue);
  w.Add(tok::kGuess);
  w.Add(focus_guess);
  w.Add(tok::kEos);
  return w.Take();
}

std::string EncodeSuccessInput(std::span<const std::string> unselected, std::string_view target,
                               std::string_view rationale, std::string_view clue) {
  RequireMember(unselected, target, "target");
  TokenWriter w;
  w.Add(tok::kBos);
  w.Add(tok::kUn);
  w.AddAll(unselected);
  w.Add(tok::kTr);
  w.Add(target);
  w.Add(SanitizeText(rationale));
  w.Add(tok::kClue);
  w.Add(clue);
  w.Add(tok::kEos);
  return w.Take();
}

std::string EncodeWordsOutput(std::span<const std::string> words) {
  TokenWriter w;
  w.Add(tok::kBos);
  w.AddAll(words);
  w.Add(tok::kEos);
  return w.Take();
}

std::string EncodeTextOutput(std::string_view text) {
  TokenWriter w;
  w.Add(tok::kBos);
  w.Add(SanitizeText(text));
  w.Add(tok::kEos);
  return w.Take();
}

std::vector<std::string> DecodeOutputTokens(std::string_view output) {
  std::vector<std::string_view> t = SplitWhitespace(output);
  std::size_t begin = 0, end = t.size();
  if (begin < end && t[begin] == tok::kBos) ++begin;
  if (end > begin && t[end - 1] == tok::kEos) --end;
  return {t.begin() + static_cast<std::ptrdiff_t>(begin),
          t.begin() + static_cast<std::ptrdiff_t>(end)};
}

const std::vector<std::string>& DecodedInput::Section(std::string_view marker) const {
  static const std::vector<std::string> kEmpty;
  auto it = sections.find(marker);
  return it == sections.end() ? kEmpty : it->second;
}

DecodedInput DecodeInput(Task task, std::string_view input, Ablation ablation) {
  std::vector<std::string_view> t = SplitWhitespace(input);
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError(std::string(ToString(task)) + " input: " + why, 0);
  };
  if (t.empty() || t.front() != tok::kBos) throw fail("missing leading <bos>");
  if (t.back() != tok::kEos) throw fail("missing trailing <eos>");
  DecodedInput out;
  std::size_t i = 1;
  if (ablation != Ablation::kNone) {
    const std::vector<std::string_view> keys = PrefixAttributes(ablation);
    auto read_attrs = [&](std::string_view marker, std::string_view stop,
                          std::vector<std::pair<std::string, std::string>>& attrs) {
      if (i >= t.size() || t[i] != marker) throw fail("expected " + std::string(marker));
      ++i;
      for (std::size_t k = 0; k < keys.size(); ++k) {
        std::string key_tok = std::string(keys[k]) + ":";
        if (i >= t.size() || t[i] != key_tok) throw fail("expected attribute " + key_tok);
        ++i;
        std::string next_key = k + 1 < keys.size() ? std::string(keys[k + 1]) + ":" : "";
        std::vector<std::string_view> value;
        while (i < t.size() && t[i] != stop && (next_key.empty() || t[i] != next_key))
          value.push_back(t[i++]);
        attrs.emplace_back(std::string(keys[k]), Join(value, " "));
      }
    };
    read_attrs(tok::kGiver, tok::kGuesser, out.giver_attributes);
    read_attrs(tok::kGuesser, tok::kBos, out.guesser_attributes);
    if (i >= t.size() || t[i] != tok::kBos) throw fail("expected <bos> after the prefix");
    ++i;
  }
  {
    std::vector<std::string_view> body(t.begin() + static_cast<std::ptrdiff_t>(i - 1), t.end());
    out.body = Join(body, " ");
  }
  const TaskLayout layout = LayoutOf(task);
  std::string current;
  bool started = false;
  for (; i + 1 < t.size(); ++i) {
    std::string_view token = t[i];
    if (IsSpecialToken(token)) {
      current = std::string(token);
      if (out.sections.count(current)) throw fail("repeated section " + current);
      out.sections[current];
      out.section_order.push_back(current);
      started = true;
      continue;
    }
    if (!started) {
      started = true;
      out.sections[""];
      out.section_order.push_back("");
    }
    out.sections[current].emplace_back(token);
  }
  if (task == Task::kTargetSelection && out.section_order.empty()) {
    out.sections[""];
    out.section_order.push_back("");
  }
  std::vector<std::string> expected(layout.markers.begin(), layout.markers.end());
  if (out.section_order != expected) throw fail("sections out of order");
  return out;
}

std::vector<EncodedExample> EncodeTurn(const GameRecord& record, std::size_t turn_index,
                                       Task task, const EncodeOptions& options) {
  if (turn_index >= record.turns.size()) throw ValidationError("turn index out of range");
  const TurnRecord& turn = record.turns[turn_index];
  const PlayerId giver = turn.giver;
  const PlayerId guesser = Partner(giver);
  const GameState before = StateBeforeTurn(record, turn_index);
  const Board& board = record.board;

  std::vector<std::string> unselected = before.Unselected(guesser);
  if (options.unselected == UnselectedPolicy::kAllNeutralMarks) {
    std::erase_if(unselected, [&](const std::string& w) {
      return before.IsNeutralMarked(board.IndexOf(w), giver);
    });
  }
  auto in_unselected = [&](const std::string& w) {
    return std::find(unselected.begin(), unselected.end(), w) != unselected.end();
  };
  const std::vector<std::string> targets = Sorted(turn.targets, board);
  std::vector<std::string> guesses;
  for (const auto& g : turn.guesses) guesses.push_back(g.word);

  const NormalizedTurn* norm = options.use_normalized && turn_index < record.normalized.size()
                                   ? &record.normalized[turn_index]
                                   : nullptr;
  auto target_rationale = [&](std::size_t i) -> const std::string& {
    if (norm && i < norm->targets.size()) return norm->targets[i];
    return turn.target_rationales[i];
  };
  auto guess_rationale = [&](std::size_t i) -> const std::string& {
    if (norm && i < norm->guesses.size()) return norm->guesses[i];
    return turn.guesses[i].rationale;
  };

  const std::string prefix =
      SocioPrefix(record.profiles[giver], record.profiles[guesser], options.ablation);
  Provenance prov{record.game_id, turn_index, record.players[giver]};
  std::vector<EncodedExample> out;
  auto emit = [&](std::string body, std::string output, std::optional<bool> label) {
    out.push_back({task, WithPrefix(prefix, body), std::move(output), label, prov});
  };

  switch (task) {
    case Task::kTargetSelection:
      emit(EncodeTargetSelectionInput(before.UncoveredGoals(giver)), EncodeWordsOutput(targets),
           std::nullopt);
      break;
    case Task::kClueGen: {
      const KeyCard& card = record.key_cards[giver];
      std::vector<std::string> avoid, neutral;
      for (const auto& w : card.WordsWith(Role::kAvoid))
        if (in_unselected(w)) avoid.push_back(w);
      for (const auto& w : card.WordsWith(Role::kNeutral))
        if (in_unselected(w)) neutral.push_back(w);
      std::vector<std::string> clue = {turn.clue};
      emit(EncodeClueGenerationInput(avoid, neutral, targets), EncodeWordsOutput(clue),
           std::nullopt);
      break;
    }
    case Task::kClueFraming:
      for (std::size_t i = 0; i < turn.targets.size(); ++i)
        emit(EncodeClueFramingInput(targets, turn.clue, turn.targets[i]),
             EncodeTextOutput(target_rationale(i)), std::nullopt);
      break;
    case Task::kGuessSelection:
      emit(EncodeGuessSelectionInput(unselected, turn.clue), EncodeWordsOutput(guesses),
           std::nullopt);
      break;
    case Task::kGuessFraming:
      for (std::size_t i = 0; i < guesses.size(); ++i)
        emit(EncodeGuessFramingInput(guesses, turn.clue, guesses[i]),
             EncodeTextOutput(guess_rationale(i)), std::nullopt);
      break;
    case Task::kSuccessCls:
      for (std::size_t i = 0; i < turn.targets.size(); ++i) {
        const std::string& t = turn.targets[i];
        bool hit = std::find(guesses.begin(), guesses.end(), t) != guesses.end();
        emit(EncodeSuccessInput(unselected, t, target_rationale(i), turn.clue), "", hit);
      }
      break;
  }
  return out;
}

std::vector<EncodedExample> EncodeRecords(std::span<const GameRecord> records,
                                          std::span<const TurnRef> turns, Task task,
                                          const EncodeOptions& options) {
  std::vector<EncodedExample> out;
  for (const TurnRef& ref : turns) {
    auto ex = EncodeTurn(records[ref.game], ref.turn, task, options);
    out.insert(out.end(), std::make_move_iterator(ex.begin()), std::make_move_iterator(ex.end()));
  }
  return out;
}

std::vector<EncodedExample> EncodeAll(std::span<const GameRecord> records, Task task,
                                      const EncodeOptions& options) {
  std::vector<TurnRef> refs;
  for (std::size_t g = 0; g < records.size(); ++g)
    for (std::size_t t = 0; t < records[g].turns.size(); ++t) refs.push_back({g, t});
  return EncodeRecords(records, refs, task, options);
}

Json ToJson(const EncodedExample& e) {
  Json j;
  j["task"] = ToString(e.task);
  j["input"] = e.input;
  if (e.label) j["label"] = *e.label;
  else j["output"] = e.output;
  j["provenance"] = {{"game_id", e.provenance.game_id},
                     {"turn", e.provenance.turn},
                     {"giver", e.provenance.giver}};
  return j;
}

EncodedExample ExampleFromJson(const Json& j) {
  try {
    EncodedExample e;
    e.task = ParseTask(j.at("task").get<std::string>());
    e.input = j.at("input").get<std::string>();
    if (j.contains("label")) e.label = j.at("label").get<bool>();
    else e.output = j.at("output").get<std::string>();
    const Json& p = j.at("provenance");
    e.provenance = {p.at("game_id").get<std::string>(), p.at("turn").get<std::size_t>(),
                    p.at("giver").get<std::string>()};
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed encoded example: ") + ex.what(), 0);
  }
}

void WriteExamples(const std::filesystem::path& path, std::span<const EncodedExample> examples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& e : examples)
    out << ToJson(e).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<EncodedExample> ReadExamples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<EncodedExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(ExampleFromJson(Json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) + ": " + e.what(),
                       line_no);
    }
  }
  return out;
}

}  // namespace duet
