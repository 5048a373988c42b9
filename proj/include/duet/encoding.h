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

#ifndef DUET_ENCODING_H_
#define DUET_ENCODING_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "duet/profiles.h"
#include "duet/records.h"

namespace duet {

// Fixed special-token surface forms. Angle brackets keep them disjoint from
// the lowercase board vocabulary.
namespace tok {
inline constexpr std::string_view kBos = "<bos>";
inline constexpr std::string_view kEos = "<eos>";
inline constexpr std::string_view kAvo = "<avo>";
inline constexpr std::string_view kNeu = "<neu>";
inline constexpr std::string_view kTgt = "<tgt>";
inline constexpr std::string_view kTgts = "<tgts>";
inline constexpr std::string_view kClue = "<clue>";
inline constexpr std::string_view kGuess = "<guess>";
inline constexpr std::string_view kGuesses = "<guesses>";
inline constexpr std::string_view kUn = "<un>";
inline constexpr std::string_view kTr = "<tr>";
inline constexpr std::string_view kGiver = "<giver>";
inline constexpr std::string_view kGuesser = "<guesser>";
inline constexpr std::string_view kNoneValue = "None";
}  // namespace tok

const std::array<std::string_view, 13>& SpecialTokens();
bool IsSpecialToken(std::string_view token);

enum class Task {
  kTargetSelection,
  kClueGen,
  kClueFraming,
  kGuessSelection,
  kGuessFraming,
  kSuccessCls,
};
inline constexpr std::array<Task, 6> kAllTasks = {
    Task::kTargetSelection, Task::kClueGen,      Task::kClueFraming,
    Task::kGuessSelection,  Task::kGuessFraming, Task::kSuccessCls};

enum class Ablation { kNone, kDemoReq, kDemoAll, kPersonality, kMorality, kAll };
inline constexpr std::array<Ablation, 6> kAllAblations = {
    Ablation::kNone,        Ablation::kDemoReq,  Ablation::kDemoAll,
    Ablation::kPersonality, Ablation::kMorality, Ablation::kAll};

std::string_view ToString(Task task);          // "TARGET_SELECTION", ...
std::string_view ToString(Ablation ablation);  // "NONE", "DEMO_REQ", ...
Task ParseTask(std::string_view s);
Ablation ParseAblation(std::string_view s);
// Row label used in reports: "None", "Demo_Req", ...
std::string_view DisplayName(Ablation ablation);

// Attribute keys rendered by `ablation`, in prefix order, per player.
std::vector<std::string_view> PrefixAttributes(Ablation ablation);

// "<giver> k: v ... <guesser> k: v ..." or "" for NONE. Unanswered items
// render as "None".
std::string SocioPrefix(const SocioProfile& giver, const SocioProfile& guesser,
                        Ablation ablation);

// Empty prefix: the body unchanged. Otherwise "<bos> " + prefix + " " + body.
std::string WithPrefix(std::string_view prefix, std::string_view body);

// Free text as it appears inside sequences: cleaned, no angle brackets.
std::string SanitizeText(std::string_view text);

std::string EncodeTargetSelectionInput(std::span<const std::string> goal_words);
std::string EncodeClueGenerationInput(std::span<const std::string> avoid,
                                      std::span<const std::string> neutral,
                                      std::span<const std::string> targets);
std::string EncodeClueFramingInput(std::span<const std::string> targets, std::string_view clue,
                                   std::string_view focus_target);
std::string EncodeGuessSelectionInput(std::span<const std::string> unselected,
                                      std::string_view clue);
std::string EncodeGuessFramingInput(std::span<const std::string> guesses, std::string_view clue,
                                    std::string_view focus_guess);
std::string EncodeSuccessInput(std::span<const std::string> unselected, std::string_view target,
                               std::string_view rationale, std::string_view clue);

// "<bos> w1 ... wn <eos>"
std::string EncodeWordsOutput(std::span<const std::string> words);
// "<bos> sanitized text <eos>"
std::string EncodeTextOutput(std::string_view text);
// Inverse of the two output encoders: the tokens between the markers.
std::vector<std::string> DecodeOutputTokens(std::string_view output);

// Fields recovered from an encoded input.
struct DecodedInput {
  std::vector<std::pair<std::string, std::string>> giver_attributes;
  std::vector<std::pair<std::string, std::string>> guesser_attributes;
  // Section marker -> tokens, for every marker present in the body. The
  // "<tr>" section holds the target followed by the rationale tokens.
  std::map<std::string, std::vector<std::string>, std::less<>> sections;
  std::vector<std::string> section_order;
  std::string body;  // the input without prefix

  const std::vector<std::string>& Section(std::string_view marker) const;
};

// Throws ParseError when the text does not have the task's layout.
DecodedInput DecodeInput(Task task, std::string_view input, Ablation ablation);

struct Provenance {
  std::string game_id;
  std::size_t turn = 0;
  std::string giver;  // clue-giver identity, used by the split verifier

  bool operator==(const Provenance&) const = default;
};

struct EncodedExample {
  Task task = Task::kTargetSelection;
  std::string input;
  std::string output;          // empty for SUCCESS_CLS
  std::optional<bool> label;   // SUCCESS_CLS only
  Provenance provenance;

  bool operator==(const EncodedExample&) const = default;
};

enum class UnselectedPolicy {
  kOwnNeutralMarks,   // the engine definition
  kAllNeutralMarks,   // also drop words the giver marked neutral
};

struct EncodeOptions {
  Ablation ablation = Ablation::kNone;
  bool use_normalized = true;  // prefer normalized rationales when recorded
  UnselectedPolicy unselected = UnselectedPolicy::kOwnNeutralMarks;
};

// Examples one turn contributes to `task`: one per turn for the selection
// and clue tasks, one per target for CLUE_FRAMING and SUCCESS_CLS, one per
// guess for GUESS_FRAMING.
std::vector<EncodedExample> EncodeTurn(const GameRecord& record, std::size_t turn_index,
                                       Task task, const EncodeOptions& options = {});
std::vector<EncodedExample> EncodeRecords(std::span<const GameRecord> records,
                                          std::span<const TurnRef> turns, Task task,
                                          const EncodeOptions& options = {});
std::vector<EncodedExample> EncodeAll(std::span<const GameRecord> records, Task task,
                                      const EncodeOptions& options = {});

Json ToJson(const EncodedExample& example);
EncodedExample ExampleFromJson(const Json& j);
void WriteExamples(const std::filesystem::path& path, std::span<const EncodedExample> examples);
std::vector<EncodedExample> ReadExamples(const std::filesystem::path& path);

}  // namespace duet

#endif  // DUET_ENCODING_H_
