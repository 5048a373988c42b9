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

#ifndef DUET_AGENTS_H_
#define DUET_AGENTS_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duet/encoding.h"
#include "duet/game.h"
#include "duet/net.h"
#include "duet/normalizer.h"
#include "duet/rng.h"
#include "duet/vectors.h"
#include "duet/word_bank.h"

namespace duet {

struct ClueDecision {
  std::vector<std::string> targets;
  std::string clue;
  std::vector<std::string> rationales;
};

struct GuessStep {
  std::string word;
  std::string rationale;
};

// Guesses to submit in order. The driver stops early when a guess ends the
// turn and calls end_turn after the last one otherwise.
struct GuessPlan {
  std::vector<GuessStep> guesses;
};

struct AgentEvent {
  std::string kind;    // "retry", "fallback", "timeout", "malformed", "rejected"
  std::string detail;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual ClueDecision GiveClue(const PlayerView& view) = 0;
  virtual GuessPlan Guess(const PlayerView& view) = 0;
  const std::vector<AgentEvent>& events() const { return events_; }

 protected:
  std::vector<AgentEvent> events_;
};

// Legal clue check from a giver's view.
std::optional<std::string> CheckClueFromView(const PlayerView& view, std::string_view clue);

// Throws RuleViolation unless `decision` is legal for the giver of `view`,
// or `plan` for its guesser (the plan's words must be distinct and
// unselected; only the first guess is checked against turn-ending
// outcomes by the engine).
void ValidateClueDecision(const PlayerView& view, const ClueDecision& decision);
void ValidateGuessPlan(const PlayerView& view, const GuessPlan& plan);

// Uniform single target and uniform legal clue from `vocabulary`.
ClueDecision RandomClue(const PlayerView& view, const WordList& vocabulary, Rng& rng);
// One uniform unselected word.
GuessPlan RandomGuess(const PlayerView& view, Rng& rng);

class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed, WordList vocabulary = CanonicalWordList());
  std::string name() const override { return "random"; }
  ClueDecision GiveClue(const PlayerView& view) override;
  GuessPlan Guess(const PlayerView& view) override;

 private:
  WordList vocabulary_;
  Rng rng_;
};

// Unselected words by descending cosine to `clue`, ties lexicographic; top k.
std::vector<std::string> VectorGuesserRank(const PlayerView& view, std::string_view clue,
                                           std::size_t k, const VectorStore& store);
std::vector<std::pair<std::string, double>> RankWords(std::span<const std::string> words,
                                                      std::string_view clue,
                                                      const VectorStore& store);

enum class ClueScoring { kMin, kMean };

struct ClueSearchOptions {
  std::size_t max_targets = 1;
  ClueScoring scoring = ClueScoring::kMin;
};

struct ClueCandidate {
  std::vector<std::string> targets;  // board order
  std::string clue;
  double score = 0.0;
};

// Alphabetic single tokens of the store, in file order, capped at `cap`.
std::vector<std::string> ClueVocabulary(const VectorStore& store, std::size_t cap = 20000);

// Exhaustive search over target subsets (size <= max_targets) of the
// giver's uncovered goals and over `vocabulary`. score = aggregate cosine
// to the targets minus the largest cosine to an unselected avoid or
// neutral word of the giver. Ties prefer more targets, then the
// lexicographically smaller clue, then smaller targets.
ClueCandidate VectorClueSearch(const PlayerView& view, std::span<const std::string> vocabulary,
                               const VectorStore& store, const ClueSearchOptions& options = {});

class VectorAgent : public Agent {
 public:
  VectorAgent(std::shared_ptr<const VectorStore> store, ClueSearchOptions options = {},
              std::size_t vocabulary_cap = 20000);
  std::string name() const override { return "vector"; }
  ClueDecision GiveClue(const PlayerView& view) override;
  // Guesses the clue's target count from the top of the ranking.
  GuessPlan Guess(const PlayerView& view) override;

 private:
  std::shared_ptr<const VectorStore> store_;
  ClueSearchOptions options_;
  std::vector<std::string> vocabulary_;
};

struct ExternalOptions {
  Endpoint endpoint;
  std::chrono::milliseconds budget{2000};
  int retries = 2;
  Ablation ablation = Ablation::kNone;
  std::uint64_t fallback_seed = 0;
};

// Talks the line-delimited JSON agent protocol: the giver asks for
// TARGET_SELECTION, CLUE_GEN and one CLUE_FRAMING per target, the guesser
// for GUESS_SELECTION and one GUESS_FRAMING per guess. An illegal,
// malformed or late answer is retried `retries` times; after that the
// decision comes from a RandomAgent and a "fallback" event is recorded.
class ExternalAgent : public Agent {
 public:
  explicit ExternalAgent(ExternalOptions options);
  std::string name() const override { return "external"; }
  ClueDecision GiveClue(const PlayerView& view) override;
  GuessPlan Guess(const PlayerView& view) override;

  // Profiles rendered into the sociocultural prefix of every request.
  void SetProfiles(const SocioProfile& self, const SocioProfile& partner);

 private:
  std::string Ask(Task task, const std::string& input);
  std::string Prefixed(const PlayerView& view, const std::string& body) const;

  ExternalOptions options_;
  LineClient client_;
  RandomAgent fallback_;
  SocioProfile self_;
  SocioProfile partner_;
  std::uint64_t next_id_ = 1;
};

// Normalizer speaking the same line protocol ({"type": "normalize", ...}).
// The request carries the prompt template with its slots filled in.
class ExternalNormalizer : public Normalizer {
 public:
  ExternalNormalizer(Endpoint endpoint, std::chrono::milliseconds budget);
  std::string Normalize(const NormalizeRequest& request) override;

 private:
  LineClient client_;
  std::chrono::milliseconds budget_;
  std::uint64_t next_id_ = 1;
};

// "random", "vector", "vector:2" (max targets), "vector:2:mean",
// "external:host:port".
struct AgentSpec {
  std::string kind = "random";
  std::size_t max_targets = 1;
  ClueScoring scoring = ClueScoring::kMin;
  Endpoint endpoint;

  static AgentSpec Parse(std::string_view text);
  std::string ToString() const;
};

std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec, std::uint64_t seed,
                                 std::shared_ptr<const VectorStore> store,
                                 std::chrono::milliseconds budget = std::chrono::milliseconds(2000));

}  // namespace duet

#endif  // DUET_AGENTS_H_
