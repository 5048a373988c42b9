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

#ifndef DUET_GAME_H_
#define DUET_GAME_H_

#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "duet/word_bank.h"

namespace duet {

using PlayerId = int;
inline constexpr int kNumPlayers = 2;
inline constexpr PlayerId Partner(PlayerId p) { return 1 - p; }
inline constexpr bool IsPlayer(PlayerId p) { return p == 0 || p == 1; }

inline constexpr int kGoalCount = 9;
inline constexpr int kAvoidCount = 3;
inline constexpr int kNeutralCount = 13;
inline constexpr int kDefaultTurnCap = 25;
// An abandoned game is kept when at least this many turns were completed.
inline constexpr int kMinQualifyingTurns = 7;

enum class Role : std::uint8_t { kGoal, kAvoid, kNeutral };
enum class GuessOutcome : std::uint8_t { kPartnerGoal, kNeutral, kPartnerAvoid };
enum class Phase : std::uint8_t { kAwaitClue, kAwaitGuess, kWon, kLost };

std::string_view ToString(Role role);
std::string_view ToString(GuessOutcome outcome);
std::string_view ToString(Phase phase);
Role ParseRole(std::string_view s);
GuessOutcome ParseGuessOutcome(std::string_view s);
Phase ParsePhase(std::string_view s);

// One player's secret role for every board word, aligned with the board.
class KeyCard {
 public:
  KeyCard() = default;
  // Throws ValidationError unless the counts are exactly 9/3/13.
  KeyCard(const Board& board, std::vector<Role> roles);

  // Uniform random 9/3/13 assignment.
  static KeyCard Sample(const Board& board, std::uint64_t seed);

  Role RoleAt(std::size_t board_index) const { return roles_.at(board_index); }
  // Throws ValidationError for words not on the board.
  Role RoleOf(std::string_view word) const;
  const std::vector<Role>& roles() const { return roles_; }
  const std::vector<std::string>& words() const { return words_; }
  // Words having `role`, in board order.
  std::vector<std::string> WordsWith(Role role) const;

  bool operator==(const KeyCard&) const = default;

 private:
  std::vector<std::string> words_;
  std::vector<Role> roles_;
};

struct GuessRecord {
  std::string word;
  std::string rationale;
  GuessOutcome outcome = GuessOutcome::kNeutral;

  bool operator==(const GuessRecord&) const = default;
};

struct TurnRecord {
  PlayerId giver = 0;
  std::string clue;
  std::vector<std::string> targets;
  std::vector<std::string> target_rationales;
  std::vector<GuessRecord> guesses;
  std::vector<bool> intentional;  // parallel to guesses

  bool operator==(const TurnRecord&) const = default;
};

struct ClueRules {
  // Also forbid a clue that is a prefix or suffix of an unselected word.
  bool strict = false;

  bool operator==(const ClueRules&) const = default;
};

struct GameConfig {
  int turn_cap = kDefaultTurnCap;
  PlayerId first_giver = 0;
  ClueRules clue_rules;

  bool operator==(const GameConfig&) const = default;
};

// Immutable game value. The free functions below return successor states;
// they throw RuleViolation for illegal actions and leave the input intact.
class GameState {
 public:
  const Board& board() const { return board_; }
  const KeyCard& key_card(PlayerId p) const { return key_cards_.at(p); }
  Phase phase() const { return phase_; }
  bool IsTerminal() const { return phase_ == Phase::kWon || phase_ == Phase::kLost; }
  PlayerId active_giver() const { return active_giver_; }
  PlayerId active_guesser() const { return Partner(active_giver_); }
  int completed_turns() const { return completed_turns_; }
  const GameConfig& config() const { return config_; }
  const std::vector<TurnRecord>& turns() const { return turns_; }

  // A board word is covered once any guess hits a goal on the giver's card.
  bool IsCovered(std::size_t board_index) const;
  // (word, side) goal pairs revealed so far; at most 18.
  int CoveredGoalPairs() const;
  bool IsGoalCovered(std::size_t board_index, PlayerId side) const {
    return covered_goal_[side].test(board_index);
  }
  // Words `guesser` marked neutral; they stay guessable for the partner.
  bool IsNeutralMarked(std::size_t board_index, PlayerId guesser) const {
    return neutral_marks_[guesser].test(board_index);
  }

  // Board words minus covered words minus `guesser`'s own neutral marks,
  // in board order. This is the single "unselected" definition used for
  // guess legality and for encoder inputs.
  std::vector<std::string> Unselected(PlayerId guesser) const;
  // Goal words on `owner`'s card not yet covered, in board order.
  std::vector<std::string> UncoveredGoals(PlayerId owner) const;

  bool operator==(const GameState&) const = default;

 private:
  friend GameState NewGameWithKeys(const Board&, KeyCard, KeyCard, const GameConfig&);
  friend GameState SubmitClue(const GameState&, std::string_view,
                              const std::vector<std::string>&,
                              const std::vector<std::string>&);
  friend std::pair<GameState, GuessOutcome> SubmitGuess(const GameState&,
                                                        std::string_view,
                                                        std::string_view);
  friend GameState EndTurn(const GameState&);

  // Counts the open turn as completed and hands over the clue.
  void FinishTurn();

  Board board_;
  std::vector<KeyCard> key_cards_;
  std::bitset<kBoardSize> covered_goal_[kNumPlayers];
  std::bitset<kBoardSize> neutral_marks_[kNumPlayers];
  std::vector<TurnRecord> turns_;
  Phase phase_ = Phase::kAwaitClue;
  PlayerId active_giver_ = 0;
  int completed_turns_ = 0;
  GameConfig config_;
};

// Samples both key cards independently from `seed`.
GameState NewGame(const Board& board, std::uint64_t seed, const GameConfig& config = {});
GameState NewGameWithKeys(const Board& board, KeyCard first, KeyCard second,
                          const GameConfig& config = {});

// Returns a human-readable rule violation, or nullopt when the clue is legal
// for the current guesser.
std::optional<std::string> CheckClue(const GameState& state, std::string_view clue);
// Same rule against an explicit unselected set.
std::optional<std::string> CheckClueWords(std::string_view clue,
                                          std::span<const std::string> unselected,
                                          const ClueRules& rules);

GameState SubmitClue(const GameState& state, std::string_view clue,
                     const std::vector<std::string>& targets,
                     const std::vector<std::string>& rationales);
std::pair<GameState, GuessOutcome> SubmitGuess(const GameState& state, std::string_view word,
                                               std::string_view rationale);
// Legal only after at least one guess this turn.
GameState EndTurn(const GameState& state);

// Applies a recorded turn: clue, guesses in order, then end_turn if the turn
// is still open after the last guess.
GameState ApplyTurn(const GameState& state, const TurnRecord& turn);

// true iff the guessed word is one of the giver's targets.
std::vector<bool> LabelIntentionality(const TurnRecord& turn);

struct PublicGuess {
  std::string word;
  GuessOutcome outcome = GuessOutcome::kNeutral;
  std::optional<std::string> rationale;  // viewer's own, or after game end
};

struct PublicTurn {
  PlayerId giver = 0;
  std::string clue;
  int target_count = 0;
  std::vector<PublicGuess> guesses;
  // Present only when the viewer gave this clue, or after the game ended.
  std::optional<std::vector<std::string>> targets;
  std::optional<std::vector<std::string>> target_rationales;
};

// What one player may see. Partner roles and partner-authored hidden fields
// are absent (not blanked) until the game is over.
struct PlayerView {
  PlayerId player = 0;
  Phase phase = Phase::kAwaitClue;
  PlayerId active_giver = 0;
  int completed_turns = 0;
  int turn_cap = kDefaultTurnCap;
  bool strict_clues = false;
  std::vector<std::string> board;
  std::vector<Role> own_key;
  std::optional<std::vector<Role>> partner_key;
  std::vector<std::string> covered;
  std::vector<std::string> neutral_marks[kNumPlayers];
  std::vector<PublicTurn> history;

  bool IsGiver() const { return active_giver == player; }
  bool IsTerminal() const { return phase == Phase::kWon || phase == Phase::kLost; }
  // Derived from public marks, same definition as GameState::Unselected.
  std::vector<std::string> UnselectedFor(PlayerId guesser) const;
  // Own goal words not yet covered.
  std::vector<std::string> OwnUncoveredGoals() const;
  // Current clue and target count while a guess is awaited.
  std::optional<std::pair<std::string, int>> CurrentClue() const;
};

PlayerView ViewFor(const GameState& state, PlayerId player);

}  // namespace duet

#endif  // DUET_GAME_H_
