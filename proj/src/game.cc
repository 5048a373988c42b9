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

#include "duet/game.h"

#include <algorithm>
#include <unordered_set>

#include "duet/error.h"
#include "duet/rng.h"
#include "duet/text.h"

namespace duet {
namespace {

std::size_t IndexOrThrow(const Board& board, std::string_view word) {
  std::size_t idx = board.IndexOf(word);
  if (idx >= board.words.size())
    throw RuleViolation("'" + std::string(word) + "' is not a board word");
  return idx;
}

}  // namespace

std::string_view ToString(Role role) {
  switch (role) {
    case Role::kGoal: return "GOAL";
    case Role::kAvoid: return "AVOID";
    case Role::kNeutral: return "NEUTRAL";
  }
  return "?";
}

std::string_view ToString(GuessOutcome outcome) {
  switch (outcome) {
    case GuessOutcome::kPartnerGoal: return "PARTNER_GOAL";
    case GuessOutcome::kNeutral: return "NEUTRAL";
    case GuessOutcome::kPartnerAvoid: return "PARTNER_AVOID";
  }
  return "?";
}

std::string_view ToString(Phase phase) {
  switch (phase) {
    case Phase::kAwaitClue: return "AWAIT_CLUE";
    case Phase::kAwaitGuess: return "AWAIT_GUESS";
    case Phase::kWon: return "WON";
    case Phase::kLost: return "LOST";
  }
  return "?";
}

Role ParseRole(std::string_view s) {
  if (s == "GOAL") return Role::kGoal;
  if (s == "AVOID") return Role::kAvoid;
  if (s == "NEUTRAL") return Role::kNeutral;
  throw ValidationError("unknown role '" + std::string(s) + "'");
}

GuessOutcome ParseGuessOutcome(std::string_view s) {
  if (s == "PARTNER_GOAL") return GuessOutcome::kPartnerGoal;
  if (s == "NEUTRAL") return GuessOutcome::kNeutral;
  if (s == "PARTNER_AVOID") return GuessOutcome::kPartnerAvoid;
  throw ValidationError("unknown guess outcome '" + std::string(s) + "'");
}

Phase ParsePhase(std::string_view s) {
  if (s == "AWAIT_CLUE") return Phase::kAwaitClue;
  if (s == "AWAIT_GUESS") return Phase::kAwaitGuess;
  if (s == "WON") return Phase::kWon;
  if (s == "LOST") return Phase::kLost;
  throw ValidationError("unknown phase '" + std::string(s) + "'");
}

KeyCard::KeyCard(const Board& board, std::vector<Role> roles)
    : words_(board.words), roles_(std::move(roles)) {
  if (roles_.size() != words_.size())
    throw ValidationError("key card must assign a role to every board word");
  auto count = [&](Role r) { return std::count(roles_.begin(), roles_.end(), r); };
  if (count(Role::kGoal) != kGoalCount || count(Role::kAvoid) != kAvoidCount ||
      count(Role::kNeutral) != kNeutralCount)
    throw ValidationError("key card must have 9 goal, 3 avoid and 13 neutral words");
}

KeyCard KeyCard::Sample(const Board& board, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Role> roles(board.words.size(), Role::kNeutral);
  std::vector<std::size_t> picks = rng.SampleIndices(board.words.size(), kGoalCount + kAvoidCount);
  for (std::size_t i = 0; i < picks.size(); ++i)
    roles[picks[i]] = i < kGoalCount ? Role::kGoal : Role::kAvoid;
  return KeyCard(board, std::move(roles));
}

Role KeyCard::RoleOf(std::string_view word) const {
  auto it = std::find(words_.begin(), words_.end(), word);
  if (it == words_.end())
    throw ValidationError("'" + std::string(word) + "' is not on this key card");
  return roles_[static_cast<std::size_t>(it - words_.begin())];
}

std::vector<std::string> KeyCard::WordsWith(Role role) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < roles_.size(); ++i)
    if (roles_[i] == role) out.push_back(words_[i]);
  return out;
}

bool GameState::IsCovered(std::size_t board_index) const {
  return covered_goal_[0].test(board_index) || covered_goal_[1].test(board_index);
}

int GameState::CoveredGoalPairs() const {
  return static_cast<int>(covered_goal_[0].count() + covered_goal_[1].count());
}

std::vector<std::string> GameState::Unselected(PlayerId guesser) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < board_.words.size(); ++i)
    if (!IsCovered(i) && !neutral_marks_[guesser].test(i)) out.push_back(board_.words[i]);
  return out;
}

std::vector<std::string> GameState::UncoveredGoals(PlayerId owner) const {
  std::vector<std::string> out;
  const KeyCard& card = key_cards_[owner];
  for (std::size_t i = 0; i < board_.words.size(); ++i)
    if (card.RoleAt(i) == Role::kGoal && !covered_goal_[owner].test(i))
      out.push_back(board_.words[i]);
  return out;
}

void GameState::FinishTurn() {
  ++completed_turns_;
  if (phase_ == Phase::kWon || phase_ == Phase::kLost) return;
  if (completed_turns_ >= config_.turn_cap) {
    phase_ = Phase::kLost;
    return;
  }
  // Alternate, unless the partner has nothing left to clue for.
  PlayerId next = Partner(active_giver_);
  if (UncoveredGoals(next).empty()) next = active_giver_;
  active_giver_ = next;
  phase_ = Phase::kAwaitClue;
}

GameState NewGameWithKeys(const Board& board, KeyCard first, KeyCard second,
                          const GameConfig& config) {
  if (board.words.size() != kBoardSize)
    throw ValidationError("board must have 25 words");
  if (config.turn_cap <= 0) throw ValidationError("turn_cap must be positive");
  if (!IsPlayer(config.first_giver)) throw ValidationError("first_giver must be 0 or 1");
  if (first.words() != board.words || second.words() != board.words)
    throw ValidationError("key cards do not match the board");
  GameState state;
  state.board_ = board;
  state.key_cards_ = {std::move(first), std::move(second)};
  state.config_ = config;
  state.active_giver_ = config.first_giver;
  return state;
}

GameState NewGame(const Board& board, std::uint64_t seed, const GameConfig& config) {
  if (board.words.size() != kBoardSize)
    throw ValidationError("board must have 25 words");
  return NewGameWithKeys(board, KeyCard::Sample(board, ForkSeed(seed, "key_card", 0)),
                         KeyCard::Sample(board, ForkSeed(seed, "key_card", 1)), config);
}

std::optional<std::string> CheckClueWords(std::string_view clue,
                                          std::span<const std::string> unselected,
                                          const ClueRules& rules) {
  if (!IsLowerAlpha(clue)) return "clue must be a single lowercase alphabetic word";
  for (const auto& word : unselected) {
    if (word == clue) return "clue '" + std::string(clue) + "' is an unselected board word";
    if (rules.strict && (word.starts_with(clue) || word.ends_with(clue)))
      return "clue '" + std::string(clue) + "' is a prefix or suffix of board word '" + word +
             "'";
  }
  return std::nullopt;
}

std::optional<std::string> CheckClue(const GameState& state, std::string_view clue) {
  return CheckClueWords(clue, state.Unselected(state.active_guesser()), state.config().clue_rules);
}

GameState SubmitClue(const GameState& state, std::string_view clue,
                     const std::vector<std::string>& targets,
                     const std::vector<std::string>& rationales) {
  if (state.phase_ != Phase::kAwaitClue)
    throw RuleViolation("cannot give a clue in phase " + std::string(ToString(state.phase_)));
  if (targets.empty()) throw RuleViolation("at least one target is required");
  if (rationales.size() != targets.size())
    throw RuleViolation("expected one rationale per target");
  const PlayerId giver = state.active_giver_;
  const KeyCard& card = state.key_cards_[giver];
  std::unordered_set<std::string_view> seen;
  for (const auto& t : targets) {
    std::size_t idx = IndexOrThrow(state.board_, t);
    if (!seen.insert(t).second) throw RuleViolation("duplicate target '" + t + "'");
    if (card.RoleAt(idx) != Role::kGoal)
      throw RuleViolation("target '" + t + "' is not one of the giver's goal words");
    if (state.covered_goal_[giver].test(idx))
      throw RuleViolation("target '" + t + "' is already covered");
  }
  if (auto violation = CheckClue(state, clue)) throw RuleViolation(*violation);

  GameState next = state;
  TurnRecord turn;
  turn.giver = giver;
  turn.clue = std::string(clue);
  turn.targets = targets;
  turn.target_rationales = rationales;
  next.turns_.push_back(std::move(turn));
  next.phase_ = Phase::kAwaitGuess;
  return next;
}

std::pair<GameState, GuessOutcome> SubmitGuess(const GameState& state, std::string_view word,
                                               std::string_view rationale) {
  if (state.phase_ != Phase::kAwaitGuess)
    throw RuleViolation("cannot guess in phase " + std::string(ToString(state.phase_)));
  const PlayerId giver = state.active_giver_;
  const PlayerId guesser = Partner(giver);
  std::size_t idx = IndexOrThrow(state.board_, word);
  if (state.IsCovered(idx))
    throw RuleViolation("'" + std::string(word) + "' is already covered");
  if (state.neutral_marks_[guesser].test(idx))
    throw RuleViolation("'" + std::string(word) + "' was already marked neutral by this guesser");

  GameState next = state;
  TurnRecord& turn = next.turns_.back();
  GuessOutcome outcome;
  switch (next.key_cards_[giver].RoleAt(idx)) {
    case Role::kGoal: outcome = GuessOutcome::kPartnerGoal; break;
    case Role::kAvoid: outcome = GuessOutcome::kPartnerAvoid; break;
    default: outcome = GuessOutcome::kNeutral; break;
  }
  turn.guesses.push_back({std::string(word), std::string(rationale), outcome});
  turn.intentional.push_back(std::find(turn.targets.begin(), turn.targets.end(), word) !=
                             turn.targets.end());

  switch (outcome) {
    case GuessOutcome::kPartnerGoal: {
      // A covered word leaves both boards, so a word that is goal on both
      // cards is credited to both sides at once.
      next.covered_goal_[giver].set(idx);
      if (next.key_cards_[guesser].RoleAt(idx) == Role::kGoal) next.covered_goal_[guesser].set(idx);
      if (next.UncoveredGoals(0).empty() && next.UncoveredGoals(1).empty()) {
        next.phase_ = Phase::kWon;
        next.FinishTurn();
      }
      break;
    }
    case GuessOutcome::kNeutral:
      next.neutral_marks_[guesser].set(idx);
      next.FinishTurn();
      break;
    case GuessOutcome::kPartnerAvoid:
      next.phase_ = Phase::kLost;
      next.FinishTurn();
      break;
  }
  return {std::move(next), outcome};
}

GameState EndTurn(const GameState& state) {
  if (state.phase_ != Phase::kAwaitGuess)
    throw RuleViolation("cannot end the turn in phase " + std::string(ToString(state.phase_)));
  if (state.turns_.back().guesses.empty())
    throw RuleViolation("at least one guess is required before ending the turn");
  GameState next = state;
  next.FinishTurn();
  return next;
}

GameState ApplyTurn(const GameState& state, const TurnRecord& turn) {
  if (turn.giver != state.active_giver())
    throw RuleViolation("recorded giver " + std::to_string(turn.giver) +
                        " does not match active giver " + std::to_string(state.active_giver()));
  GameState s = SubmitClue(state, turn.clue, turn.targets, turn.target_rationales);
  for (const auto& g : turn.guesses) {
    if (s.phase() != Phase::kAwaitGuess)
      throw RuleViolation("recorded guess '" + g.word + "' after the turn ended");
    auto [after, outcome] = SubmitGuess(s, g.word, g.rationale);
    if (outcome != g.outcome)
      throw RuleViolation("recorded outcome for '" + g.word + "' is " +
                          std::string(ToString(g.outcome)) + " but replay gives " +
                          std::string(ToString(outcome)));
    s = std::move(after);
  }
  if (s.phase() == Phase::kAwaitGuess) s = EndTurn(s);
  return s;
}

std::vector<bool> LabelIntentionality(const TurnRecord& turn) {
  std::vector<bool> labels;
  labels.reserve(turn.guesses.size());
  for (const auto& g : turn.guesses)
    labels.push_back(std::find(turn.targets.begin(), turn.targets.end(), g.word) !=
                     turn.targets.end());
  return labels;
}

std::vector<std::string> PlayerView::UnselectedFor(PlayerId guesser) const {
  std::vector<std::string> out;
  for (const auto& w : board) {
    bool gone = std::find(covered.begin(), covered.end(), w) != covered.end() ||
                std::find(neutral_marks[guesser].begin(), neutral_marks[guesser].end(), w) !=
                    neutral_marks[guesser].end();
    if (!gone) out.push_back(w);
  }
  return out;
}

std::vector<std::string> PlayerView::OwnUncoveredGoals() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < board.size(); ++i)
    if (own_key[i] == Role::kGoal &&
        std::find(covered.begin(), covered.end(), board[i]) == covered.end())
      out.push_back(board[i]);
  return out;
}

std::optional<std::pair<std::string, int>> PlayerView::CurrentClue() const {
  if (phase != Phase::kAwaitGuess || history.empty()) return std::nullopt;
  return std::make_pair(history.back().clue, history.back().target_count);
}

PlayerView ViewFor(const GameState& state, PlayerId player) {
  if (!IsPlayer(player))
    throw ValidationError("unknown player " + std::to_string(player));
  const bool reveal = state.IsTerminal();
  PlayerView view;
  view.player = player;
  view.phase = state.phase();
  view.active_giver = state.active_giver();
  view.completed_turns = state.completed_turns();
  view.turn_cap = state.config().turn_cap;
  view.strict_clues = state.config().clue_rules.strict;
  view.board = state.board().words;
  view.own_key = state.key_card(player).roles();
  if (reveal) view.partner_key = state.key_card(Partner(player)).roles();
  for (std::size_t i = 0; i < kBoardSize; ++i) {
    if (state.IsCovered(i)) view.covered.push_back(state.board().words[i]);
    for (PlayerId p = 0; p < kNumPlayers; ++p)
      if (state.IsNeutralMarked(i, p)) view.neutral_marks[p].push_back(state.board().words[i]);
  }
  for (const auto& turn : state.turns()) {
    PublicTurn pub;
    pub.giver = turn.giver;
    pub.clue = turn.clue;
    pub.target_count = static_cast<int>(turn.targets.size());
    const bool own_clue = turn.giver == player;
    if (reveal || own_clue) {
      pub.targets = turn.targets;
      pub.target_rationales = turn.target_rationales;
    }
    for (const auto& g : turn.guesses) {
      PublicGuess pg{g.word, g.outcome, std::nullopt};
      if (reveal || !own_clue) pg.rationale = g.rationale;
      pub.guesses.push_back(std::move(pg));
    }
    view.history.push_back(std::move(pub));
  }
  return view;
}

}  // namespace duet
