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

#include "duet/agents.h"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

#include "duet/error.h"
#include "duet/rationale.h"
#include "duet/records.h"
#include "duet/text.h"

namespace duet {
namespace {

bool Contains(std::span<const std::string> words, std::string_view w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

std::vector<std::string> OwnWordsWith(const PlayerView& view, Role role,
                                      std::span<const std::string> among) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < view.board.size(); ++i)
    if (view.own_key[i] == role && Contains(among, view.board[i])) out.push_back(view.board[i]);
  return out;
}

std::vector<std::string> InBoardOrder(const PlayerView& view, std::vector<std::string> words) {
  auto pos = [&](const std::string& w) {
    return std::find(view.board.begin(), view.board.end(), w) - view.board.begin();
  };
  std::stable_sort(words.begin(), words.end(),
                   [&](const std::string& a, const std::string& b) { return pos(a) < pos(b); });
  return words;
}

// Calls f(subset) for every subset of `items` with 1..max_size elements.
template <typename F>
void ForEachSubset(std::span<const std::string> items, std::size_t max_size, F&& f) {
  std::vector<std::size_t> idx;
  std::vector<std::string> subset;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (!idx.empty()) {
      subset.clear();
      for (std::size_t i : idx) subset.push_back(items[i]);
      f(subset);
    }
    if (idx.size() == max_size) return;
    for (std::size_t i = start; i < items.size(); ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  rec(rec, 0);
}

std::string JoinDecoded(std::string_view output) {
  std::vector<std::string> t = DecodeOutputTokens(output);
  return Join(t, " ");
}

}  // namespace

std::optional<std::string> CheckClueFromView(const PlayerView& view, std::string_view clue) {
  ClueRules rules;
  rules.strict = view.strict_clues;
  return CheckClueWords(clue, view.UnselectedFor(Partner(view.player)), rules);
}

void ValidateClueDecision(const PlayerView& view, const ClueDecision& d) {
  if (d.targets.empty()) throw RuleViolation("no targets chosen");
  if (d.rationales.size() != d.targets.size())
    throw RuleViolation("expected one rationale per target");
  std::vector<std::string> goals = view.OwnUncoveredGoals();
  for (std::size_t i = 0; i < d.targets.size(); ++i) {
    if (!Contains(goals, d.targets[i]))
      throw RuleViolation("target '" + d.targets[i] + "' is not an uncovered goal word");
    if (std::find(d.targets.begin(), d.targets.begin() + i, d.targets[i]) !=
        d.targets.begin() + i)
      throw RuleViolation("duplicate target '" + d.targets[i] + "'");
  }
  if (auto why = CheckClueFromView(view, d.clue)) throw RuleViolation(*why);
}

void ValidateGuessPlan(const PlayerView& view, const GuessPlan& plan) {
  if (plan.guesses.empty()) throw RuleViolation("no guesses planned");
  std::vector<std::string> unselected = view.UnselectedFor(view.player);
  for (std::size_t i = 0; i < plan.guesses.size(); ++i) {
    const std::string& w = plan.guesses[i].word;
    if (!Contains(unselected, w)) throw RuleViolation("'" + w + "' is not an unselected word");
    for (std::size_t j = 0; j < i; ++j)
      if (plan.guesses[j].word == w) throw RuleViolation("'" + w + "' guessed twice");
  }
}

ClueDecision RandomClue(const PlayerView& view, const WordList& vocabulary, Rng& rng) {
  std::vector<std::string> goals = view.OwnUncoveredGoals();
  if (goals.empty()) throw ValidationError("giver has no uncovered goal words");
  std::vector<std::string> legal;
  for (const auto& w : vocabulary.words())
    if (!CheckClueFromView(view, w)) legal.push_back(w);
  if (legal.empty()) throw ValidationError("no legal clue in the vocabulary");
  ClueDecision d;
  d.targets = {goals[rng.Below(goals.size())]};
  d.clue = legal[rng.Below(legal.size())];
  Relation r = kAllRelations[rng.Below(kAllRelations.size())];
  d.rationales = {RenderRationale(r, d.clue, d.targets[0])};
  return d;
}

GuessPlan RandomGuess(const PlayerView& view, Rng& rng) {
  std::vector<std::string> unselected = view.UnselectedFor(view.player);
  if (unselected.empty()) throw ValidationError("nothing left to guess");
  GuessPlan plan;
  std::string word = unselected[rng.Below(unselected.size())];
  std::string clue = view.CurrentClue() ? view.CurrentClue()->first : std::string();
  Relation r = kAllRelations[rng.Below(kAllRelations.size())];
  plan.guesses.push_back({word, RenderRationale(r, word, clue)});
  return plan;
}

RandomAgent::RandomAgent(std::uint64_t seed, WordList vocabulary)
    : vocabulary_(std::move(vocabulary)), rng_(seed) {}

ClueDecision RandomAgent::GiveClue(const PlayerView& view) {
  return RandomClue(view, vocabulary_, rng_);
}

GuessPlan RandomAgent::Guess(const PlayerView& view) { return RandomGuess(view, rng_); }

std::vector<std::pair<std::string, double>> RankWords(std::span<const std::string> words,
                                                      std::string_view clue,
                                                      const VectorStore& store) {
  std::vector<std::pair<std::string, double>> scored;
  for (const auto& w : words) scored.emplace_back(w, store.Cosine(clue, w));
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return scored;
}

std::vector<std::string> VectorGuesserRank(const PlayerView& view, std::string_view clue,
                                           std::size_t k, const VectorStore& store) {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (clue.empty()) throw ValidationError("empty clue");
  std::vector<std::string> unselected = view.UnselectedFor(view.player);
  if (unselected.empty()) throw ValidationError("no unselected words to rank");
  auto ranked = RankWords(unselected, clue, store);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].first);
  return out;
}

std::vector<std::string> ClueVocabulary(const VectorStore& store, std::size_t cap) {
  std::vector<std::string> out;
  for (const auto& w : store.words()) {
    if (out.size() >= cap) break;
    if (IsLowerAlpha(w)) out.push_back(w);
  }
  return out;
}

ClueCandidate VectorClueSearch(const PlayerView& view, std::span<const std::string> vocabulary,
                               const VectorStore& store, const ClueSearchOptions& options) {
  if (options.max_targets == 0) throw ValidationError("max_targets must be at least 1");
  std::vector<std::string> goals = view.OwnUncoveredGoals();
  if (goals.empty()) throw ValidationError("giver has no uncovered goal words");
  std::vector<std::string> unselected = view.UnselectedFor(Partner(view.player));
  std::vector<std::string> bad = OwnWordsWith(view, Role::kAvoid, unselected);
  for (auto& w : OwnWordsWith(view, Role::kNeutral, unselected)) bad.push_back(std::move(w));

  std::vector<std::string> legal;
  for (const auto& w : vocabulary)
    if (!CheckClueFromView(view, w)) legal.push_back(w);
  if (legal.empty()) throw ValidationError("no legal clue in the vocabulary");

  // Cosine tables: legal clue x goal, and the worst bad word per clue.
  std::vector<std::vector<double>> to_goal(legal.size(), std::vector<double>(goals.size()));
  std::vector<double> worst_bad(legal.size(), 0.0);
  for (std::size_t c = 0; c < legal.size(); ++c) {
    for (std::size_t g = 0; g < goals.size(); ++g) to_goal[c][g] = store.Cosine(legal[c], goals[g]);
    double worst = bad.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
    for (const auto& b : bad) worst = std::max(worst, store.Cosine(legal[c], b));
    worst_bad[c] = worst;
  }

  std::optional<ClueCandidate> best;
  auto better = [](const ClueCandidate& a, const ClueCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.targets.size() != b.targets.size()) return a.targets.size() > b.targets.size();
    if (a.clue != b.clue) return a.clue < b.clue;
    return a.targets < b.targets;
  };
  std::vector<std::size_t> goal_idx;
  ForEachSubset(goals, options.max_targets, [&](const std::vector<std::string>& subset) {
    goal_idx.clear();
    for (const auto& t : subset)
      goal_idx.push_back(static_cast<std::size_t>(std::find(goals.begin(), goals.end(), t) -
                                                  goals.begin()));
    for (std::size_t c = 0; c < legal.size(); ++c) {
      double agg = options.scoring == ClueScoring::kMin
                       ? std::numeric_limits<double>::infinity()
                       : 0.0;
      for (std::size_t g : goal_idx) {
        if (options.scoring == ClueScoring::kMin) agg = std::min(agg, to_goal[c][g]);
        else agg += to_goal[c][g];
      }
      if (options.scoring == ClueScoring::kMean) agg /= double(goal_idx.size());
      ClueCandidate cand{subset, legal[c], agg - worst_bad[c]};
      if (!best || better(cand, *best)) best = std::move(cand);
    }
  });
  best->targets = InBoardOrder(view, best->targets);
  return *best;
}

VectorAgent::VectorAgent(std::shared_ptr<const VectorStore> store, ClueSearchOptions options,
                         std::size_t vocabulary_cap)
    : store_(std::move(store)), options_(options) {
  if (!store_) throw ValidationError("vector agent needs a vector store");
  vocabulary_ = ClueVocabulary(*store_, vocabulary_cap);
}

ClueDecision VectorAgent::GiveClue(const PlayerView& view) {
  ClueCandidate best = VectorClueSearch(view, vocabulary_, *store_, options_);
  ClueDecision d;
  d.targets = best.targets;
  d.clue = best.clue;
  for (const auto& t : d.targets) d.rationales.push_back(RenderRationale(Relation::kSynonym, d.clue, t));
  return d;
}

GuessPlan VectorAgent::Guess(const PlayerView& view) {
  auto current = view.CurrentClue();
  if (!current) throw ValidationError("no clue to guess from");
  const auto& [clue, count] = *current;
  GuessPlan plan;
  for (const auto& w :
       VectorGuesserRank(view, clue, static_cast<std::size_t>(std::max(1, count)), *store_))
    plan.guesses.push_back({w, RenderRationale(Relation::kSynonym, w, clue)});
  return plan;
}

ExternalAgent::ExternalAgent(ExternalOptions options)
    : options_(std::move(options)),
      client_(options_.endpoint, options_.budget),
      fallback_(options_.fallback_seed) {}

void ExternalAgent::SetProfiles(const SocioProfile& self, const SocioProfile& partner) {
  self_ = self;
  partner_ = partner;
}

std::string ExternalAgent::Prefixed(const PlayerView& view, const std::string& body) const {
  const bool giver = view.IsGiver();
  return WithPrefix(SocioPrefix(giver ? self_ : partner_, giver ? partner_ : self_,
                                options_.ablation),
                    body);
}

std::string ExternalAgent::Ask(Task task, const std::string& input) {
  const std::uint64_t id = next_id_++;
  Json req;
  req["type"] = "agent";
  req["id"] = id;
  req["task"] = ToString(task);
  req["input"] = input;
  req["budget_ms"] = options_.budget.count();
  std::string line;
  try {
    client_.SendLine(req.dump());
    line = client_.ReadLine(options_.budget);
  } catch (const EndpointError& e) {
    events_.push_back({"timeout", e.what()});
    throw;
  }
  Json resp;
  try {
    resp = Json::parse(line);
  } catch (const Json::parse_error&) {
    events_.push_back({"malformed", "response is not JSON"});
    throw EndpointError("malformed response from " + options_.endpoint.ToString());
  }
  if (!resp.is_object() || !resp.contains("output") || !resp["output"].is_string() ||
      resp.value("id", std::uint64_t{0}) != id) {
    std::string why = resp.is_object() && resp.contains("error") ? resp["error"].dump()
                                                                 : "missing id or output";
    events_.push_back({"malformed", why});
    throw EndpointError("malformed response from " + options_.endpoint.ToString());
  }
  return resp["output"].get<std::string>();
}

ClueDecision ExternalAgent::GiveClue(const PlayerView& view) {
  const std::vector<std::string> goals = view.OwnUncoveredGoals();
  const std::vector<std::string> unselected = view.UnselectedFor(Partner(view.player));
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) events_.push_back({"retry", "clue attempt " + std::to_string(attempt + 1)});
    try {
      ClueDecision d;
      d.targets = InBoardOrder(
          view, DecodeOutputTokens(Ask(Task::kTargetSelection,
                                       Prefixed(view, EncodeTargetSelectionInput(goals)))));
      if (d.targets.empty()) throw RuleViolation("no targets returned");
      for (const auto& t : d.targets)
        if (!Contains(goals, t)) throw RuleViolation("target '" + t + "' is not an uncovered goal");
      std::vector<std::string> avoid = OwnWordsWith(view, Role::kAvoid, unselected);
      std::vector<std::string> neutral = OwnWordsWith(view, Role::kNeutral, unselected);
      std::vector<std::string> clue = DecodeOutputTokens(
          Ask(Task::kClueGen, Prefixed(view, EncodeClueGenerationInput(avoid, neutral, d.targets))));
      if (clue.size() != 1) throw RuleViolation("clue must be exactly one token");
      d.clue = clue[0];
      for (const auto& t : d.targets) {
        std::string r = JoinDecoded(
            Ask(Task::kClueFraming, Prefixed(view, EncodeClueFramingInput(d.targets, d.clue, t))));
        d.rationales.push_back(r.empty() ? RenderRationale(Relation::kSynonym, d.clue, t) : r);
      }
      ValidateClueDecision(view, d);
      return d;
    } catch (const RuleViolation& e) {
      events_.push_back({"rejected", e.what()});
    } catch (const ValidationError& e) {
      events_.push_back({"rejected", e.what()});
    } catch (const EndpointError&) {
    }
  }
  events_.push_back({"fallback", "clue from random agent"});
  return fallback_.GiveClue(view);
}

GuessPlan ExternalAgent::Guess(const PlayerView& view) {
  auto current = view.CurrentClue();
  if (!current) throw ValidationError("no clue to guess from");
  const std::string clue = current->first;
  const std::vector<std::string> unselected = view.UnselectedFor(view.player);
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) events_.push_back({"retry", "guess attempt " + std::to_string(attempt + 1)});
    try {
      std::vector<std::string> words = DecodeOutputTokens(
          Ask(Task::kGuessSelection, Prefixed(view, EncodeGuessSelectionInput(unselected, clue))));
      GuessPlan plan;
      for (const auto& w : words) plan.guesses.push_back({w, ""});
      ValidateGuessPlan(view, plan);
      for (auto& g : plan.guesses) {
        std::string r = JoinDecoded(
            Ask(Task::kGuessFraming, Prefixed(view, EncodeGuessFramingInput(words, clue, g.word))));
        g.rationale = r.empty() ? RenderRationale(Relation::kSynonym, g.word, clue) : r;
      }
      return plan;
    } catch (const RuleViolation& e) {
      events_.push_back({"rejected", e.what()});
    } catch (const ValidationError& e) {
      events_.push_back({"rejected", e.what()});
    } catch (const EndpointError&) {
    }
  }
  events_.push_back({"fallback", "guess from random agent"});
  return fallback_.Guess(view);
}

ExternalNormalizer::ExternalNormalizer(Endpoint endpoint, std::chrono::milliseconds budget)
    : client_(std::move(endpoint), budget), budget_(budget) {}

std::string ExternalNormalizer::Normalize(const NormalizeRequest& request) {
  const std::uint64_t id = next_id_++;
  Json req;
  req["type"] = "normalize";
  req["id"] = id;
  req["raw"] = request.raw;
  req["clue"] = request.clue;
  req["target"] = request.target;
  req["prompt"] = request.prompt.empty()
                      ? std::string()
                      : RenderPrompt(request.prompt, request.clue, request.target, request.raw);
  client_.SendLine(req.dump());
  std::string line = client_.ReadLine(budget_);
  try {
    Json resp = Json::parse(line);
    if (resp.value("id", std::uint64_t{0}) != id || !resp.contains("normalized"))
      throw EndpointError("normalizer response lacks id or normalized");
    return resp["normalized"].get<std::string>();
  } catch (const Json::exception&) {
    throw EndpointError("malformed normalizer response");
  }
}

AgentSpec AgentSpec::Parse(std::string_view text) {
  AgentSpec spec;
  std::vector<std::string_view> parts = Split(text, ':');
  spec.kind = std::string(parts[0]);
  if (spec.kind == "random") {
    if (parts.size() != 1) throw ValidationError("agent 'random' takes no parameters");
  } else if (spec.kind == "vector") {
    if (parts.size() > 3) throw ValidationError("agent spec 'vector[:k[:min|mean]]'");
    if (parts.size() >= 2) {
      auto [p, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(),
                                     spec.max_targets);
      if (ec != std::errc() || p != parts[1].data() + parts[1].size() || spec.max_targets == 0)
        throw ValidationError("bad target count in agent spec '" + std::string(text) + "'");
    }
    if (parts.size() == 3) {
      if (parts[2] == "min") spec.scoring = ClueScoring::kMin;
      else if (parts[2] == "mean") spec.scoring = ClueScoring::kMean;
      else throw ValidationError("clue scoring must be min or mean");
    }
  } else if (spec.kind == "external") {
    auto first = text.find(':');
    if (first == std::string_view::npos) throw ValidationError("agent spec 'external:host:port'");
    spec.endpoint = Endpoint::Parse(text.substr(first + 1));
  } else {
    throw ValidationError("unknown agent '" + spec.kind + "'");
  }
  return spec;
}

std::string AgentSpec::ToString() const {
  if (kind == "vector")
    return "vector:" + std::to_string(max_targets) +
           (scoring == ClueScoring::kMin ? ":min" : ":mean");
  if (kind == "external") return "external:" + endpoint.ToString();
  return kind;
}

std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec, std::uint64_t seed,
                                 std::shared_ptr<const VectorStore> store,
                                 std::chrono::milliseconds budget) {
  if (spec.kind == "random") return std::make_unique<RandomAgent>(seed);
  if (spec.kind == "vector") {
    if (!store) throw ValidationError("agent 'vector' needs --vectors");
    return std::make_unique<VectorAgent>(std::move(store),
                                         ClueSearchOptions{spec.max_targets, spec.scoring});
  }
  if (spec.kind == "external") {
    ExternalOptions opts;
    opts.endpoint = spec.endpoint;
    opts.budget = budget;
    opts.fallback_seed = seed;
    return std::make_unique<ExternalAgent>(opts);
  }
  throw ValidationError("unknown agent '" + spec.kind + "'");
}

}  // namespace duet
