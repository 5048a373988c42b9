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

#include "duet/simulate.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "duet/error.h"
#include "duet/text.h"

namespace duet {
namespace {

constexpr std::array<std::string_view, 12> kCountries = {
    "united states", "india", "united kingdom", "canada", "brazil", "germany",
    "nigeria",       "philippines", "mexico", "australia", "kenya", "japan"};

template <typename T>
const T& Pick(Rng& rng, std::span<const T> items) {
  return items[rng.Below(items.size())];
}

std::string PickOption(Rng& rng, std::string_view field) {
  for (const auto& f : DemoAllVocabulary())
    if (f.name == field) return std::string(f.options[rng.Below(f.options.size())]);
  return "Other";
}

double Gaussian(Rng& rng) {
  // Box-Muller; u1 kept away from 0.
  double u1 = (static_cast<double>(rng.Next() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = rng.Uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::string InventWord(Rng& rng) {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  std::string w;
  const std::size_t syllables = 2 + rng.Below(2);
  for (std::size_t s = 0; s < syllables; ++s) {
    w += kOnsets[rng.Below(kOnsets.size())];
    w += kVowels[rng.Below(kVowels.size())];
  }
  w += "x";
  return w;
}

}  // namespace

SocioProfile RandomProfile(Rng& rng, double p_optional) {
  SocioProfile p;
  DemoReq d;
  d.age = 18 + static_cast<int>(rng.Below(58));
  d.country = std::string(Pick(rng, std::span<const std::string_view>(kCountries)));
  d.native_english = rng.Bernoulli(0.8);
  p.demo_req = d;
  if (rng.Bernoulli(p_optional)) {
    DemoAll a;
    a.gender = PickOption(rng, "gender");
    a.age_range = PickOption(rng, "age_range");
    a.race = PickOption(rng, "race");
    a.continent = PickOption(rng, "continent");
    a.education = PickOption(rng, "education");
    a.marital_status = PickOption(rng, "marital_status");
    a.native_language = PickOption(rng, "native_language");
    a.religion = PickOption(rng, "religion");
    p.demo_all = a;
  }
  if (rng.Bernoulli(p_optional)) {
    std::array<int, kBig5Items> b{};
    for (int& x : b) x = kLikertMin + static_cast<int>(rng.Below(kLikertMax - kLikertMin + 1));
    p.big5 = b;
  }
  if (rng.Bernoulli(p_optional)) {
    std::array<int, kMfqItems> m{};
    for (int& x : m) x = kMfqMin + static_cast<int>(rng.Below(kMfqMax - kMfqMin + 1));
    p.mfq = m;
    p.political = static_cast<Political>(rng.Below(5));
  }
  return p;
}

std::vector<SyntheticPlayer> MakePlayerPool(std::size_t n, std::uint64_t seed, double p_optional) {
  if (n < 2) throw ValidationError("a player pool needs at least two players");
  std::vector<SyntheticPlayer> pool;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(ForkSeed(seed, "player", i));
    pool.push_back({"p" + std::to_string(i), RandomProfile(rng, p_optional)});
  }
  return pool;
}

GameState PlayGame(GameState state, std::array<Agent*, kNumPlayers> agents, std::uint64_t seed,
                   AgentEventLog* log) {
  RandomAgent rescue(ForkSeed(seed, "rescue"));
  auto note = [&](std::string what) {
    if (!log) return;
    ++log->fallbacks;
    log->events.push_back({"fallback", std::move(what)});
  };
  while (!state.IsTerminal()) {
    const PlayerId giver = state.active_giver();
    const PlayerId guesser = Partner(giver);
    PlayerView gview = ViewFor(state, giver);
    ClueDecision clue;
    try {
      clue = agents[giver]->GiveClue(gview);
      ValidateClueDecision(gview, clue);
    } catch (const Error& e) {
      note(agents[giver]->name() + " clue: " + e.what());
      clue = rescue.GiveClue(gview);
    }
    state = SubmitClue(state, clue.clue, clue.targets, clue.rationales);

    PlayerView qview = ViewFor(state, guesser);
    GuessPlan plan;
    try {
      plan = agents[guesser]->Guess(qview);
      ValidateGuessPlan(qview, plan);
    } catch (const Error& e) {
      note(agents[guesser]->name() + " guess: " + e.what());
      plan = rescue.Guess(qview);
    }
    for (const auto& g : plan.guesses) {
      state = SubmitGuess(state, g.word, g.rationale).first;
      if (state.phase() != Phase::kAwaitGuess) break;
    }
    if (state.phase() == Phase::kAwaitGuess) state = EndTurn(state);
  }
  if (log)
    for (Agent* a : agents)
      for (const auto& e : a->events()) log->events.push_back(e);
  return state;
}

void NormalizeRecord(GameRecord& record, Normalizer& normalizer, std::string_view prompt) {
  record.normalized.clear();
  for (const auto& turn : record.turns) {
    NormalizedTurn n;
    for (std::size_t i = 0; i < turn.targets.size(); ++i) {
      auto r = NormalizeRationale(turn.target_rationales[i], turn.clue, turn.targets[i],
                                  normalizer, prompt);
      n.targets.push_back(r.text);
      n.fallback |= r.fallback;
    }
    for (const auto& g : turn.guesses) {
      auto r = NormalizeRationale(g.rationale, turn.clue, g.word, normalizer, prompt);
      n.guesses.push_back(r.text);
      n.fallback |= r.fallback;
    }
    record.normalized.push_back(std::move(n));
  }
}

SimulationResult Simulate(const SimulateOptions& options, std::shared_ptr<const VectorStore> store,
                          Normalizer* normalizer) {
  const std::vector<SyntheticPlayer> pool =
      MakePlayerPool(options.pool_size, ForkSeed(options.seed, "pool"));
  std::vector<GameRecord> records(options.games);
  std::vector<AgentEventLog> logs(options.games);
  std::vector<std::string> errors(options.games);

  auto run_one = [&](std::size_t i) {
    const std::uint64_t game_seed = ForkSeed(options.seed, "game", i);
    Rng rng(ForkSeed(game_seed, "pairing"));
    std::vector<std::size_t> pair = rng.SampleIndices(pool.size(), 2);
    GameConfig config = options.config;
    config.first_giver = static_cast<PlayerId>(rng.Below(2));
    Board board = SampleBoard(CanonicalWordList(), ForkSeed(game_seed, "board"));
    GameState state = NewGame(board, ForkSeed(game_seed, "keys"), config);
    std::array<std::unique_ptr<Agent>, kNumPlayers> agents;
    for (PlayerId p = 0; p < kNumPlayers; ++p) {
      agents[p] = MakeAgent(options.agents[p], ForkSeed(game_seed, "agent", p), store);
      if (auto* ext = dynamic_cast<ExternalAgent*>(agents[p].get()))
        ext->SetProfiles(pool[pair[p]].profile, pool[pair[1 - p]].profile);
    }
    state = PlayGame(std::move(state), {agents[0].get(), agents[1].get()}, game_seed, &logs[i]);
    GameRecord rec = MakeRecord("sim-" + std::to_string(options.seed) + "-" + std::to_string(i),
                                {pool[pair[0]].id, pool[pair[1]].id},
                                {pool[pair[0]].profile, pool[pair[1]].profile}, state);
    IdentityNormalizer identity;
    NormalizeRecord(rec, normalizer ? *normalizer : identity);
    records[i] = std::move(rec);
  };

  const std::size_t threads =
      std::max<std::size_t>(1, std::min(options.threads, std::max<std::size_t>(1, options.games)));
  if (threads == 1 || normalizer) {
    for (std::size_t i = 0; i < options.games; ++i) run_one(i);
  } else {
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < threads; ++t)
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < options.games; i += threads) {
          try {
            run_one(i);
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      });
    for (auto& w : workers) w.join();
    for (const auto& e : errors)
      if (!e.empty()) throw ValidationError("simulation failed: " + e);
  }

  SimulationResult result;
  result.records = std::move(records);
  for (auto& l : logs) {
    result.log.fallbacks += l.fallbacks;
    for (auto& e : l.events) result.log.events.push_back(std::move(e));
  }
  return result;
}

FixtureVectors MakeFixtureVectors(const WordList& words, std::size_t dim, std::uint64_t seed,
                                  double noise, std::size_t distractors) {
  if (dim == 0) throw ValidationError("dimension must be positive");
  Rng rng(seed);
  FixtureVectors out{VectorStore(dim), {}};
  std::vector<float> v(dim);
  auto random_unit = [&](std::vector<double>& d) {
    double n = 0;
    for (auto& x : d) {
      x = Gaussian(rng);
      n += x * x;
    }
    n = std::sqrt(n);
    for (auto& x : d) x /= n;
  };
  std::set<std::string> taken(words.words().begin(), words.words().end());
  auto fresh_word = [&] {
    for (;;) {
      std::string w = InventWord(rng);
      if (taken.insert(w).second) return w;
    }
  };
  std::vector<double> base(dim), jitter(dim);
  std::vector<std::pair<std::string, std::vector<float>>> clues;
  for (const auto& w : words.words()) {
    random_unit(base);
    for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<float>(base[i]);
    out.store.Add(w, v);
    random_unit(jitter);
    std::vector<float> c(dim);
    for (std::size_t i = 0; i < dim; ++i) c[i] = static_cast<float>(base[i] + noise * jitter[i]);
    std::string name = fresh_word();
    out.clue_for.emplace_back(w, name);
    clues.emplace_back(std::move(name), std::move(c));
  }
  for (auto& [name, c] : clues) out.store.Add(name, c);
  for (std::size_t k = 0; k < distractors; ++k) {
    random_unit(base);
    for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<float>(base[i]);
    out.store.Add(fresh_word(), v);
  }
  return out;
}

}  // namespace duet
