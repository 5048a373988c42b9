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

#ifndef DUET_SIMULATE_H_
#define DUET_SIMULATE_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "duet/agents.h"
#include "duet/normalizer.h"
#include "duet/records.h"
#include "duet/vectors.h"

namespace duet {

struct SyntheticPlayer {
  std::string id;
  SocioProfile profile;
};

// Players with random survey answers. Demo_Req is always present; the
// optional blocks are each answered with probability `p_optional`.
std::vector<SyntheticPlayer> MakePlayerPool(std::size_t n, std::uint64_t seed,
                                            double p_optional = 0.7);
SocioProfile RandomProfile(Rng& rng, double p_optional);

struct AgentEventLog {
  std::size_t fallbacks = 0;
  std::vector<AgentEvent> events;
};

// Plays one game to the end. Decisions that fail validation are replaced
// by a RandomAgent decision so the engine never sees an illegal action.
GameState PlayGame(GameState state, std::array<Agent*, kNumPlayers> agents, std::uint64_t seed,
                   AgentEventLog* log = nullptr);

struct SimulateOptions {
  std::size_t games = 100;
  std::uint64_t seed = 1;
  std::array<AgentSpec, kNumPlayers> agents;
  GameConfig config;
  std::size_t pool_size = 40;
  std::size_t threads = 1;
  Ablation external_ablation = Ablation::kNone;
};

struct SimulationResult {
  std::vector<GameRecord> records;
  AgentEventLog log;
};

// Game i is seeded from ForkSeed(seed, "game", i); results are returned in
// game order whatever the thread count.
SimulationResult Simulate(const SimulateOptions& options,
                          std::shared_ptr<const VectorStore> store = nullptr,
                          Normalizer* normalizer = nullptr);

// Fills record.normalized from the raw rationales.
void NormalizeRecord(GameRecord& record, Normalizer& normalizer, std::string_view prompt = {});

// Toy embedding space for agent tests: every word gets a random unit
// direction, and one invented clue word per board word sits near it.
struct FixtureVectors {
  VectorStore store;
  std::vector<std::pair<std::string, std::string>> clue_for;  // (board word, clue word)
};
FixtureVectors MakeFixtureVectors(const WordList& words, std::size_t dim, std::uint64_t seed,
                                  double noise = 0.35, std::size_t distractors = 100);

}  // namespace duet

#endif  // DUET_SIMULATE_H_
