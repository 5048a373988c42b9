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

#include <gtest/gtest.h>

#include <set>

#include "duet/error.h"
#include "test_util.h"

namespace duet {
namespace {

SimulateOptions Options(std::size_t games, std::size_t threads) {
  SimulateOptions o;
  o.games = games;
  o.seed = 42;
  o.threads = threads;
  return o;
}

TEST(SimulateTest, IdenticalAcrossThreadCounts) {
  auto one = Simulate(Options(60, 1));
  auto four = Simulate(Options(60, 4));
  ASSERT_EQ(one.records.size(), 60u);
  ASSERT_EQ(four.records.size(), 60u);
  for (std::size_t i = 0; i < 60; ++i)
    EXPECT_EQ(SerializeGame(one.records[i]), SerializeGame(four.records[i])) << i;
}

TEST(SimulateTest, SeedChangesGames) {
  auto a = Simulate(Options(5, 1));
  SimulateOptions o = Options(5, 1);
  o.seed = 43;
  auto b = Simulate(o);
  EXPECT_NE(SerializeGame(a.records[0]), SerializeGame(b.records[0]));
}

TEST(SimulateTest, RecordsValidateAndReplay) {
  auto store = std::make_shared<const VectorStore>(
      MakeFixtureVectors(CanonicalWordList(), 24, 9).store);
  SimulateOptions o = Options(30, 2);
  o.agents = {AgentSpec::Parse("vector:2"), AgentSpec::Parse("vector")};
  IdentityNormalizer norm;
  auto result = Simulate(o, store, &norm);
  std::set<std::string> ids;
  for (const auto& r : result.records) {
    EXPECT_NO_THROW(ValidateRecord(r));
    EXPECT_EQ(r.normalized.size(), r.turns.size());
    EXPECT_EQ(ReplayRecord(r).IsTerminal(), true);
    EXPECT_TRUE(ValidateProfile(r.profiles[0]).empty());
    ids.insert(r.game_id);
    EXPECT_EQ(ParseGame(SerializeGame(r)), r);
  }
  EXPECT_EQ(ids.size(), result.records.size());
}

TEST(SimulateTest, VectorAgentsNeedAStore) {
  SimulateOptions o = Options(1, 1);
  o.agents = {AgentSpec::Parse("vector"), AgentSpec::Parse("random")};
  EXPECT_THROW(Simulate(o), ValidationError);
}

TEST(PlayerPoolTest, RequiredBlockAlwaysPresent) {
  auto pool = MakePlayerPool(200, 3, 0.5);
  ASSERT_EQ(pool.size(), 200u);
  std::set<std::string> ids;
  std::size_t with_big5 = 0;
  for (const auto& p : pool) {
    ids.insert(p.id);
    EXPECT_TRUE(p.profile.demo_req.has_value());
    EXPECT_TRUE(ValidateProfile(p.profile).empty());
    with_big5 += p.profile.big5.has_value();
  }
  EXPECT_EQ(ids.size(), 200u);
  EXPECT_GT(with_big5, 60u);
  EXPECT_LT(with_big5, 140u);
}

TEST(FixtureVectorsTest, ClueWordsSitNearTheirBoardWord) {
  auto fx = MakeFixtureVectors(CanonicalWordList(), 32, 1, 0.2, 50);
  ASSERT_EQ(fx.clue_for.size(), CanonicalWordList().size());
  std::size_t nearest = 0;
  for (const auto& [word, clue] : fx.clue_for) {
    double own = fx.store.Cosine(word, clue);
    bool best = true;
    for (const auto& other : CanonicalWordList().words())
      if (other != word && fx.store.Cosine(other, clue) >= own) best = false;
    nearest += best;
  }
  EXPECT_GT(nearest, fx.clue_for.size() * 9 / 10);
}

}  // namespace
}  // namespace duet
