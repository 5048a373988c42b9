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

#include "duet/metrics.h"

#include <gtest/gtest.h>

#include <cmath>

#include "duet/rng.h"
#include "test_util.h"

namespace duet {
namespace {

std::vector<std::string> RandomTokens(Rng& rng, std::size_t max_len) {
  static const char* kVocab[] = {"a", "b", "c", "d", "e", "luck", "fall", "slip"};
  std::vector<std::string> t(rng.Below(max_len + 1));
  for (auto& w : t) w = kVocab[rng.Below(8)];
  return t;
}

TEST(MetricsTest, TokenizerLowercasesAndStripsPunctuation) {
  EXPECT_EQ(MetricTokens("  Fall, after SLIP! ... ok"),
            (std::vector<std::string>{"fall", "after", "slip", "ok"}));
  EXPECT_EQ(MetricTokens("don't"), (std::vector<std::string>{"don't"}));
  EXPECT_TRUE(MetricTokens(" ?! ").empty());
}

TEST(MetricsTest, RougeNMatchesBruteForce) {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    auto c = RandomTokens(rng, 12);
    auto r = RandomTokens(rng, 12);
    for (int n : {1, 2}) EXPECT_EQ(RougeN(c, r, n), testing::BruteRougeN(c, r, n)) << i;
  }
}

TEST(MetricsTest, RougeLMatchesQuadraticLcs) {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    auto c = RandomTokens(rng, 80);
    auto r = RandomTokens(rng, 80);
    std::size_t lcs = testing::QuadraticLcs(c, r);
    EXPECT_EQ(LcsLength(c, r), lcs);
    double expected;
    if (c.empty() || r.empty()) {
      expected = c == r ? 1.0 : 0.0;
    } else if (lcs == 0) {
      expected = 0.0;
    } else {
      double p = double(lcs) / c.size(), rec = double(lcs) / r.size();
      expected = 2 * p * rec / (p + rec);
    }
    EXPECT_DOUBLE_EQ(RougeL(c, r), expected);
  }
}

TEST(MetricsTest, LcsBeyondOneMachineWord) {
  std::vector<std::string> a, b;
  for (int i = 0; i < 300; ++i) {
    a.push_back(std::to_string(i % 7));
    b.push_back(std::to_string(i % 5));
  }
  EXPECT_EQ(LcsLength(a, b), testing::QuadraticLcs(a, b));
}

TEST(MetricsTest, RougeStringForms) {
  EXPECT_DOUBLE_EQ(RougeF("Fall after slip", "fall after slip.", RougeVariant::kR2), 1.0);
  EXPECT_DOUBLE_EQ(RougeF("luck", "luck", RougeVariant::kR2), 1.0);  // no bigrams, identical
  EXPECT_DOUBLE_EQ(RougeF("luck", "fate", RougeVariant::kR2), 0.0);
  EXPECT_DOUBLE_EQ(RougeF("", "", RougeVariant::kR1), 1.0);
}

// Hand-computed sentence BLEU values.
TEST(MetricsTest, BleuFixtures) {
  EXPECT_NEAR(Bleu("the cat sat on the mat", "the cat sat on the mat"), 1.0, 1e-9);
  // c=2, r=6: every precision is 1 (higher orders smoothed 1/1), BP = e^-2.
  EXPECT_NEAR(Bleu("the cat", "the cat sat on the mat"), std::exp(-2.0), 1e-9);
  // p = 1/4, (0+1)/(3+1), (0+1)/(2+1), (0+1)/(1+1); no brevity penalty.
  EXPECT_NEAR(Bleu("the the the the", "the cat"), std::pow(1.0 / 96.0, 0.25), 1e-9);
  // p = 3/4, 2/4, 1/3, 1/2 -> (1/16)^(1/4); BP = e^(1 - 5/4).
  EXPECT_NEAR(Bleu("a b c d", "a b x d e"), 0.5 * std::exp(-0.25), 1e-9);
  // No unigram match.
  EXPECT_NEAR(Bleu("x y", "a b"), 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(Bleu("", ""), 1.0);
  EXPECT_DOUBLE_EQ(Bleu("", "a"), 0.0);
}

TEST(MetricsTest, MacroF1HandValues) {
  std::vector<bool> gold = {true, true, false, false};
  std::vector<bool> pred = {true, false, false, false};
  // positive: p=1, r=.5, f=2/3; negative: p=2/3, r=1, f=.8
  EXPECT_NEAR(MacroF1(pred, gold), (2.0 / 3.0 + 0.8) / 2, 1e-12);
  EXPECT_DOUBLE_EQ(MacroF1(gold, gold), 1.0);
  // Only the class present in the golds counts.
  std::vector<bool> all_true = {true, true};
  EXPECT_DOUBLE_EQ(MacroF1(all_true, all_true), 1.0);
}

TEST(MetricsTest, MacroF1OfBalancedCoinFlipsIsHalf) {
  Rng rng(99);
  std::vector<bool> gold(10000), pred(10000);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    gold[i] = rng.Bernoulli(0.5);
    pred[i] = rng.Bernoulli(0.5);
  }
  EXPECT_NEAR(MacroF1(pred, gold), 0.5, 0.02);
}

TEST(MetricsTest, AvgVectorCosine) {
  VectorStore store(2);
  std::vector<float> x = {1, 0}, y = {0, 1};
  store.Add("x", x);
  store.Add("y", y);
  std::vector<std::string> a = {"x"}, b = {"y"}, ab = {"x", "y"}, oov = {"zzz"};
  EXPECT_NEAR(AvgVectorCosine(a, a, store), 1.0, 1e-12);
  EXPECT_NEAR(AvgVectorCosine(a, b, store), 0.0, 1e-12);
  EXPECT_NEAR(AvgVectorCosine(a, ab, store), std::sqrt(0.5), 1e-9);
  EXPECT_DOUBLE_EQ(AvgVectorCosine(oov, a, store), 0.0);
}

TEST(MetricsTest, ExactMatch) {
  EXPECT_DOUBLE_EQ(ExactMatch("Luck!", "luck"), 1.0);
  EXPECT_DOUBLE_EQ(ExactMatch("luck", "luck fate"), 0.0);
}

}  // namespace
}  // namespace duet
