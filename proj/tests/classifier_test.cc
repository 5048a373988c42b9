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

#include "duet/classifier.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "duet/error.h"
#include "duet/metrics.h"
#include "duet/rng.h"
#include "test_util.h"

namespace duet {
namespace {

using testing::PooledLabelExample;
using testing::RandomSparse;

TEST(ClassifierTest, GradientMatchesCentralDifferences) {
  Rng rng(5);
  double worst = 0;
  for (int c = 0; c < 100; ++c) {
    const std::uint32_t dims = 40;
    std::vector<SparseVector> xs;
    std::vector<bool> labels;
    for (int i = 0; i < 8; ++i) {
      xs.push_back(RandomSparse(rng, 1 + rng.Below(6), dims));
      labels.push_back(rng.Bernoulli(0.5));
    }
    SuccessModel m;
    for (std::uint32_t d = 0; d < dims; ++d) m.weights[d] = rng.Uniform01() * 2 - 1;
    m.bias = rng.Uniform01() - 0.5;
    const double l2 = 0.01 * rng.Uniform01();
    Gradient g = LossGradient(m, xs, labels, l2);
    const double h = 1e-5;
    for (std::uint32_t d = 0; d <= dims; ++d) {
      SuccessModel plus = m, minus = m;
      if (d == dims) {
        plus.bias += h;
        minus.bias -= h;
      } else {
        plus.weights[d] += h;
        minus.weights[d] -= h;
      }
      double numeric = (Loss(plus, xs, labels, l2) - Loss(minus, xs, labels, l2)) / (2 * h);
      double analytic = d == dims ? g.bias : g.weights[d];
      double rel = std::fabs(analytic - numeric) / std::max(1e-3, std::fabs(analytic) + std::fabs(numeric));
      worst = std::max(worst, rel);
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(ClassifierTest, SeparableFixtureIsLearned) {
  Rng rng(8);
  std::vector<SparseVector> xs;
  std::vector<bool> labels;
  for (int i = 0; i < 400; ++i) {
    bool y = rng.Bernoulli(0.5);
    SparseVector x = RandomSparse(rng, 3, 1000);
    x.index.push_back(y ? 5000 : 5001);
    x.value.push_back(1.0);
    xs.push_back(x);
    labels.push_back(y);
  }
  SuccessModel m = TrainSuccessModel(xs, labels, TrainConfig{});
  int correct = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) correct += m.PredictLabel(xs[i]) == labels[i];
  EXPECT_GE(double(correct) / xs.size(), 0.99);
}

TEST(ClassifierTest, ShuffledLabelsStayAtChance) {
  Rng rng(21);
  std::vector<SparseVector> train, test;
  std::vector<bool> train_y, test_y;
  for (int i = 0; i < 2000; ++i) {
    bool y = rng.Bernoulli(0.5);
    (i < 1000 ? train : test).push_back(PooledLabelExample(rng, y));
    (i < 1000 ? train_y : test_y).push_back(y);
  }
  std::vector<bool> shuffled = train_y;
  for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
    std::size_t j = rng.Below(i + 1);
    bool t = shuffled[i];
    shuffled[i] = shuffled[j];
    shuffled[j] = t;
  }
  auto held_out = [&](const SuccessModel& m) {
    std::vector<bool> pred;
    for (const auto& x : test) pred.push_back(m.PredictLabel(x));
    return MacroF1(pred, test_y);
  };
  EXPECT_GT(held_out(TrainSuccessModel(train, train_y, TrainConfig{})), 0.9);
  EXPECT_NEAR(held_out(TrainSuccessModel(train, shuffled, TrainConfig{})), 0.5, 0.05);
}

TEST(ClassifierTest, TrainingIsDeterministic) {
  Rng rng(3);
  std::vector<SparseVector> xs;
  std::vector<bool> labels;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(RandomSparse(rng, 4, 200));
    labels.push_back(i % 3 == 0);
  }
  TrainConfig cfg;
  cfg.epochs = 5;
  auto a = TrainSuccessModel(xs, labels, cfg);
  auto b = TrainSuccessModel(xs, labels, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(ClassifierTest, RejectsDegenerateData) {
  std::vector<SparseVector> xs(3);
  EXPECT_THROW(TrainSuccessModel(xs, {true, true, true}, TrainConfig{}), ValidationError);
  EXPECT_THROW(TrainSuccessModel({}, {}, TrainConfig{}), ValidationError);
}

TEST(ClassifierTest, HashingIsSeededAndBounded) {
  EXPECT_EQ(HashFeature("tok=luck"), HashFeature("tok=luck"));
  EXPECT_NE(HashFeature("tok=luck", 1), HashFeature("tok=luck", 2));
  for (const char* f : {"a", "b", "giver.age=3", "tok=<clue>"}) EXPECT_LT(HashFeature(f), kFeatureDim);
}

TEST(ClassifierTest, FeaturizeUsesBodyAndPrefix) {
  GameRecord r = testing::FixtureRecord();
  std::vector<GameRecord> rs = {r};
  EncodeOptions opt;
  opt.ablation = Ablation::kDemoReq;
  auto ex = EncodeAll(rs, Task::kSuccessCls, opt);
  SparseVector with = Featurize(ex[0], Ablation::kDemoReq);
  SparseVector without = Featurize(EncodeAll(rs, Task::kSuccessCls)[0], Ablation::kNone);
  EXPECT_GT(with.index.size(), without.index.size());
  EXPECT_THROW(Featurize(EncodeAll(rs, Task::kClueGen)[0], Ablation::kNone), ValidationError);
}

}  // namespace
}  // namespace duet
