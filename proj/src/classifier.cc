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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "duet/error.h"
#include "duet/kernels.h"
#include "duet/rng.h"
#include "duet/text.h"

namespace duet {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void CheckData(std::span<const SparseVector> xs, const std::vector<bool>& labels) {
  if (xs.size() != labels.size())
    throw ValidationError("feature and label counts differ");
  if (xs.empty()) throw ValidationError("no training examples");
}

}  // namespace

std::uint32_t HashFeature(std::string_view feature, std::uint64_t seed) {
  std::uint64_t h = Fnv1a64(feature, 0xcbf29ce484222325ULL ^ SplitMix64(seed));
  return static_cast<std::uint32_t>(h & (kFeatureDim - 1));
}

SparseVector Featurize(const EncodedExample& example, Ablation ablation, std::uint64_t seed) {
  if (example.task != Task::kSuccessCls)
    throw ValidationError("featurize expects a SUCCESS_CLS example, got " +
                          std::string(ToString(example.task)));
  DecodedInput decoded = DecodeInput(example.task, example.input, ablation);
  std::map<std::uint32_t, double> acc;
  for (std::string_view t : SplitWhitespace(decoded.body))
    acc[HashFeature("tok=" + std::string(t), seed)] += 1.0;
  auto add_attrs = [&](std::string_view side,
                       const std::vector<std::pair<std::string, std::string>>& attrs) {
    for (const auto& [k, v] : attrs)
      acc[HashFeature(std::string(side) + "." + k + "=" + v, seed)] += 1.0;
  };
  add_attrs("giver", decoded.giver_attributes);
  add_attrs("guesser", decoded.guesser_attributes);
  SparseVector x;
  for (const auto& [i, v] : acc) {
    x.index.push_back(i);
    x.value.push_back(v);
  }
  return x;
}

double SuccessModel::Score(const SparseVector& x) const {
  double z = bias;
  for (std::size_t k = 0; k < x.index.size(); ++k) z += weights[x.index[k]] * x.value[k];
  return z;
}

double SuccessModel::Predict(const SparseVector& x) const { return Sigmoid(Score(x)); }

double Loss(const SuccessModel& model, std::span<const SparseVector> xs,
            const std::vector<bool>& labels, double l2) {
  CheckData(xs, labels);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double z = model.Score(xs[i]);
    sum += labels[i] ? Softplus(-z) : Softplus(z);
  }
  double norm = 0.0;
  for (double w : model.weights) norm += w * w;
  return sum / double(xs.size()) + 0.5 * l2 * norm;
}

Gradient LossGradient(const SuccessModel& model, std::span<const SparseVector> xs,
                      const std::vector<bool>& labels, double l2) {
  CheckData(xs, labels);
  Gradient g;
  g.weights = model.weights;
  kernels::ScaleF64(g.weights.data(), l2, g.weights.size());
  const double inv_n = 1.0 / double(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = (model.Predict(xs[i]) - (labels[i] ? 1.0 : 0.0)) * inv_n;
    g.bias += r;
    for (std::size_t k = 0; k < xs[i].index.size(); ++k)
      g.weights[xs[i].index[k]] += r * xs[i].value[k];
  }
  return g;
}

SuccessModel TrainSuccessModel(std::span<const SparseVector> xs, const std::vector<bool>& labels,
                               const TrainConfig& config, Ablation ablation) {
  CheckData(xs, labels);
  const auto positives = std::count(labels.begin(), labels.end(), true);
  if (positives == 0 || positives == static_cast<long>(labels.size()))
    throw ValidationError("training data has a single class");
  if (config.batch_size == 0 || config.epochs <= 0 || config.learning_rate <= 0)
    throw ValidationError("batch_size, epochs and learning_rate must be positive");

  SuccessModel model;
  model.ablation = ablation;
  model.config = config;
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> residual;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(ForkSeed(config.seed, "train_epoch", static_cast<std::uint64_t>(epoch)));
    rng.Shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double lr = config.learning_rate / double(end - start);
      residual.clear();
      for (std::size_t b = start; b < end; ++b) {
        std::size_t i = order[b];
        residual.push_back(model.Predict(xs[i]) - (labels[i] ? 1.0 : 0.0));
      }
      if (config.l2 > 0)
        kernels::ScaleF64(model.weights.data(), 1.0 - config.learning_rate * config.l2,
                          model.weights.size());
      for (std::size_t b = start; b < end; ++b) {
        const SparseVector& x = xs[order[b]];
        const double r = residual[b - start];
        model.bias -= lr * r;
        for (std::size_t k = 0; k < x.index.size(); ++k)
          model.weights[x.index[k]] -= lr * r * x.value[k];
      }
    }
  }
  for (double w : model.weights)
    if (!std::isfinite(w)) throw ValidationError("training diverged; lower the learning rate");
  return model;
}

}  // namespace duet
