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

#ifndef DUET_CLASSIFIER_H_
#define DUET_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "duet/encoding.h"

namespace duet {

inline constexpr std::size_t kFeatureBits = 18;
inline constexpr std::size_t kFeatureDim = std::size_t{1} << kFeatureBits;
inline constexpr std::uint64_t kDefaultFeatureSeed = 0x5eed;

// Sorted, duplicate-free indices with their values.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  bool operator==(const SparseVector&) const = default;
};

std::uint32_t HashFeature(std::string_view feature, std::uint64_t seed = kDefaultFeatureSeed);

// Bag of body tokens ("tok=<token>", counted) plus one feature per prefix
// answer ("giver.age=22"). Throws ValidationError for non SUCCESS_CLS
// examples.
SparseVector Featurize(const EncodedExample& example, Ablation ablation,
                       std::uint64_t seed = kDefaultFeatureSeed);

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 30;
  double l2 = 1e-4;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  std::uint64_t feature_seed = kDefaultFeatureSeed;
};

// Logistic regression over hashed features.
struct SuccessModel {
  std::vector<double> weights = std::vector<double>(kFeatureDim, 0.0);
  double bias = 0.0;
  Ablation ablation = Ablation::kNone;
  TrainConfig config;

  double Score(const SparseVector& x) const;
  // sigma(w.x + b)
  double Predict(const SparseVector& x) const;
  bool PredictLabel(const SparseVector& x) const { return Predict(x) >= 0.5; }
};

// Mean logistic loss plus (l2 / 2) * |w|^2; the bias is not penalized.
double Loss(const SuccessModel& model, std::span<const SparseVector> xs,
            const std::vector<bool>& labels, double l2);

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};
Gradient LossGradient(const SuccessModel& model, std::span<const SparseVector> xs,
                      const std::vector<bool>& labels, double l2);

// Mini-batch gradient descent, data order shuffled per epoch from
// config.seed. Throws ValidationError on empty or single-class data.
SuccessModel TrainSuccessModel(std::span<const SparseVector> xs, const std::vector<bool>& labels,
                               const TrainConfig& config, Ablation ablation = Ablation::kNone);

}  // namespace duet

#endif  // DUET_CLASSIFIER_H_
