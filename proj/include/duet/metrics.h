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

#ifndef DUET_METRICS_H_
#define DUET_METRICS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duet/vectors.h"

namespace duet {

// Tokenizer shared by every text metric: lowercase, split on whitespace,
// strip leading and trailing ASCII punctuation from each token, drop tokens
// that become empty.
std::vector<std::string> MetricTokens(std::string_view text);

enum class RougeVariant { kR1, kR2, kRL };

// F-1 of clipped n-gram overlap (R1, R2) or of the longest common
// subsequence (RL), all in [0, 1]. When either side has no n-grams the
// score is 1 if the token sequences are identical and 0 otherwise.
double RougeF(std::string_view candidate, std::string_view reference, RougeVariant variant);
double RougeN(std::span<const std::string> candidate, std::span<const std::string> reference,
              int n);
double RougeL(std::span<const std::string> candidate, std::span<const std::string> reference);

// Length of the longest common subsequence, bit-parallel over the
// candidate.
std::size_t LcsLength(std::span<const std::string> a, std::span<const std::string> b);

// Sentence BLEU against one reference: geometric mean of the modified
// n-gram precisions (unsmoothed for unigrams, add-one for n >= 2) times
// the brevity penalty exp(1 - r/c) when c < r. Both empty gives 1, an
// empty candidate 0.
double Bleu(std::string_view candidate, std::string_view reference, int max_n = 4);
double Bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            int max_n = 4);

// Cosine between the mean vectors of the two word sets. Out-of-vocabulary
// words count as zero vectors; a zero mean gives 0.
double AvgVectorCosine(std::span<const std::string> candidate,
                       std::span<const std::string> reference, const VectorStore& store);

// Unweighted mean of per-class F-1 over the classes present in `golds`.
double MacroF1(std::span<const bool> predictions, std::span<const bool> golds);
double MacroF1(const std::vector<bool>& predictions, const std::vector<bool>& golds);

// 1 if the token sequences are equal.
double ExactMatch(std::string_view candidate, std::string_view reference);

}  // namespace duet

#endif  // DUET_METRICS_H_
