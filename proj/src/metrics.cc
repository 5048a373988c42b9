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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <unordered_map>

#include "duet/error.h"
#include "duet/text.h"

namespace duet {
namespace {

using NgramCounts = std::map<std::vector<std::string_view>, int>;

NgramCounts CountNgrams(std::span<const std::string> tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + i, tokens.begin() + i + n);
    ++counts[std::move(gram)];
  }
  return counts;
}

int Total(const NgramCounts& c) {
  int t = 0;
  for (const auto& [g, n] : c) t += n;
  return t;
}

int ClippedOverlap(const NgramCounts& cand, const NgramCounts& ref) {
  int overlap = 0;
  for (const auto& [gram, n] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(n, it->second);
  }
  return overlap;
}

double F1(double overlap, double cand_total, double ref_total) {
  if (overlap <= 0.0) return 0.0;
  double p = overlap / cand_total;
  double r = overlap / ref_total;
  return 2.0 * p * r / (p + r);
}

bool SameTokens(std::span<const std::string> a, std::span<const std::string> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::vector<std::string> MetricTokens(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view raw : SplitWhitespace(text)) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (b < e) out.push_back(ToLower(raw.substr(b, e - b)));
  }
  return out;
}

double RougeN(std::span<const std::string> candidate, std::span<const std::string> reference,
              int n) {
  if (n < 1) throw ValidationError("ROUGE-N needs n >= 1");
  NgramCounts c = CountNgrams(candidate, n);
  NgramCounts r = CountNgrams(reference, n);
  if (c.empty() || r.empty()) return SameTokens(candidate, reference) ? 1.0 : 0.0;
  return F1(ClippedOverlap(c, r), Total(c), Total(r));
}

std::size_t LcsLength(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  // Match masks over positions of `a`, one per distinct token.
  const std::size_t words = (a.size() + 63) / 64;
  std::unordered_map<std::string_view, std::vector<std::uint64_t>> masks;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto& m = masks[a[i]];
    if (m.empty()) m.assign(words, 0);
    m[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  std::vector<std::uint64_t> v(words, ~std::uint64_t{0});
  const std::vector<std::uint64_t> none(words, 0);
  for (const auto& token : b) {
    auto it = masks.find(token);
    const std::vector<std::uint64_t>& m = it == masks.end() ? none : it->second;
    // V' = (V + (V & M)) | (V & ~M), with carries across words.
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t u = v[w] & m[w];
      std::uint64_t sum = v[w] + u;
      std::uint64_t c1 = sum < v[w];
      std::uint64_t sum2 = sum + carry;
      std::uint64_t c2 = sum2 < sum;
      carry = c1 | c2;
      v[w] = sum2 | (v[w] & ~m[w]);
    }
  }
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!((v[i / 64] >> (i % 64)) & 1)) ++zeros;
  return zeros;
}

double RougeL(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return SameTokens(candidate, reference) ? 1.0 : 0.0;
  return F1(double(LcsLength(candidate, reference)), double(candidate.size()),
            double(reference.size()));
}

double RougeF(std::string_view candidate, std::string_view reference, RougeVariant variant) {
  std::vector<std::string> c = MetricTokens(candidate);
  std::vector<std::string> r = MetricTokens(reference);
  switch (variant) {
    case RougeVariant::kR1: return RougeN(c, r, 1);
    case RougeVariant::kR2: return RougeN(c, r, 2);
    case RougeVariant::kRL: return RougeL(c, r);
  }
  return 0.0;
}

double Bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            int max_n) {
  if (max_n < 1) throw ValidationError("BLEU needs max_n >= 1");
  if (candidate.empty()) return reference.empty() ? 1.0 : 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    NgramCounts c = CountNgrams(candidate, n);
    NgramCounts r = CountNgrams(reference, n);
    double matches = ClippedOverlap(c, r);
    double total = Total(c);
    double p;
    if (n == 1) {
      if (matches == 0.0) return 0.0;
      p = matches / total;
    } else {
      p = (matches + 1.0) / (total + 1.0);
    }
    log_sum += std::log(p);
  }
  double bleu = std::exp(log_sum / max_n);
  const double c_len = double(candidate.size());
  const double r_len = double(reference.size());
  if (c_len < r_len) bleu *= std::exp(1.0 - r_len / c_len);
  return bleu;
}

double Bleu(std::string_view candidate, std::string_view reference, int max_n) {
  std::vector<std::string> c = MetricTokens(candidate);
  std::vector<std::string> r = MetricTokens(reference);
  return Bleu(c, r, max_n);
}

double AvgVectorCosine(std::span<const std::string> candidate,
                       std::span<const std::string> reference, const VectorStore& store) {
  const std::size_t dim = store.dimension();
  auto mean = [&](std::span<const std::string> words) {
    std::vector<double> m(dim, 0.0);
    if (words.empty()) return m;
    for (const auto& w : words)
      if (auto idx = store.Find(w)) {
        auto row = store.Row(*idx);
        for (std::size_t i = 0; i < dim; ++i) m[i] += row[i];
      }
    for (double& x : m) x /= double(words.size());
    return m;
  };
  std::vector<double> a = mean(candidate);
  std::vector<double> b = mean(reference);
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double MacroF1(std::span<const bool> predictions, std::span<const bool> golds) {
  if (predictions.size() != golds.size())
    throw ValidationError("macro F-1: " + std::to_string(predictions.size()) +
                          " predictions for " + std::to_string(golds.size()) + " golds");
  if (golds.empty()) throw ValidationError("macro F-1 of an empty set");
  double sum = 0.0;
  int classes = 0;
  for (bool cls : {false, true}) {
    std::size_t tp = 0, fp = 0, fn = 0, support = 0;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      if (golds[i] == cls) ++support;
      if (predictions[i] == cls && golds[i] == cls) ++tp;
      else if (predictions[i] == cls) ++fp;
      else if (golds[i] == cls) ++fn;
    }
    if (support == 0) continue;
    ++classes;
    sum += 2.0 * double(tp) / double(2 * tp + fp + fn);
  }
  return sum / classes;
}

double MacroF1(const std::vector<bool>& predictions, const std::vector<bool>& golds) {
  auto copy = [](const std::vector<bool>& v) {
    std::unique_ptr<bool[]> out(new bool[v.size()]);
    std::copy(v.begin(), v.end(), out.get());
    return out;
  };
  auto p = copy(predictions);
  auto g = copy(golds);
  return MacroF1(std::span<const bool>(p.get(), predictions.size()),
                 std::span<const bool>(g.get(), golds.size()));
}

double ExactMatch(std::string_view candidate, std::string_view reference) {
  return MetricTokens(candidate) == MetricTokens(reference) ? 1.0 : 0.0;
}

}  // namespace duet
