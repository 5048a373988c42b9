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

#ifndef DUET_VECTORS_H_
#define DUET_VECTORS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace duet {

// Immutable word -> float vector table. Rows live in one contiguous buffer
// and squared norms are cached, so cosine is a single dot product.
class VectorStore {
 public:
  explicit VectorStore(std::size_t dimension = 0) : dim_(dimension) {}

  // Case-folds `word`. A repeated word overwrites the earlier row in place
  // and is reported through warnings().
  void Add(std::string_view word, std::span<const float> values);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  // File order.
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::optional<std::size_t> Find(std::string_view word) const;
  bool Contains(std::string_view word) const { return Find(word).has_value(); }
  std::span<const float> Row(std::size_t index) const {
    return {data_.data() + index * dim_, dim_};
  }
  double SquaredNorm(std::size_t index) const { return norms_[index]; }

  // 0 for out-of-vocabulary words and zero vectors.
  double Cosine(std::string_view a, std::string_view b) const;
  double CosineAt(std::size_t a, std::size_t b) const;

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<float> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> warnings_;
};

// Text format: header "count dimension", then "word v1 ... vd" per line.
// Throws ParseError with the 1-based line number on a width mismatch or a
// row count that disagrees with the header.
VectorStore ParseVectors(std::string_view text);
VectorStore LoadVectors(const std::filesystem::path& path);
std::string FormatVectors(const VectorStore& store);

// Cosine of two dense vectors, 0 if either is zero.
double Cosine(std::span<const float> a, std::span<const float> b);

}  // namespace duet

#endif  // DUET_VECTORS_H_
