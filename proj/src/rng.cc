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

#include "duet/rng.h"

#include <numeric>

#include "duet/error.h"

namespace duet {

std::uint64_t Rng::Below(std::uint64_t n) {
  if (n == 0) throw ValidationError("Rng::Below: n must be positive");
  // Reject the low 2^64 mod n values so the remainder is unbiased.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    std::uint64_t x = Next();
    if (x >= threshold) return x % n;
  }
}

std::vector<std::size_t> Rng::SampleIndices(std::size_t n, std::size_t k) {
  if (k > n) throw ValidationError("Rng::SampleIndices: k exceeds n");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(Below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t ForkSeed(std::uint64_t parent, std::string_view tag,
                       std::uint64_t index) {
  std::uint64_t h = SplitMix64(parent);
  h = SplitMix64(h ^ Fnv1a64(tag));
  return SplitMix64(h ^ SplitMix64(index));
}

}  // namespace duet
