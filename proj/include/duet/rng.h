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

#ifndef DUET_RNG_H_
#define DUET_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace duet {

// Portable deterministic generator.
//
// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
// standard. Bounded integers use rejection sampling (never the
// implementation-defined std::uniform_int_distribution), so a given seed
// yields the same boards and key cards with every compiler and platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return Uniform01() < p; }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    Shuffle(std::span<T>(items));
  }

  // k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> SampleIndices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

// Derives an independent child seed: SplitMix64 finalizer over the parent
// seed, an FNV-1a hash of `tag` and `index`. Every subsystem that needs
// randomness forks its own stream from the run's root seed this way.
std::uint64_t ForkSeed(std::uint64_t parent, std::string_view tag,
                       std::uint64_t index = 0);

std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace duet

#endif  // DUET_RNG_H_
