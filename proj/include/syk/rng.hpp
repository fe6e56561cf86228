// Copyright 2026 The sykspectra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace syk {

// Seeding and sampling are implemented from scratch on top of two published
// generators (SplitMix64 and xoshiro256++) so that a (seed, realization)
// pair produces the same stream on every machine. std::random distributions
// are implementation-defined and must not be used anywhere results need to
// be reproducible.

/// SplitMix64 output function (Steele, Lea, Vigna). Bijective on uint64.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seed for realization `index` of an ensemble rooted at `base_seed`.
/// index -> base_seed + index*gamma is injective (gamma odd), and splitmix64
/// is a bijection, so streams are pairwise distinct for all indices.
constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(base_seed + index * 0x9e3779b97f4a7c15ull);
}

/// xoshiro256++ (Blackman, Vigna 2019). State is seeded through SplitMix64.
class Xoshiro256 {
public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = s;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      word = z ^ (z >> 31);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1): top 53 bits scaled.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, bound). Lemire's multiply-reject method.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Standard normal via the Marsaglia polar method.
  double normal();

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Uniform sample of `k` distinct values from {0, ..., n-1}, in random order
/// (partial Fisher-Yates; the order of the returned sample is itself uniform).
std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t k, Xoshiro256& rng);

}  // namespace syk
