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

#include "syk/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

using namespace syk;

TEST_CASE("same seed reproduces the same stream") {
  Xoshiro256 a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
  CHECK(a.normal() == b.normal());
  CHECK(a.uniform_below(97) == b.uniform_below(97));
}

TEST_CASE("derived stream seeds are pairwise distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    CHECK(seen.insert(derive_stream_seed(42, i)).second);
  }
}

TEST_CASE("uniform_below stays in range and covers small ranges") {
  Xoshiro256 rng(7);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 100000; ++i) ++counts[rng.uniform_below(10)];
  for (const int c : counts) {
    // 5 sigma band around 10000 (sigma ~ 95)
    CHECK(c > 10000 - 480);
    CHECK(c < 10000 + 480);
  }
}

TEST_CASE("normal moments") {
  Xoshiro256 rng(99);
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.005);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("sample_distinct draws without replacement") {
  Xoshiro256 rng(5);
  const auto sample = sample_distinct(70, 35, rng);
  CHECK(sample.size() == 35);
  std::set<std::uint64_t> unique(sample.begin(), sample.end());
  CHECK(unique.size() == 35);
  for (const auto v : sample) CHECK(v < 70);
  CHECK_THROWS_AS(sample_distinct(5, 6, rng), std::invalid_argument);
}
