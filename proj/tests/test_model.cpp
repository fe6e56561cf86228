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

#include "syk/model.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "syk/errors.hpp"
#include "syk/rng.hpp"

using namespace syk;

namespace {
const std::string kDataDir = SYK_DATA_DIR;

bool sets_equal(const CouplingSet& a, const CouplingSet& b) {
  if (a.k() != b.k()) return false;
  for (std::size_t i = 0; i < a.couplings.size(); ++i) {
    if (a.couplings[i].indices != b.couplings[i].indices) return false;
    if (a.couplings[i].value != b.couplings[i].value) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("n_total values") {
  CHECK(n_total(8) == 70);
  CHECK(n_total(16) == 1820);
  CHECK(n_total(32) == 35960);
  CHECK(n_total(34) == 46376);
  CHECK_THROWS_AS(n_total(3), std::invalid_argument);
}

TEST_CASE("unrank_tuple enumerates all combinations exactly once") {
  std::set<std::array<int, 4>> seen;
  for (std::uint64_t r = 0; r < n_total(10); ++r) {
    const auto t = unrank_tuple(r);
    CHECK(1 <= t[0]);
    CHECK(t[0] < t[1]);
    CHECK(t[1] < t[2]);
    CHECK(t[2] < t[3]);
    CHECK(t[3] <= 10);
    CHECK(seen.insert(t).second);
  }
  CHECK(seen.size() == 210);
  CHECK(unrank_tuple(0) == std::array<int, 4>{1, 2, 3, 4});
}

TEST_CASE("binary sampler: stratified sign split, C = 1/sqrt(K)") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto cs = sample_binary(16, 32, seed);
    CHECK(cs.k() == 32);
    const auto counts = cs.sign_counts();
    CHECK(counts[0] == 16);
    CHECK(counts[1] == 16);
    CHECK(counts[2] == 0);
    CHECK(cs.normalization == doctest::Approx(1.0 / std::sqrt(32.0)).epsilon(1e-15));
  }
}

TEST_CASE("binary sampler: exhaustion at K = n_total") {
  const auto cs = sample_binary(8, 70, 3);
  CHECK(cs.k() == 70);
  const auto counts = cs.sign_counts();
  CHECK(counts[0] == 35);
  CHECK(counts[1] == 35);
  std::set<std::array<int, 4>> support;
  for (const auto& c : cs.couplings) support.insert(c.indices);
  CHECK(support.size() == 70);
}

TEST_CASE("binary sampler: determinism and seed sensitivity") {
  CHECK(sets_equal(sample_binary(16, 32, 9), sample_binary(16, 32, 9)));
  int collisions = 0;
  for (std::uint64_t pair = 0; pair < 1000; ++pair) {
    const auto a = sample_binary(16, 32, 2 * pair);
    const auto b = sample_binary(16, 32, 2 * pair + 1);
    if (sets_equal(a, b)) ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("binary sampler rejects bad K") {
  CHECK_THROWS_AS(sample_binary(16, 31, 0), std::invalid_argument);  // odd
  CHECK_THROWS_AS(sample_binary(8, 72, 0), std::invalid_argument);   // > n_total
  CHECK_THROWS_AS(sample_binary(16, 2, 0), std::invalid_argument);   // < 4
}

TEST_CASE("unary sampler: all couplings +1") {
  const auto cs = sample_unary(16, 32, 11);
  CHECK(cs.k() == 32);
  const auto counts = cs.sign_counts();
  CHECK(counts[0] == 32);
  CHECK(counts[1] == 0);
  CHECK(cs.normalization == doctest::Approx(1.0 / std::sqrt(32.0)).epsilon(1e-15));
  // Odd K is allowed for unary.
  CHECK(sample_unary(16, 31, 1).k() == 31);
}

TEST_CASE("unary sampler at K = n_total has no randomness") {
  const auto a = sample_unary(8, 70, 1);
  const auto b = sample_unary(8, 70, 999);
  CHECK(sets_equal(a, b));
}

TEST_CASE("gaussian sampler: dense flag fills every tuple") {
  const auto cs = sample_gaussian(10, 0, 4, /*dense=*/true);
  CHECK(cs.k() == 210);
  CHECK(cs.scheme == CouplingScheme::GaussianDense);
  for (const auto& c : cs.couplings) CHECK(c.value != 0.0);
  // bit-for-bit determinism
  const auto cs2 = sample_gaussian(10, 0, 4, true);
  CHECK(sets_equal(cs, cs2));
}

TEST_CASE("gaussian normalization conventions") {
  const auto per_real = sample_gaussian(12, 30, 8, false, GaussianNorm::PerRealization);
  CHECK(per_real.normalization ==
        doctest::Approx(1.0 / std::sqrt(per_real.sum_squared())).epsilon(1e-15));
  const auto fixed_k = sample_gaussian(12, 30, 8, false, GaussianNorm::FixedK);
  CHECK(fixed_k.normalization == doctest::Approx(1.0 / std::sqrt(30.0)).epsilon(1e-15));
  // Same support and values, different constant.
  CHECK(sets_equal(per_real, fixed_k));
}

TEST_CASE("support sampling is uniform (N=8, K=2)") {
  // 1e5 draws over the C(70,2) = 2415 possible supports; each support count
  // should sit within 5 sigma of the uniform expectation.
  std::map<std::array<int, 4>, std::uint64_t> rank_of;
  for (std::uint64_t r = 0; r < 70; ++r) rank_of[unrank_tuple(r)] = r;
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto cs = sample_unary(8, 2, static_cast<std::uint64_t>(i) + 12345);
    REQUIRE(cs.couplings.size() == 2);
    const std::uint64_t r0 = rank_of.at(cs.couplings[0].indices);
    const std::uint64_t r1 = rank_of.at(cs.couplings[1].indices);
    ++counts[{std::min(r0, r1), std::max(r0, r1)}];
  }
  const double n_supports = 2415.0;
  const double mean = draws / n_supports;
  const double sigma = std::sqrt(mean * (1.0 - 1.0 / n_supports));
  CHECK(counts.size() == 2415);  // every support observed
  for (const auto& [support, count] : counts) {
    CHECK(std::abs(count - mean) < 5.0 * sigma);
  }
}

TEST_CASE("assemble: single-coupling set") {
  CouplingSet cs;
  cs.n_majorana = 8;
  cs.couplings = {Coupling{{1, 2, 3, 4}, 1.0}};
  cs.normalization = 1.0;
  const auto terms = assemble(cs);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].coefficient == 1.0);
  CHECK(terms[0].op == monomial4(1, 2, 3, 4, 8));
}

TEST_CASE("assemble folds C*J and keeps tuple order") {
  const auto cs = sample_binary(12, 24, 5);
  const auto terms = assemble(cs);
  REQUIRE(terms.size() == 24);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    CHECK(terms[i].coefficient ==
          doctest::Approx(cs.normalization * cs.couplings[i].value).epsilon(1e-15));
    if (i > 0) CHECK(terms[i - 1].indices < terms[i].indices);
  }
}

TEST_CASE("shipped N=32 fixture validates: 30 terms, 15/15 signs") {
  const auto report = validate_fixture(kDataDir + "/fixtures/binary_n32_k30.txt");
  CHECK(report.n_majorana == 32);
  CHECK(report.k == 30);
  CHECK(report.positive == 15);
  CHECK(report.negative == 15);
  CHECK(report.summary == "OK: N=32 K=30 (+:15 -:15)");
  const auto cs = read_fixture(kDataDir + "/fixtures/binary_n32_k30.txt");
  CHECK(cs.normalization == doctest::Approx(1.0 / std::sqrt(30.0)).epsilon(1e-15));
  CHECK(assemble(cs).size() == 30);
}

TEST_CASE("shipped N=34 fixture validates: 36 terms, 18/18 signs") {
  const auto report = validate_fixture(kDataDir + "/fixtures/binary_n34_k36.txt");
  CHECK(report.n_majorana == 34);
  CHECK(report.k == 36);
  CHECK(report.positive == 18);
  CHECK(report.negative == 18);
  CHECK(report.summary == "OK: N=34 K=36 (+:18 -:18)");
}

TEST_CASE("fixture round trip") {
  const std::string path = "roundtrip_fixture.txt";
  for (const auto scheme : {CouplingScheme::BinarySparse, CouplingScheme::UnarySparse,
                            CouplingScheme::GaussianSparse}) {
    const auto original = sample(scheme, 12, 24, 77);
    write_fixture(original, path);
    const auto loaded = read_fixture(path);
    CHECK(loaded.n_majorana == original.n_majorana);
    CHECK(loaded.scheme == original.scheme);
    CHECK(sets_equal(loaded, original));
    CHECK(loaded.normalization == doctest::Approx(original.normalization).epsilon(1e-12));
  }
  std::remove(path.c_str());
}

TEST_CASE("fixture parser reports malformed input with line numbers") {
  const std::string path = "bad_fixture.txt";
  auto write_and_check = [&](const std::string& content, const std::string& needle) {
    std::ofstream(path) << content;
    try {
      read_fixture(path);
      FAIL_CHECK("expected DataError for: " << content);
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  write_and_check("N=8\n+ 1 2 3 3\n", "line 2");                 // non-increasing
  write_and_check("N=8\n+ 1 2 3 4\n+ 1 2 3 4\n", "duplicate");   // duplicate tuple
  write_and_check("N=8\n* 1 2 3 4\n", "expected sign or value");  // bad sign
  write_and_check("+ 1 2 3 4\n", "missing the N= header");
  write_and_check("N=8\n+ 1 2 3 9\n", "line 2");                 // out of bounds
  std::remove(path.c_str());
}
