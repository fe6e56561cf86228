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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "syk/pauli.hpp"

namespace syk {

/// How the nonzero couplings J_abcd are drawn.
enum class CouplingScheme { BinarySparse, UnarySparse, GaussianSparse, GaussianDense };

const char* scheme_name(CouplingScheme scheme);           // "binary", ...
std::string scheme_file_token(CouplingScheme scheme);     // filename-safe token
std::optional<CouplingScheme> scheme_from_name(const std::string& name);

/// Normalization convention for Gaussian couplings. The sum of squared
/// couplings fluctuates realization to realization, so the constant that
/// makes the eigenvalue variance exactly one must be computed per draw;
/// the expectation-based 1/sqrt(K) variant is kept behind this switch.
/// Binary and unary couplings have sum J^2 = K exactly, so both conventions
/// coincide there.
enum class GaussianNorm { PerRealization, FixedK };

struct Coupling {
  std::array<int, 4> indices;  // 1-based, strictly increasing
  double value;                // J_abcd
};

/// One disorder realization: the nonzero couplings, the scheme they were
/// drawn under, and the normalization constant C with C^2 sum J^2 = 1.
struct CouplingSet {
  int n_majorana = 0;
  std::vector<Coupling> couplings;  // sorted by index tuple
  double normalization = 1.0;       // C
  CouplingScheme scheme = CouplingScheme::BinarySparse;
  std::uint64_t seed = 0;

  std::uint64_t k() const { return couplings.size(); }
  double sparsity() const;  // p = K / binom(N, 4)
  double sum_squared() const;
  /// (count of +, count of -, count of other values)
  std::array<std::uint64_t, 3> sign_counts() const;
};

/// binom(N, 4), exact integer arithmetic.
std::uint64_t n_total(int n_majorana);

/// Index tuple of the combination with the given colexicographic rank,
/// rank in [0, binom(N,4)). Inverse of combination ranking; 1-based output.
std::array<int, 4> unrank_tuple(std::uint64_t rank);

CouplingSet sample_binary(int n_majorana, std::uint64_t k, std::uint64_t seed);
CouplingSet sample_unary(int n_majorana, std::uint64_t k, std::uint64_t seed);
CouplingSet sample_gaussian(int n_majorana, std::uint64_t k, std::uint64_t seed,
                            bool dense = false,
                            GaussianNorm norm = GaussianNorm::PerRealization);
CouplingSet sample(CouplingScheme scheme, int n_majorana, std::uint64_t k,
                   std::uint64_t seed, GaussianNorm norm = GaussianNorm::PerRealization);

/// One summand of the Hamiltonian: coefficient = C * J_abcd, operator the
/// reduced Hermitian Pauli string for i^2 chi_a chi_b chi_c chi_d.
struct HamiltonianTerm {
  std::array<int, 4> indices;
  double coefficient;
  PauliString op;
};

/// Terms in sorted tuple order, coefficients folded. Deterministic.
std::vector<HamiltonianTerm> assemble(const CouplingSet& cs);

// --- fixture text format ---------------------------------------------------
//
// Header lines `key=value` (N required; C optional, "auto" = 1/sqrt(sum J^2);
// scheme and seed optional), then one coupling per line:
//   <sign-or-value> <a> <b> <c> <d>
// where the first token is '+' or '-' (meaning +1 / -1) or a decimal value.
// '#' starts a comment; blank lines are ignored.

CouplingSet read_fixture(const std::string& path);
void write_fixture(const CouplingSet& cs, const std::string& path);

struct FixtureReport {
  int n_majorana = 0;
  std::uint64_t k = 0;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  std::uint64_t non_unit = 0;  // entries that are not exactly +-1
  double normalization = 1.0;
  std::string summary;  // e.g. "OK: N=32 K=30 (+:15 -:15)"
};

/// Parse and validate a fixture file: index ordering, bounds, duplicates,
/// sign balance. Throws DataError with a line number on malformed input.
FixtureReport validate_fixture(const std::string& path);

}  // namespace syk
