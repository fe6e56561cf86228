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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "syk/errors.hpp"
#include "syk/rng.hpp"

namespace syk {

namespace {

void check_even_n(int n_majorana) {
  if (n_majorana < 8 || n_majorana % 2 != 0) {
    throw std::invalid_argument("coupling set requires even N >= 8");
  }
  if (n_majorana > 2 * PauliString::kMaxQubits) {
    throw std::invalid_argument("N exceeds the representable qubit count");
  }
}

std::uint64_t binom(std::uint64_t n, int k) {
  if (n < static_cast<std::uint64_t>(k)) return 0;
  std::uint64_t r = 1;
  // r holds C(n-k+i, i) after step i, so every division is exact.
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double effective_normalization(double sum_sq, std::uint64_t k, GaussianNorm norm) {
  const double denom = (norm == GaussianNorm::PerRealization)
                           ? sum_sq
                           : static_cast<double>(k);
  return 1.0 / std::sqrt(denom);
}

/// Support of k distinct tuples drawn uniformly without replacement, in
/// selection order (the order itself is uniformly random).
std::vector<std::uint64_t> sample_support(int n_majorana, std::uint64_t k, Xoshiro256& rng) {
  return sample_distinct(n_total(n_majorana), k, rng);
}

CouplingSet finalize(int n_majorana, CouplingScheme scheme, std::uint64_t seed,
                     std::vector<Coupling> couplings, GaussianNorm norm) {
  std::sort(couplings.begin(), couplings.end(),
            [](const Coupling& a, const Coupling& b) { return a.indices < b.indices; });
  CouplingSet cs;
  cs.n_majorana = n_majorana;
  cs.couplings = std::move(couplings);
  cs.scheme = scheme;
  cs.seed = seed;
  cs.normalization = effective_normalization(cs.sum_squared(), cs.k(), norm);
  return cs;
}

}  // namespace

const char* scheme_name(CouplingScheme scheme) {
  switch (scheme) {
    case CouplingScheme::BinarySparse: return "binary";
    case CouplingScheme::UnarySparse: return "unary";
    case CouplingScheme::GaussianSparse: return "gaussian";
    case CouplingScheme::GaussianDense: return "gaussian-dense";
  }
  return "unknown";
}

std::string scheme_file_token(CouplingScheme scheme) {
  switch (scheme) {
    case CouplingScheme::BinarySparse: return "binary";
    case CouplingScheme::UnarySparse: return "unary";
    case CouplingScheme::GaussianSparse: return "gaussian";
    case CouplingScheme::GaussianDense: return "gaussiandense";
  }
  return "unknown";
}

std::optional<CouplingScheme> scheme_from_name(const std::string& name) {
  if (name == "binary") return CouplingScheme::BinarySparse;
  if (name == "unary") return CouplingScheme::UnarySparse;
  if (name == "gaussian") return CouplingScheme::GaussianSparse;
  if (name == "gaussian-dense" || name == "gaussiandense" || name == "dense") {
    return CouplingScheme::GaussianDense;
  }
  return std::nullopt;
}

double CouplingSet::sparsity() const {
  return static_cast<double>(k()) / static_cast<double>(n_total(n_majorana));
}

double CouplingSet::sum_squared() const {
  double s = 0.0;
  for (const auto& c : couplings) s += c.value * c.value;
  return s;
}

std::array<std::uint64_t, 3> CouplingSet::sign_counts() const {
  std::array<std::uint64_t, 3> counts{0, 0, 0};
  for (const auto& c : couplings) {
    if (c.value == 1.0) {
      ++counts[0];
    } else if (c.value == -1.0) {
      ++counts[1];
    } else {
      ++counts[2];
    }
  }
  return counts;
}

std::uint64_t n_total(int n_majorana) {
  if (n_majorana < 4) throw std::invalid_argument("n_total: N must be at least 4");
  return binom(static_cast<std::uint64_t>(n_majorana), 4);
}

std::array<int, 4> unrank_tuple(std::uint64_t rank) {
  // Colexicographic unranking: rank = C(i1,1) + C(i2,2) + C(i3,3) + C(i4,4)
  // for the 0-based combination i1 < i2 < i3 < i4.
  std::array<int, 4> tuple{};
  std::uint64_t r = rank;
  for (int slot = 4; slot >= 1; --slot) {
    std::uint64_t m = static_cast<std::uint64_t>(slot) - 1;  // C(slot-1, slot) = 0 <= r
    while (binom(m + 1, slot) <= r) ++m;
    r -= binom(m, slot);
    tuple[slot - 1] = static_cast<int>(m) + 1;  // to 1-based
  }
  return tuple;
}

CouplingSet sample_binary(int n_majorana, std::uint64_t k, std::uint64_t seed) {
  check_even_n(n_majorana);
  const std::uint64_t total = n_total(n_majorana);
  if (k < 4) throw std::invalid_argument("sample_binary: K must be at least 4");
  if (k % 2 != 0) throw std::invalid_argument("sample_binary: K must be even");
  if (k > total) throw std::invalid_argument("sample_binary: K exceeds binom(N,4)");
  Xoshiro256 rng(seed);
  const auto support = sample_support(n_majorana, k, rng);
  // The selection order is uniformly random, so giving +1 to the first half
  // realizes the stratified K/2 / K/2 split.
  std::vector<Coupling> couplings(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    couplings[i] = Coupling{unrank_tuple(support[i]), i < k / 2 ? 1.0 : -1.0};
  }
  return finalize(n_majorana, CouplingScheme::BinarySparse, seed, std::move(couplings),
                  GaussianNorm::FixedK);
}

CouplingSet sample_unary(int n_majorana, std::uint64_t k, std::uint64_t seed) {
  check_even_n(n_majorana);
  const std::uint64_t total = n_total(n_majorana);
  if (k < 1 || k > total) throw std::invalid_argument("sample_unary: K out of range");
  Xoshiro256 rng(seed);
  const auto support = sample_support(n_majorana, k, rng);
  std::vector<Coupling> couplings(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    couplings[i] = Coupling{unrank_tuple(support[i]), 1.0};
  }
  return finalize(n_majorana, CouplingScheme::UnarySparse, seed, std::move(couplings),
                  GaussianNorm::FixedK);
}

CouplingSet sample_gaussian(int n_majorana, std::uint64_t k, std::uint64_t seed,
                            bool dense, GaussianNorm norm) {
  check_even_n(n_majorana);
  const std::uint64_t total = n_total(n_majorana);
  if (dense) k = total;
  if (k < 1 || k > total) throw std::invalid_argument("sample_gaussian: K out of range");
  Xoshiro256 rng(seed);
  std::vector<Coupling> couplings(k);
  if (dense) {
    for (std::uint64_t i = 0; i < k; ++i) {
      couplings[i] = Coupling{unrank_tuple(i), rng.normal()};
    }
  } else {
    const auto support = sample_support(n_majorana, k, rng);
    for (std::uint64_t i = 0; i < k; ++i) {
      couplings[i] = Coupling{unrank_tuple(support[i]), rng.normal()};
    }
  }
  return finalize(n_majorana,
                  dense ? CouplingScheme::GaussianDense : CouplingScheme::GaussianSparse,
                  seed, std::move(couplings), norm);
}

CouplingSet sample(CouplingScheme scheme, int n_majorana, std::uint64_t k,
                   std::uint64_t seed, GaussianNorm norm) {
  switch (scheme) {
    case CouplingScheme::BinarySparse: return sample_binary(n_majorana, k, seed);
    case CouplingScheme::UnarySparse: return sample_unary(n_majorana, k, seed);
    case CouplingScheme::GaussianSparse:
      return sample_gaussian(n_majorana, k, seed, false, norm);
    case CouplingScheme::GaussianDense:
      return sample_gaussian(n_majorana, k, seed, true, norm);
  }
  throw std::invalid_argument("sample: unknown scheme");
}

std::vector<HamiltonianTerm> assemble(const CouplingSet& cs) {
  std::vector<HamiltonianTerm> terms;
  terms.reserve(cs.couplings.size());
  for (const auto& c : cs.couplings) {
    terms.push_back(HamiltonianTerm{
        c.indices, cs.normalization * c.value,
        monomial4(c.indices[0], c.indices[1], c.indices[2], c.indices[3], cs.n_majorana)});
  }
  return terms;
}

namespace {

struct ParsedFixture {
  int n_majorana = -1;
  std::optional<double> normalization;  // empty = "auto"
  std::optional<CouplingScheme> scheme;
  std::uint64_t seed = 0;
  std::vector<Coupling> couplings;
  std::vector<int> line_numbers;  // per coupling, for duplicate reports
};

ParsedFixture parse_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open fixture file: " + path);
  ParsedFixture out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;  // blank line
    const auto eq = first.find('=');
    if (eq != std::string::npos) {
      const std::string key = first.substr(0, eq);
      const std::string value = first.substr(eq + 1);
      if (key == "N") {
        out.n_majorana = std::stoi(value);
      } else if (key == "C") {
        if (value != "auto") out.normalization = std::stod(value);
      } else if (key == "scheme") {
        out.scheme = scheme_from_name(value);
        if (!out.scheme) {
          throw DataError("fixture line " + std::to_string(line_no) + ": unknown scheme '" +
                          value + "'");
        }
      } else if (key == "seed") {
        out.seed = std::stoull(value);
      } else {
        throw DataError("fixture line " + std::to_string(line_no) + ": unknown header key '" +
                        key + "'");
      }
      continue;
    }
    double value = 0.0;
    if (first == "+") {
      value = 1.0;
    } else if (first == "-") {
      value = -1.0;
    } else {
      try {
        std::size_t used = 0;
        value = std::stod(first, &used);
        if (used != first.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw DataError("fixture line " + std::to_string(line_no) +
                        ": expected sign or value, got '" + first + "'");
      }
    }
    std::array<int, 4> idx{};
    if (!(ss >> idx[0] >> idx[1] >> idx[2] >> idx[3])) {
      throw DataError("fixture line " + std::to_string(line_no) + ": expected four indices");
    }
    std::string extra;
    if (ss >> extra) {
      throw DataError("fixture line " + std::to_string(line_no) + ": trailing content '" +
                      extra + "'");
    }
    out.couplings.push_back(Coupling{idx, value});
    out.line_numbers.push_back(line_no);
  }
  if (out.n_majorana < 0) throw DataError("fixture is missing the N= header: " + path);
  return out;
}

}  // namespace

CouplingSet read_fixture(const std::string& path) {
  ParsedFixture parsed = parse_fixture(path);
  check_even_n(parsed.n_majorana);
  CouplingSet cs;
  cs.n_majorana = parsed.n_majorana;
  cs.seed = parsed.seed;

  std::map<std::array<int, 4>, int> seen;  // tuple -> first line
  for (std::size_t i = 0; i < parsed.couplings.size(); ++i) {
    const auto& c = parsed.couplings[i];
    const int line_no = parsed.line_numbers[i];
    if (!(1 <= c.indices[0] && c.indices[0] < c.indices[1] && c.indices[1] < c.indices[2] &&
          c.indices[2] < c.indices[3] && c.indices[3] <= parsed.n_majorana)) {
      throw DataError("fixture line " + std::to_string(line_no) +
                      ": indices must satisfy 1 <= a < b < c < d <= N");
    }
    auto [it, inserted] = seen.emplace(c.indices, line_no);
    if (!inserted) {
      throw DataError("fixture line " + std::to_string(line_no) + ": duplicate tuple (first at line " +
                      std::to_string(it->second) + ")");
    }
  }
  cs.couplings = parsed.couplings;
  std::sort(cs.couplings.begin(), cs.couplings.end(),
            [](const Coupling& a, const Coupling& b) { return a.indices < b.indices; });
  if (cs.couplings.empty()) throw DataError("fixture has no couplings: " + path);

  const auto counts = cs.sign_counts();
  if (parsed.scheme) {
    cs.scheme = *parsed.scheme;
  } else {
    cs.scheme = (counts[1] == 0 && counts[2] == 0) ? CouplingScheme::UnarySparse
                                                   : CouplingScheme::BinarySparse;
    if (counts[2] > 0) cs.scheme = CouplingScheme::GaussianSparse;
  }
  cs.normalization =
      parsed.normalization ? *parsed.normalization : 1.0 / std::sqrt(cs.sum_squared());
  return cs;
}

void write_fixture(const CouplingSet& cs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open fixture file for writing: " + path);
  out << "N=" << cs.n_majorana << "\n";
  out << "C=auto\n";
  out << "scheme=" << scheme_name(cs.scheme) << "\n";
  out << "seed=" << cs.seed << "\n";
  out.precision(17);
  for (const auto& c : cs.couplings) {
    if (c.value == 1.0) {
      out << "+";
    } else if (c.value == -1.0) {
      out << "-";
    } else {
      out << c.value;
    }
    out << " " << c.indices[0] << " " << c.indices[1] << " " << c.indices[2] << " "
        << c.indices[3] << "\n";
  }
  if (!out) throw DataError("failed writing fixture file: " + path);
}

FixtureReport validate_fixture(const std::string& path) {
  const CouplingSet cs = read_fixture(path);  // performs all structural checks
  FixtureReport report;
  report.n_majorana = cs.n_majorana;
  report.k = cs.k();
  const auto counts = cs.sign_counts();
  report.positive = counts[0];
  report.negative = counts[1];
  report.non_unit = counts[2];
  report.normalization = cs.normalization;
  std::ostringstream ss;
  ss << "OK: N=" << report.n_majorana << " K=" << report.k << " (+:" << report.positive
     << " -:" << report.negative;
  if (report.non_unit > 0) ss << " other:" << report.non_unit;
  ss << ")";
  report.summary = ss.str();
  return report;
}

}  // namespace syk
