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

#include "syk/spectrum.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "syk/errors.hpp"

using namespace syk;

namespace {
const std::string kDataDir = SYK_DATA_DIR;

std::vector<double> sorted_union(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
}  // namespace

TEST_CASE("single term +Z1Z2 at N=8: diagonal, eigenvalues +-1 with multiplicity 8") {
  CouplingSet cs;
  cs.n_majorana = 8;
  cs.couplings = {Coupling{{1, 2, 3, 4}, 1.0}};
  cs.normalization = 1.0;
  const auto terms = assemble(cs);
  const auto m = build_matrix(terms);
  CHECK(m.rows() == 16);
  // Diagonal with +-1 entries.
  for (Eigen::Index i = 0; i < 16; ++i) {
    for (Eigen::Index j = 0; j < 16; ++j) {
      if (i == j) {
        CHECK(std::abs(std::abs(m(i, j).real()) - 1.0) == 0.0);
        CHECK(m(i, j).imag() == 0.0);
      } else {
        CHECK(std::abs(m(i, j)) == 0.0);
      }
    }
  }
  const auto eigs = eigenvalues(m);
  CHECK(std::count_if(eigs.begin(), eigs.end(), [](double e) { return e < 0; }) == 8);
  CHECK(std::count_if(eigs.begin(), eigs.end(), [](double e) { return e > 0; }) == 8);
}

TEST_CASE("assembled matrices are exactly Hermitian") {
  const auto cs = sample_binary(12, 24, 42);
  const auto terms = assemble(cs);
  const auto full = build_matrix(terms);
  CHECK((full - full.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  const auto even = build_matrix(terms, SectorLabel::Even);
  CHECK((even - even.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eigenvalues of a diagonal matrix") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const auto eigs = eigenvalues(m);
  CHECK(eigs == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("eigenvalues rejects non-Hermitian input") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eigenvalues(m), std::invalid_argument);
}

TEST_CASE("single-term Hamiltonian with coefficient 0.5") {
  CouplingSet cs;
  cs.n_majorana = 10;
  cs.couplings = {Coupling{{2, 4, 7, 9}, 1.0}};
  cs.normalization = 0.5;
  const auto eigs = eigenvalues(build_matrix(assemble(cs)));
  const auto dim = eigs.size();
  CHECK(dim == 32);
  for (std::size_t i = 0; i < dim / 2; ++i) CHECK(eigs[i] == doctest::Approx(-0.5).epsilon(1e-14));
  for (std::size_t i = dim / 2; i < dim; ++i) CHECK(eigs[i] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("dual-path oracle: sector union equals the full spectrum (N=10, K=20)") {
  const auto cs = sample_binary(10, 20, 7);
  const auto terms = assemble(cs);
  const auto full = eigenvalues(build_matrix(terms));
  const auto even = eigenvalues(build_matrix(terms, SectorLabel::Even));
  const auto odd = eigenvalues(build_matrix(terms, SectorLabel::Odd));
  const auto merged = sorted_union(even, odd);
  REQUIRE(full.size() == merged.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    CHECK(full[i] == doctest::Approx(merged[i]).epsilon(0).scale(1).epsilon(1e-9));
  }
}

TEST_CASE("solver residual meets the accuracy target") {
  const auto cs = sample_binary(10, 20, 19);
  const auto m = build_matrix(assemble(cs));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  const double norm = m.operatorNorm();
  for (const Eigen::Index idx : {Eigen::Index{0}, Eigen::Index{15}, Eigen::Index{31}}) {
    const auto v = solver.eigenvectors().col(idx);
    const double residual = (m * v - solver.eigenvalues()(idx) * v).norm();
    CHECK(residual <= 1e-10 * norm);
  }
  // and the two solver paths agree
  const auto eigs = eigenvalues(m);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    CHECK(eigs[static_cast<std::size_t>(i)] ==
          doctest::Approx(solver.eigenvalues()(i)).epsilon(1e-11));
  }
}

TEST_CASE("eigenvalue-variance normalization holds for every scheme at N=12") {
  for (const auto scheme : {CouplingScheme::BinarySparse, CouplingScheme::UnarySparse,
                            CouplingScheme::GaussianSparse, CouplingScheme::GaussianDense}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const std::uint64_t k = (scheme == CouplingScheme::GaussianDense) ? n_total(12) : 24;
      const auto record = diagonalize(sample(scheme, 12, k, seed));
      CHECK(std::abs(record.sum_sq_over_dim() - 1.0) < 1e-10);
      double trace = 0.0;
      for (const double e : record.eigenvalues) trace += e;
      CHECK(std::abs(trace) < 1e-10 * static_cast<double>(record.dimension()));
    }
  }
}

TEST_CASE("global coupling flip negates the spectrum") {
  const auto cs = sample_binary(12, 24, 99);
  CouplingSet flipped = cs;
  for (auto& c : flipped.couplings) c.value = -c.value;
  const auto m = build_matrix(assemble(cs));
  const auto mf = build_matrix(assemble(flipped));
  CHECK((m + mf).cwiseAbs().maxCoeff() == 0.0);  // H -> -H exactly
  const auto eigs = eigenvalues(m);
  auto negated = eigenvalues(mf);
  std::reverse(negated.begin(), negated.end());
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    CHECK(eigs[i] == doctest::Approx(-negated[i]).epsilon(1e-12));
  }
}

TEST_CASE("detect_degeneracies basics") {
  const std::vector<double> eigs{1.0, 1.0, 2.0};
  const auto clusters = detect_degeneracies(eigs, 1e-10);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].value == 1.0);
  CHECK(clusters[0].count == 2);
  CHECK(clusters[1].value == 2.0);
  CHECK(clusters[1].count == 1);
}

TEST_CASE("single term at N=12 gives two clusters of multiplicity 32") {
  CouplingSet cs;
  cs.n_majorana = 12;
  cs.couplings = {Coupling{{1, 2, 3, 4}, 1.0}};
  cs.normalization = 1.0 / std::sqrt(1.0);
  const auto record = diagonalize(cs);
  REQUIRE(record.multiplicities.size() == 2);
  CHECK(record.multiplicities[0].count == 32);
  CHECK(record.multiplicities[1].count == 32);
  CHECK(record.multiplicities[0].value == doctest::Approx(-cs.normalization).epsilon(1e-12));
  CHECK(record.multiplicities[1].value == doctest::Approx(+cs.normalization).epsilon(1e-12));
}

TEST_CASE("degeneracy classification rules") {
  auto mult = [](std::vector<int> counts) {
    std::vector<Multiplicity> out;
    double v = 0.0;
    for (const int c : counts) out.push_back(Multiplicity{v += 1.0, c});
    return out;
  };
  // N = 16 (0 mod 8): all singletons is least degenerate.
  CHECK(classify_degeneracy(16, {mult({1, 1, 1}), mult({1, 1})}) ==
        DegeneracyClass::LeastDegenerate);
  CHECK(classify_degeneracy(16, {mult({1, 2, 1}), mult({1, 1})}) ==
        DegeneracyClass::ExtraDegenerate);
  // N = 20 (4 mod 8): everything doubly degenerate within each sector.
  CHECK(classify_degeneracy(20, {mult({2, 2}), mult({2, 2})}) ==
        DegeneracyClass::LeastDegenerate);
  CHECK(classify_degeneracy(20, {mult({2, 4}), mult({2, 2})}) ==
        DegeneracyClass::ExtraDegenerate);
  CHECK(classify_degeneracy(20, {mult({1, 2}), mult({2, 2})}) ==
        DegeneracyClass::ExtraDegenerate);
  CHECK_THROWS_AS(classify_degeneracy(15, {mult({1}), mult({1})}), std::invalid_argument);
}

TEST_CASE("N=10 (2 mod 8): sector spectra coincide") {
  const auto record = diagonalize(sample_binary(10, 40, 21));
  const auto& even = record.sector_eigenvalues[0];
  const auto& odd = record.sector_eigenvalues[1];
  REQUIRE(even.size() == odd.size());
  for (std::size_t i = 0; i < even.size(); ++i) {
    CHECK(even[i] == doctest::Approx(odd[i]).epsilon(1e-9));
  }
}

TEST_CASE("N=12 (4 mod 8): doubly degenerate within each sector") {
  const auto record = diagonalize(sample_binary(12, 48, 2));
  for (int s = 0; s < 2; ++s) {
    for (const auto& m : record.sector_multiplicities[s]) CHECK(m.count == 2);
  }
  CHECK(record.degeneracy_class() == DegeneracyClass::LeastDegenerate);
}

TEST_CASE("memory cap refuses oversized matrices") {
  const auto cs = read_fixture(kDataDir + "/fixtures/binary_n32_k30.txt");
  CHECK_THROWS_AS(diagonalize(cs), ResourceLimitError);
  CouplingSet small = sample_binary(12, 24, 1);
  CHECK_THROWS_AS(diagonalize(small, /*dim_cap=*/8), ResourceLimitError);
}

TEST_CASE("mixed-N terms are rejected") {
  auto terms_a = assemble(sample_binary(10, 20, 1));
  const auto terms_b = assemble(sample_binary(12, 20, 1));
  terms_a.push_back(terms_b.front());
  CHECK_THROWS_AS(build_matrix(terms_a), std::invalid_argument);
}

TEST_CASE("spectrum record round trip (binary and CSV)") {
  const auto record = diagonalize(sample_binary(10, 20, 33));
  for (const auto format : {SpectrumFileFormat::Binary, SpectrumFileFormat::Csv}) {
    const std::string path =
        record.canonical_filename(format == SpectrumFileFormat::Binary ? ".spec" : ".csv");
    save_spectrum(record, path, format);
    const auto loaded = load_spectrum(path);
    CHECK(loaded.n_majorana == record.n_majorana);
    CHECK(loaded.k == record.k);
    CHECK(loaded.scheme == record.scheme);
    CHECK(loaded.seed == record.seed);
    REQUIRE(loaded.eigenvalues.size() == record.eigenvalues.size());
    if (format == SpectrumFileFormat::Binary) {
      CHECK(loaded.eigenvalues == record.eigenvalues);  // bit exact
      CHECK(loaded.sector_eigenvalues[0] == record.sector_eigenvalues[0]);
    } else {
      for (std::size_t i = 0; i < loaded.eigenvalues.size(); ++i) {
        CHECK(loaded.eigenvalues[i] == doctest::Approx(record.eigenvalues[i]).epsilon(1e-15));
      }
    }
    std::remove(path.c_str());
  }
  CHECK(record.canonical_filename(".spec") == "N10_K20_binary_s33.spec");
}
