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

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syk/model.hpp"

namespace syk {

/// Fermion-parity sector. The parity operator is Z_1 ... Z_{N/2}; the even
/// (odd) sector is spanned by computational basis states of even (odd)
/// Hamming weight, each of dimension 2^(N/2 - 1).
enum class SectorLabel { Even, Odd };

/// Full matrices above this dimension are refused without an explicit
/// override (the cap is an argument everywhere it applies).
inline constexpr std::uint64_t kDefaultMatrixDimCap = std::uint64_t{1} << 14;

/// Dense Hermitian matrix for the given terms, either over the full
/// 2^(N/2)-dimensional space or restricted to one parity sector. Entries are
/// streamed per term (each Pauli string contributes one entry per column).
Eigen::MatrixXcd build_matrix(std::span<const HamiltonianTerm> terms,
                              std::optional<SectorLabel> sector = std::nullopt,
                              std::uint64_t dim_cap = kDefaultMatrixDimCap);

/// All eigenvalues, ascending. Verifies Hermiticity to 1e-12 first.
/// Delegates to LAPACKE above a size threshold when available, otherwise to
/// Eigen's SelfAdjointEigenSolver.
std::vector<double> eigenvalues(const Eigen::MatrixXcd& m);
std::vector<double> eigenvalues(const Eigen::MatrixXd& m);  // real symmetric

/// One cluster of numerically coincident eigenvalues.
struct Multiplicity {
  double value;  // cluster representative (first member)
  int count;
};

/// Greedy clustering of a sorted spectrum: a value joins the current cluster
/// if it lies within tol of the cluster representative.
std::vector<Multiplicity> detect_degeneracies(std::span<const double> sorted_eigs, double tol);

/// Default tolerance: 1e-10 * max(1, max |eigenvalue|).
double default_degeneracy_tol(std::span<const double> eigs);

std::vector<double> distinct_values(const std::vector<Multiplicity>& mults);

enum class DegeneracyClass { LeastDegenerate, ExtraDegenerate };

/// Least degeneracy per parity sector means all multiplicities 1 for
/// N mod 8 in {0, 2, 6} and all multiplicities 2 for N mod 8 = 4.
DegeneracyClass classify_degeneracy(
    int n_majorana, const std::array<std::vector<Multiplicity>, 2>& sector_multiplicities);

/// Eigenvalues and degeneracy data of one realization.
struct SpectrumRecord {
  int n_majorana = 0;
  std::uint64_t k = 0;
  CouplingScheme scheme = CouplingScheme::BinarySparse;
  std::uint64_t seed = 0;
  double degeneracy_tol = 0.0;
  std::vector<double> eigenvalues;                          // full spectrum, sorted
  std::array<std::vector<double>, 2> sector_eigenvalues;    // [Even, Odd], sorted
  std::vector<Multiplicity> multiplicities;                 // full-spectrum clusters
  std::array<std::vector<Multiplicity>, 2> sector_multiplicities;

  DegeneracyClass degeneracy_class() const {
    return classify_degeneracy(n_majorana, sector_multiplicities);
  }
  double sum_sq_over_dim() const;  // should be 1 for normalized models
  std::uint64_t dimension() const { return std::uint64_t{1} << (n_majorana / 2); }

  std::string canonical_filename(const std::string& extension) const;
};

enum class SpectrumFileFormat { Binary, Csv };

/// Persist/load a record. The binary format stores eigenvalues as
/// little-endian 64-bit floats after a one-line JSON metadata header;
/// multiplicities are recomputed on load rather than stored.
void save_spectrum(const SpectrumRecord& record, const std::string& path,
                   SpectrumFileFormat format = SpectrumFileFormat::Binary);
SpectrumRecord load_spectrum(const std::string& path);

/// Sector-wise diagonalization of one realization (the default execution
/// path; full-matrix assembly stays available through build_matrix for
/// oracle tests).
SpectrumRecord diagonalize(const CouplingSet& cs,
                           std::uint64_t dim_cap = kDefaultMatrixDimCap,
                           std::optional<double> degeneracy_tol = std::nullopt);

}  // namespace syk
