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
#include <bit>
#include <complex>
#include <cstdint>
#include <string>

namespace syk {

/// An n-qubit Pauli operator in the symplectic encoding: a pair of bit masks
/// (x, z) naming the Hermitian letter on each qubit (00 -> I, 10 -> X,
/// 11 -> Y, 01 -> Z) together with a global phase i^phase, phase in {0,1,2,3}.
/// Products cost a handful of word operations; Hermiticity and commutation
/// are bit tests. Values are immutable after construction and safe to share
/// across threads.
class PauliString {
public:
  using Mask = std::uint64_t;
  static constexpr int kMaxQubits = 64;
  /// to_dense() refuses above this many qubits (N = 32 Majoranas) unless the
  /// caller raises the cap explicitly.
  static constexpr int kDenseCapQubits = 16;

  PauliString() = default;

  static PauliString identity(int n_qubits);
  /// Parse labels like "+XZ_Y", "-iX", "XX". Qubit 1 is the leftmost letter.
  static PauliString from_label(const std::string& label);
  /// Direct symplectic construction; phase is the exponent of i.
  static PauliString from_masks(int n_qubits, Mask x, Mask z, int phase_exponent = 0);

  int n_qubits() const { return n_qubits_; }
  Mask x_mask() const { return x_; }
  Mask z_mask() const { return z_; }
  /// Exponent p of the global phase i^p.
  int phase_exponent() const { return phase_; }
  std::complex<double> phase() const;

  bool is_identity() const { return x_ == 0 && z_ == 0 && phase_ == 0; }
  bool is_hermitian() const { return phase_ == 0 || phase_ == 2; }
  /// Number of non-identity letters.
  int weight() const { return std::popcount(x_ | z_); }

  PauliString adjoint() const;
  /// Equal to adjoint(): Pauli strings are unitary involutions up to phase.
  PauliString inverse() const { return adjoint(); }

  /// True iff the strings commute; otherwise they anticommute. The sign is
  /// (-1)^(<x1,z2> + <x2,z1>), independent of phases.
  bool commutes_with(const PauliString& other) const;

  bool operator==(const PauliString& other) const = default;

  /// A Pauli string has exactly one nonzero entry per column: in column c it
  /// sits at row c^x with value i^(phase + |x&z| + 2*popcount(z&c)).
  struct Entry {
    std::uint64_t row;
    std::complex<double> value;
  };
  Entry column_entry(std::uint64_t column) const;

  /// Dense 2^n x 2^n matrix. Intended for oracles and small systems.
  Eigen::MatrixXcd to_dense(int max_qubits = kDenseCapQubits) const;

  /// Label such as "+XZ_Y" (phase prefix "+", "+i", "-", "-i").
  std::string label() const;

  friend PauliString product(const PauliString& p, const PauliString& q);

private:
  PauliString(int n_qubits, Mask x, Mask z, std::uint8_t phase)
      : n_qubits_(n_qubits), x_(x), z_(z), phase_(phase) {}

  int n_qubits_ = 0;
  Mask x_ = 0;
  Mask z_ = 0;
  std::uint8_t phase_ = 0;  // i^phase_
};

/// Exact symbolic product with the phase tracked mod 4. Associative.
PauliString product(const PauliString& p, const PauliString& q);
inline PauliString operator*(const PauliString& p, const PauliString& q) {
  return product(p, q);
}

/// Jordan-Wigner image of the Majorana fermion chi_a acting on n_majorana/2
/// qubits (1-based index a). Convention, pinned by tests:
///   chi_{2k-1} = Z_1 ... Z_{k-1} X_k,   chi_{2k} = Z_1 ... Z_{k-1} Y_k,
/// normalized so chi_a^2 = identity ({chi_a, chi_b} = 2 delta_ab).
PauliString majorana(int a, int n_majorana);

/// The reduced Pauli string for i^2 chi_a chi_b chi_c chi_d with
/// a < b < c < d. The i^2 prefactor cancels the imaginary phases of the
/// four-Majorana product, so the result is Hermitian (phase +1 or -1).
PauliString monomial4(int a, int b, int c, int d, int n_majorana);

/// Global fermion parity operator Z_1 Z_2 ... Z_n. Every monomial4 commutes
/// with it, which is what makes the Hamiltonian block-diagonal.
PauliString parity_string(int n_qubits);

}  // namespace syk
