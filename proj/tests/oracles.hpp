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

// Test-only oracles, independent of the symplectic Pauli-string code path:
// operators are built as explicit Kronecker products of 2x2 matrices, so any
// bookkeeping bug in the bit-mask algebra shows up as a matrix mismatch.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace syk::testing {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using namespace std::complex_literals;

inline Matrix2cd pauli_id() { return Matrix2cd::Identity(); }
inline Matrix2cd pauli_x() {
  Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix2cd pauli_y() {
  Matrix2cd m;
  m << 0, -1i, 1i, 0;
  return m;
}
inline Matrix2cd pauli_z() {
  Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

/// Kronecker chain with letters[0] acting on qubit 1 (the least significant
/// bit of the basis index), matching the library's basis convention.
inline MatrixXcd kron_chain(const std::vector<Matrix2cd>& letters) {
  MatrixXcd acc = letters.back();
  for (std::size_t i = letters.size() - 1; i-- > 0;) {
    MatrixXcd next(acc.rows() * 2, acc.cols() * 2);
    for (int r = 0; r < acc.rows(); ++r) {
      for (int c = 0; c < acc.cols(); ++c) {
        next.block<2, 2>(2 * r, 2 * c) = acc(r, c) * letters[i];
      }
    }
    acc = next;
  }
  return acc;
}

/// Jordan-Wigner Majorana as an explicit matrix:
/// chi_{2k-1} = Z_1 ... Z_{k-1} X_k, chi_{2k} = Z_1 ... Z_{k-1} Y_k.
inline MatrixXcd dense_majorana(int a, int n_majorana) {
  const int n_qubits = n_majorana / 2;
  const int site = (a - 1) / 2;  // 0-based
  std::vector<Matrix2cd> letters(n_qubits, pauli_id());
  for (int q = 0; q < site; ++q) letters[q] = pauli_z();
  letters[site] = (a % 2 == 1) ? pauli_x() : pauli_y();
  return kron_chain(letters);
}

}  // namespace syk::testing
