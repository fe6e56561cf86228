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

#include "syk/pauli.hpp"

#include <cassert>
#include <stdexcept>

#include "syk/errors.hpp"

namespace syk {

namespace {

constexpr std::complex<double> kPhaseValues[4] = {
    {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > PauliString::kMaxQubits) {
    throw std::invalid_argument("PauliString: qubit count out of range [1, 64]");
  }
}

}  // namespace

PauliString PauliString::identity(int n_qubits) {
  check_qubit_count(n_qubits);
  return PauliString(n_qubits, 0, 0, 0);
}

PauliString PauliString::from_label(const std::string& label) {
  std::size_t pos = 0;
  std::uint8_t phase = 0;
  if (pos < label.size() && (label[pos] == '+' || label[pos] == '-')) {
    if (label[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < label.size() && label[pos] == 'i') {
    phase = static_cast<std::uint8_t>((phase + 1) % 4);
    ++pos;
  }
  const std::string letters = label.substr(pos);
  if (letters.empty()) throw std::invalid_argument("PauliString label has no letters");
  check_qubit_count(static_cast<int>(letters.size()));
  Mask x = 0, z = 0;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const Mask bit = Mask{1} << q;
    switch (letters[q]) {
      case 'I':
      case '_':
        break;
      case 'X':
        x |= bit;
        break;
      case 'Y':
        x |= bit;
        z |= bit;
        break;
      case 'Z':
        z |= bit;
        break;
      default:
        throw std::invalid_argument("PauliString label: invalid letter");
    }
  }
  return PauliString(static_cast<int>(letters.size()), x, z, phase);
}

std::complex<double> PauliString::phase() const { return kPhaseValues[phase_]; }

PauliString PauliString::adjoint() const {
  // The letter string is Hermitian, so only the global phase conjugates.
  return PauliString(n_qubits_, x_, z_, static_cast<std::uint8_t>((4 - phase_) % 4));
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (n_qubits_ != other.n_qubits_) {
    throw std::invalid_argument("commutes_with: qubit-count mismatch");
  }
  const int sign = (std::popcount(x_ & other.z_) + std::popcount(other.x_ & z_)) & 1;
  return sign == 0;
}

PauliString product(const PauliString& p, const PauliString& q) {
  if (p.n_qubits_ != q.n_qubits_) {
    throw std::invalid_argument("product: qubit-count mismatch");
  }
  const PauliString::Mask x = p.x_ ^ q.x_;
  const PauliString::Mask z = p.z_ ^ q.z_;
  // Letter strings satisfy B(x1,z1) B(x2,z2) =
  //   i^(w1 + w2 - w3 + 2<z1,x2>) B(x1^x2, z1^z2), with w = |x & z|
  // the Y-letter count; <,> the bitwise inner product.
  const int w1 = std::popcount(p.x_ & p.z_);
  const int w2 = std::popcount(q.x_ & q.z_);
  const int w3 = std::popcount(x & z);
  const int cross = std::popcount(p.z_ & q.x_);
  const int phase = ((p.phase_ + q.phase_ + w1 + w2 - w3 + 2 * cross) % 4 + 4) % 4;
  return PauliString(p.n_qubits_, x, z, static_cast<std::uint8_t>(phase));
}

PauliString::Entry PauliString::column_entry(std::uint64_t column) const {
  const int w = std::popcount(x_ & z_);
  const int exponent = (phase_ + w + 2 * std::popcount(z_ & column)) & 3;
  return Entry{column ^ x_, kPhaseValues[exponent]};
}

Eigen::MatrixXcd PauliString::to_dense(int max_qubits) const {
  if (n_qubits_ > max_qubits) {
    throw ResourceLimitError("to_dense: " + std::to_string(n_qubits_) +
                             " qubits exceeds the dense cap of " + std::to_string(max_qubits));
  }
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (std::uint64_t col = 0; col < dim; ++col) {
    const Entry e = column_entry(col);
    m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(col)) = e.value;
  }
  return m;
}

std::string PauliString::label() const {
  static const char* prefixes[4] = {"+", "+i", "-", "-i"};
  std::string out = prefixes[phase_];
  for (int q = 0; q < n_qubits_; ++q) {
    const bool xb = (x_ >> q) & 1;
    const bool zb = (z_ >> q) & 1;
    out += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : '_');
  }
  return out;
}

PauliString PauliString::from_masks(int n_qubits, Mask x, Mask z, int phase_exponent) {
  check_qubit_count(n_qubits);
  const Mask valid = (n_qubits == 64) ? ~Mask{0} : ((Mask{1} << n_qubits) - 1);
  if ((x & ~valid) != 0 || (z & ~valid) != 0) {
    throw std::invalid_argument("from_masks: mask bits beyond qubit count");
  }
  return PauliString(n_qubits, x, z,
                     static_cast<std::uint8_t>((phase_exponent % 4 + 4) % 4));
}

PauliString majorana(int a, int n_majorana) {
  if (n_majorana < 2 || n_majorana % 2 != 0) {
    throw std::invalid_argument("majorana: fermion count must be even and positive");
  }
  if (a < 1 || a > n_majorana) {
    throw std::invalid_argument("majorana: index out of range [1, N]");
  }
  const int n_qubits = n_majorana / 2;
  check_qubit_count(n_qubits);
  const int qubit = (a - 1) / 2;  // 0-based site carrying the X or Y letter
  const PauliString::Mask site = PauliString::Mask{1} << qubit;
  const PauliString::Mask tail = site - 1;  // Z string on qubits before it
  PauliString::Mask x = site;
  PauliString::Mask z = tail;
  if (a % 2 == 0) z |= site;  // even index -> Y letter
  return PauliString::from_masks(n_qubits, x, z, 0);
}

PauliString parity_string(int n_qubits) {
  check_qubit_count(n_qubits);
  const PauliString::Mask all =
      (n_qubits == 64) ? ~PauliString::Mask{0} : ((PauliString::Mask{1} << n_qubits) - 1);
  return PauliString::from_masks(n_qubits, 0, all, 0);
}

PauliString monomial4(int a, int b, int c, int d, int n_majorana) {
  if (!(1 <= a && a < b && b < c && c < d && d <= n_majorana)) {
    throw std::invalid_argument("monomial4: indices must satisfy 1 <= a < b < c < d <= N");
  }
  PauliString m = product(product(majorana(a, n_majorana), majorana(b, n_majorana)),
                          product(majorana(c, n_majorana), majorana(d, n_majorana)));
  // Fold in the i^(q/2) = i^2 prefactor; the result is Hermitian.
  PauliString out = PauliString::from_masks(m.n_qubits(), m.x_mask(), m.z_mask(),
                                            m.phase_exponent() + 2);
  assert(out.is_hermitian());
  return out;
}

}  // namespace syk
