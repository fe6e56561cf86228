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

#include "syk/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "syk/errors.hpp"
#include "syk/spectrum.hpp"
#include "syk/statistics.hpp"

namespace syk {

namespace {

using json = nlohmann::json;

Eigen::MatrixXd gaussian_real(int rows, int cols, Xoshiro256& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

Eigen::MatrixXcd gaussian_complex(int rows, int cols, Xoshiro256& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = std::complex<double>(rng.normal(), rng.normal());
  return m;
}

}  // namespace

const char* rmt_name(RmtEnsemble ensemble) {
  switch (ensemble) {
    case RmtEnsemble::GOE: return "GOE";
    case RmtEnsemble::GUE: return "GUE";
    case RmtEnsemble::GSE: return "GSE";
    case RmtEnsemble::Poisson: return "Poisson";
  }
  return "unknown";
}

RmtEnsemble rmt_class(int n_majorana) {
  if (n_majorana % 2 != 0) throw std::invalid_argument("rmt_class: N must be even");
  switch (n_majorana % 8) {
    case 0: return RmtEnsemble::GOE;
    case 4: return RmtEnsemble::GSE;
    default: return RmtEnsemble::GUE;  // 2, 6
  }
}

Eigen::MatrixXd sample_goe(int dim, Xoshiro256& rng) {
  if (dim < 2) throw std::invalid_argument("sample_goe: dimension too small");
  const Eigen::MatrixXd a = gaussian_real(dim, dim, rng);
  return (a + a.transpose()) / (2.0 * std::sqrt(static_cast<double>(dim)));
}

Eigen::MatrixXcd sample_gue(int dim, Xoshiro256& rng) {
  if (dim < 2) throw std::invalid_argument("sample_gue: dimension too small");
  const Eigen::MatrixXcd a = gaussian_complex(dim, dim, rng);
  return (a + a.adjoint()) / (2.0 * std::sqrt(static_cast<double>(dim)));
}

Eigen::MatrixXcd sample_gse(int dim, Xoshiro256& rng) {
  if (dim < 4 || dim % 2 != 0) {
    throw std::invalid_argument("sample_gse: dimension must be even and >= 4");
  }
  const int half = dim / 2;
  // Quaternionic Hermitian matrix in the 2x2 complex representation:
  //   [ A   B  ]  with A Hermitian and B antisymmetric.
  //   [-B*  A* ]
  const Eigen::MatrixXcd a0 = gaussian_complex(half, half, rng);
  const Eigen::MatrixXcd a = (a0 + a0.adjoint()) / 2.0;
  const Eigen::MatrixXcd b0 = gaussian_complex(half, half, rng);
  const Eigen::MatrixXcd b = (b0 - b0.transpose()) / 2.0;
  Eigen::MatrixXcd h(dim, dim);
  h.topLeftCorner(half, half) = a;
  h.topRightCorner(half, half) = b;
  h.bottomLeftCorner(half, half) = -b.conjugate();
  h.bottomRightCorner(half, half) = a.conjugate();
  return h / (2.0 * std::sqrt(static_cast<double>(half)));
}

std::vector<double> rmt_eigenvalues(RmtEnsemble ensemble, int dim, Xoshiro256& rng) {
  switch (ensemble) {
    case RmtEnsemble::GOE:
      return eigenvalues(sample_goe(dim, rng));
    case RmtEnsemble::GUE:
      return eigenvalues(sample_gue(dim, rng));
    case RmtEnsemble::GSE:
      return eigenvalues(sample_gse(dim, rng));
    case RmtEnsemble::Poisson: {
      std::vector<double> levels(dim);
      for (auto& level : levels) level = rng.uniform();
      std::sort(levels.begin(), levels.end());
      return levels;
    }
  }
  throw std::invalid_argument("rmt_eigenvalues: unknown ensemble");
}

RmtReferenceValue compute_reference_r(RmtEnsemble ensemble, int dim, int n_matrices,
                                      std::uint64_t seed) {
  if (ensemble == RmtEnsemble::Poisson) {
    // Analytic value; sampling it would only add noise.
    return RmtReferenceValue{poisson_mean_r(), 0.0, 0, 0, seed};
  }
  if (n_matrices < 2) throw std::invalid_argument("compute_reference_r: need >= 2 matrices");
  std::vector<double> per_matrix(n_matrices);
  for (int m = 0; m < n_matrices; ++m) {
    Xoshiro256 rng(derive_stream_seed(seed, static_cast<std::uint64_t>(m)));
    const auto eigs = rmt_eigenvalues(ensemble, dim, rng);
    // Collapse numerically coincident levels (the GSE Kramers pairs) exactly
    // as the model pipeline does before taking gap ratios.
    const auto clusters = detect_degeneracies(eigs, default_degeneracy_tol(eigs));
    per_matrix[m] = gap_ratios(distinct_values(clusters)).mean;
  }
  const auto ms = mean_stderr(per_matrix);
  return RmtReferenceValue{ms.mean, ms.std_error, dim, n_matrices, seed};
}

RmtReferenceTable RmtReferenceTable::compute(int dim, int n_matrices, std::uint64_t seed) {
  RmtReferenceTable table;
  std::uint64_t stream = 0;
  for (const auto ensemble : {RmtEnsemble::GOE, RmtEnsemble::GUE, RmtEnsemble::GSE}) {
    table.values_[ensemble] =
        compute_reference_r(ensemble, dim, n_matrices, derive_stream_seed(seed, stream++));
  }
  table.values_[RmtEnsemble::Poisson] = compute_reference_r(RmtEnsemble::Poisson, 0, 0, seed);
  return table;
}

RmtReferenceTable RmtReferenceTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open RMT reference table: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw DataError("RMT reference table is not valid JSON: " + std::string(e.what()));
  }
  RmtReferenceTable table;
  for (const auto ensemble :
       {RmtEnsemble::GOE, RmtEnsemble::GUE, RmtEnsemble::GSE, RmtEnsemble::Poisson}) {
    const auto& entry = doc.at("ensembles").at(rmt_name(ensemble));
    RmtReferenceValue value;
    value.mean_r = entry.at("mean_r").get<double>();
    value.std_error = entry.at("std_error").get<double>();
    value.dim = entry.value("dim", 0);
    value.n_matrices = entry.value("n_matrices", 0);
    value.seed = entry.value("seed", std::uint64_t{0});
    table.values_[ensemble] = value;
  }
  return table;
}

void RmtReferenceTable::save(const std::string& path) const {
  json ensembles;
  for (const auto& [ensemble, value] : values_) {
    ensembles[rmt_name(ensemble)] = json{{"mean_r", value.mean_r},
                                         {"std_error", value.std_error},
                                         {"dim", value.dim},
                                         {"n_matrices", value.n_matrices},
                                         {"seed", value.seed}};
  }
  json doc{{"schema_version", 1},
           {"note", "generated by rmt_reference_gen; <r> from direct sampling"},
           {"ensembles", ensembles}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write RMT reference table: " + path);
  out << doc.dump(2) << "\n";
}

const RmtReferenceValue& RmtReferenceTable::value(RmtEnsemble ensemble) const {
  const auto it = values_.find(ensemble);
  if (it == values_.end()) {
    throw DataError(std::string("RMT reference table has no entry for ") + rmt_name(ensemble));
  }
  return it->second;
}

}  // namespace syk
