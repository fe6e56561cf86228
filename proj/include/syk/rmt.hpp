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
#include <cstdint>
#include <map>
#include <string>

#include "syk/rng.hpp"

namespace syk {

enum class RmtEnsemble { GOE, GUE, GSE, Poisson };

const char* rmt_name(RmtEnsemble ensemble);

/// Universality class of the N-Majorana q=4 Hamiltonian:
/// GOE for N = 0 mod 8, GUE for N = 2, 6 mod 8, GSE for N = 4 mod 8.
RmtEnsemble rmt_class(int n_majorana);

/// Dense Gaussian-ensemble samples, normalized to spectral support ~ [-1, 1].
Eigen::MatrixXd sample_goe(int dim, Xoshiro256& rng);
Eigen::MatrixXcd sample_gue(int dim, Xoshiro256& rng);
/// dim must be even; eigenvalues come in Kramers-degenerate pairs.
Eigen::MatrixXcd sample_gse(int dim, Xoshiro256& rng);

/// Sorted eigenvalues of one sampled matrix (Poisson: iid uniform levels).
/// GSE spectra keep both members of each Kramers pair.
std::vector<double> rmt_eigenvalues(RmtEnsemble ensemble, int dim, Xoshiro256& rng);

/// A reference <r> pinned by direct sampling, with its provenance.
struct RmtReferenceValue {
  double mean_r = 0.0;
  double std_error = 0.0;
  int dim = 0;
  int n_matrices = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo reference <r> for one ensemble. Degenerate copies (the GSE
/// Kramers doubling) are removed before spacings, mirroring the treatment of
/// the model spectra. Poisson uses the analytic value with zero error.
RmtReferenceValue compute_reference_r(RmtEnsemble ensemble, int dim, int n_matrices,
                                      std::uint64_t seed);

/// The pinned reference table (a generated fixtures file, JSON).
class RmtReferenceTable {
public:
  static RmtReferenceTable compute(int dim, int n_matrices, std::uint64_t seed);
  static RmtReferenceTable load(const std::string& path);
  void save(const std::string& path) const;

  const RmtReferenceValue& value(RmtEnsemble ensemble) const;
  /// Reference <r> for the universality class of a given N.
  const RmtReferenceValue& value_for_n(int n_majorana) const {
    return value(rmt_class(n_majorana));
  }

private:
  std::map<RmtEnsemble, RmtReferenceValue> values_;
};

}  // namespace syk
