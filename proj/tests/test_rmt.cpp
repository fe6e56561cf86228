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

#include <doctest.h>

#include <cstdio>
#include <stdexcept>
#include <string>

#include "syk/spectrum.hpp"
#include "syk/statistics.hpp"

using namespace syk;

namespace {
const std::string kDataDir = SYK_DATA_DIR;
}

TEST_CASE("universality class follows N mod 8") {
  CHECK(rmt_class(16) == RmtEnsemble::GOE);
  CHECK(rmt_class(24) == RmtEnsemble::GOE);
  CHECK(rmt_class(18) == RmtEnsemble::GUE);
  CHECK(rmt_class(26) == RmtEnsemble::GUE);
  CHECK(rmt_class(30) == RmtEnsemble::GUE);
  CHECK(rmt_class(20) == RmtEnsemble::GSE);
  CHECK(rmt_class(28) == RmtEnsemble::GSE);
  CHECK(rmt_class(22) == RmtEnsemble::GUE);
  CHECK_THROWS_AS(rmt_class(15), std::invalid_argument);
}

TEST_CASE("sampled ensembles are Hermitian with the right structure") {
  Xoshiro256 rng(1);
  const auto goe = sample_goe(64, rng);
  CHECK((goe - goe.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const auto gue = sample_gue(64, rng);
  CHECK((gue - gue.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  const auto gse = sample_gse(64, rng);
  CHECK((gse - gse.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(sample_gse(63, rng), std::invalid_argument);
}

TEST_CASE("GSE spectra are doubly degenerate (Kramers pairs)") {
  Xoshiro256 rng(7);
  const auto eigs = rmt_eigenvalues(RmtEnsemble::GSE, 128, rng);
  const auto clusters = detect_degeneracies(eigs, default_degeneracy_tol(eigs));
  CHECK(clusters.size() == 64);
  for (const auto& c : clusters) CHECK(c.count == 2);
}

TEST_CASE("mean gap ratio orders as Poisson < GOE < GUE < GSE") {
  const auto goe = compute_reference_r(RmtEnsemble::GOE, 300, 40, 11);
  const auto gue = compute_reference_r(RmtEnsemble::GUE, 300, 40, 12);
  const auto gse = compute_reference_r(RmtEnsemble::GSE, 300, 40, 13);
  CHECK(poisson_mean_r() < goe.mean_r);
  CHECK(goe.mean_r < gue.mean_r);
  CHECK(gue.mean_r < gse.mean_r);
  CHECK(goe.std_error < 0.01);
}

TEST_CASE("pinned reference table matches a fresh sample") {
  const auto table = RmtReferenceTable::load(kDataDir + "/rmt_reference.json");
  CHECK(table.value(RmtEnsemble::Poisson).mean_r ==
        doctest::Approx(poisson_mean_r()).epsilon(1e-12));
  // Small independent re-sample: agreement within statistical + finite-size
  // slack. This guards against stale or hand-edited fixtures.
  struct Probe {
    RmtEnsemble ensemble;
    std::uint64_t seed;
  };
  for (const auto probe : {Probe{RmtEnsemble::GOE, 21}, Probe{RmtEnsemble::GUE, 22},
                           Probe{RmtEnsemble::GSE, 23}}) {
    const auto fresh = compute_reference_r(probe.ensemble, 400, 30, probe.seed);
    const auto& pinned = table.value(probe.ensemble);
    CHECK(std::abs(fresh.mean_r - pinned.mean_r) < 0.01);
    CHECK(pinned.n_matrices >= 100);
    CHECK(pinned.dim >= 500);
  }
}

TEST_CASE("value_for_n routes through the class map") {
  const auto table = RmtReferenceTable::load(kDataDir + "/rmt_reference.json");
  CHECK(table.value_for_n(16).mean_r == table.value(RmtEnsemble::GOE).mean_r);
  CHECK(table.value_for_n(20).mean_r == table.value(RmtEnsemble::GSE).mean_r);
  CHECK(table.value_for_n(22).mean_r == table.value(RmtEnsemble::GUE).mean_r);
}
