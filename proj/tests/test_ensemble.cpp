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

#include "syk/ensemble.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "syk/errors.hpp"

using namespace syk;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
  RunConfig config;
  config.n_majorana = 12;
  config.scheme = CouplingScheme::BinarySparse;
  config.k_couplings = 24;
  config.n_realizations = 8;
  config.base_seed = 5;
  config.t_grid = TimeGridSpec{1e-1, 1e4, 40};
  return config;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("eigenvalue budget resolves the realization count") {
  RunConfig config;
  config.n_majorana = 16;
  config.scheme = CouplingScheme::BinarySparse;
  config.k_couplings = 32;
  config.eigenvalue_budget = std::uint64_t{1} << 20;
  CHECK(config.resolved_realizations() == 4096);
  config.eigenvalue_budget = 100;  // less than one spectrum
  CHECK(config.resolved_realizations() == 1);
}

TEST_CASE("config validation") {
  RunConfig config = small_config();
  CHECK_NOTHROW(config.validate());
  config.p_fraction = 0.1;  // both K and p
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.k_couplings.reset();
  CHECK_NOTHROW(config.validate());
  CHECK(config.resolved_k() == 50);  // 0.1 * binom(12,4) = 49.5 rounded
  config.p_fraction.reset();
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = small_config();
  config.betas = {-1.0};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = small_config();
  config.n_realizations.reset();
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("config JSON round trip preserves the hash") {
  RunConfig config = small_config();
  config.alphas = {1.0};
  config.sigma2_windows = {1.0, 5.0};
  config.sff_averaging = SffAveraging::RatioOfMeans;
  const auto round_tripped = RunConfig::from_json(config.to_json());
  CHECK(round_tripped.config_hash() == config.config_hash());
  CHECK(round_tripped.sampling_hash() == config.sampling_hash());
}

TEST_CASE("runs are deterministic across repeats and worker counts") {
  RunConfig config = small_config();
  config.alphas = {1.0};
  config.workers = 1;
  const auto first = run(config);
  const auto second = run(config);
  CHECK(first.summary_json().dump() == second.summary_json().dump());
  config.workers = 3;
  const auto parallel = run(config);
  CHECK(first.summary_json().dump() == parallel.summary_json().dump());
}

TEST_CASE("aggregates look physical at K = 4N (N = 14)") {
  RunConfig config;
  config.n_majorana = 14;
  config.scheme = CouplingScheme::BinarySparse;
  config.k_couplings = 56;
  config.n_realizations = 50;
  config.base_seed = 17;
  config.alphas = {0.0};
  const auto result = run(config);
  CHECK(result.n_completed == 50);
  CHECK(result.n_failed == 0);
  // N = 14 is 6 mod 8 -> GUE; <r> ~ 0.60 at K = 4N.
  CHECK(result.mean_r.mean > 0.55);
  CHECK(result.mean_r.mean < 0.65);
  CHECK(result.least_degenerate_fraction > 0.8);
  // g(t -> 0) ~ 1; h(alpha = 0) is identical to g.
  REQUIRE(result.g_curves.size() == 1);
  CHECK(result.g_curves[0].values.front() > 0.9);
  REQUIRE(result.h_curves.size() == 1);
  for (std::size_t i = 0; i < result.g_curves[0].values.size(); ++i) {
    CHECK(result.h_curves[0].values[i] == result.g_curves[0].values[i]);
  }
  // Sector means agree between even and odd (identical sector spectra).
  CHECK(result.mean_r_even.mean == doctest::Approx(result.mean_r_odd.mean).epsilon(1e-12));
}

TEST_CASE("averaging modes coincide at beta = 0") {
  RunConfig config = small_config();
  const auto mean_mode = run(config);
  config.sff_averaging = SffAveraging::RatioOfMeans;
  const auto ratio_mode = run(config);
  for (std::size_t i = 0; i < mean_mode.g_curves[0].values.size(); ++i) {
    CHECK(mean_mode.g_curves[0].values[i] ==
          doctest::Approx(ratio_mode.g_curves[0].values[i]).epsilon(1e-12));
  }
}

TEST_CASE("raw curves are kept on request") {
  RunConfig config = small_config();
  config.keep_realization_curves = true;
  config.alphas = {1.0};
  const auto result = run(config);
  REQUIRE(result.raw_g.size() == 1);
  CHECK(result.raw_g[0].values.size() == 8);
  CHECK(result.raw_g[0].values[0].size() == 40);
  REQUIRE(result.raw_h.size() == 1);
  CHECK(result.raw_h[0].alpha == 1.0);
}

TEST_CASE("number variance aggregation") {
  RunConfig config = small_config();
  config.n_majorana = 14;
  config.k_couplings = 56;
  config.n_realizations = 10;
  config.sigma2_windows = {1.0, 2.0};
  const auto result = run(config);
  REQUIRE(result.sigma2.has_value());
  CHECK(result.sigma2->values.size() == 2);
  CHECK(result.sigma2->values[0] > 0.0);
  CHECK(result.sigma2->mode == Sigma2Averaging::EnsembleMean);
}

TEST_CASE("persistence: spectra are reused and tampering is caught") {
  TempDir tmp("syk_ens_persist");
  RunConfig config = small_config();
  config.output_dir = tmp.path.string();
  config.persist_spectra = true;
  const auto first = run(config);
  CHECK(first.n_completed == 8);
  std::size_t n_files = 0;
  for (const auto& entry : fs::directory_iterator(tmp.path / "spectra")) {
    ++n_files;
    CHECK(entry.path().extension() == ".spec");
  }
  CHECK(n_files == 8);

  // Re-running reuses the persisted spectra and reproduces the aggregates.
  const auto second = run(config);
  CHECK(first.summary_json().dump() == second.summary_json().dump());

  // Rewrite one spectrum with a mismatched seed: the rerun must fail loudly
  // for that realization.
  fs::path one;
  for (const auto& entry : fs::directory_iterator(tmp.path / "spectra")) {
    one = entry.path();
    break;
  }
  auto record = load_spectrum(one.string());
  record.seed += 1;
  save_spectrum(record, one.string(), SpectrumFileFormat::Binary);
  const auto third = run(config);
  CHECK(third.n_failed == 1);
  CHECK(third.n_completed == 7);
}

TEST_CASE("failed realizations are counted, not fatal") {
  RunConfig config = small_config();
  config.dim_cap = 8;  // every sector matrix (dim 32) exceeds the cap
  const auto result = run(config);
  CHECK(result.n_completed == 0);
  CHECK(result.n_failed == 8);
  CHECK(result.failed_indices.size() == 8);
}

TEST_CASE("sweep isolates failures and rejects duplicates") {
  CHECK(sweep({}).empty());

  RunConfig good = small_config();
  RunConfig bad = small_config();
  bad.dim_cap = 0;  // validate passes, every realization fails -> result, not error
  bad.base_seed = 6;
  RunConfig broken = small_config();
  broken.k_couplings = 9999;  // K > binom(12,4): run() throws inside sweep
  broken.base_seed = 7;
  const auto entries = sweep({good, bad, broken});
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].result.has_value());
  CHECK(entries[0].error.empty());
  CHECK(entries[1].result.has_value());
  CHECK(entries[1].result->n_failed == 8);
  CHECK_FALSE(entries[2].result.has_value());
  CHECK_FALSE(entries[2].error.empty());

  CHECK_THROWS_AS(sweep({good, good}), std::invalid_argument);
}

TEST_CASE("csv writers emit the documented columns") {
  TempDir tmp("syk_ens_csv");
  RunConfig config = small_config();
  config.sigma2_windows = {1.0};
  const auto result = run(config);
  const auto curve_path = (tmp.path / "g.csv").string();
  write_curve_csv(result.g_curves[0], curve_path);
  std::ifstream in(curve_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,value,stderr,n_realizations");
  const auto sigma_path = (tmp.path / "s.csv").string();
  write_sigma2_csv(*result.sigma2, sigma_path);
  std::ifstream sin(sigma_path);
  std::getline(sin, header);
  CHECK(header == "window,sigma2,stderr,n_realizations");
}
