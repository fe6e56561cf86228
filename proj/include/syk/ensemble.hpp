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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "syk/model.hpp"
#include "syk/spectrum.hpp"
#include "syk/statistics.hpp"

namespace syk {

/// How ensemble SFF curves are averaged: the mean of the per-realization
/// ratios |Z|^2/Z(0)^2 (the plotted quantity is defined per spectrum), or
/// the ratio of separately averaged numerator and denominator.
enum class SffAveraging { MeanOfRatios, RatioOfMeans };

struct TimeGridSpec {
  double t_min = 1e-1;
  double t_max = 1e6;
  int points = 400;
};

/// Declarative description of one ensemble job.
struct RunConfig {
  int n_majorana = 0;
  CouplingScheme scheme = CouplingScheme::BinarySparse;
  std::optional<std::uint64_t> k_couplings;   // exactly one of K / p
  std::optional<double> p_fraction;
  std::optional<std::uint64_t> n_realizations;  // exactly one of these two
  std::optional<std::uint64_t> eigenvalue_budget;
  std::uint64_t base_seed = 0;

  std::vector<double> betas{0.0};
  std::vector<double> alphas{};  // filtered curves h for each (alpha, beta)
  TimeGridSpec t_grid;
  std::vector<double> sigma2_windows{};  // empty = skip number variance

  // Persistence: when output_dir is set and persist_spectra is true, raw
  // spectra land under <output_dir>/spectra and re-running the same config
  // reuses them instead of re-diagonalizing.
  std::string output_dir;
  bool persist_spectra = false;
  SpectrumFileFormat spectrum_format = SpectrumFileFormat::Binary;

  // Toggles.
  bool least_degenerate_only_for_r = true;  // Fig. 2 protocol
  SffAveraging sff_averaging = SffAveraging::MeanOfRatios;
  GaussianNorm gaussian_norm = GaussianNorm::PerRealization;
  HDenominator h_denominator = HDenominator::SameAlpha;
  std::optional<double> degeneracy_tol;  // default: 1e-10 relative
  int unfold_order = 10;
  double unfold_trim = 0.05;
  bool keep_realization_curves = false;  // retain raw curves (bootstrap input)

  int workers = 0;  // 0 = available parallelism
  std::uint64_t dim_cap = kDefaultMatrixDimCap;

  void validate() const;
  std::uint64_t resolved_k() const;
  std::uint64_t resolved_realizations() const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& doc);
  /// FNV-1a over the canonical JSON, with execution-irrelevant fields
  /// (output paths, worker count) excluded.
  std::uint64_t config_hash() const;
  /// Hash of only the fields that determine the sampled spectra; stamped
  /// into persisted spectrum files and checked on reuse.
  std::uint64_t sampling_hash() const;
};

/// Ensemble-averaged curve with per-point standard errors.
struct EnsembleCurve {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> std_errors;
  double beta = 0.0;
  std::optional<double> alpha;
  std::uint64_t n_realizations = 0;
  SffAveraging mode = SffAveraging::MeanOfRatios;
};

/// Raw per-realization curves (kept only on request).
struct RealizationCurves {
  double beta = 0.0;
  std::optional<double> alpha;
  std::vector<std::vector<double>> values;  // [realization][time]
};

struct EnsembleResult {
  nlohmann::json config_json() const;  // resolved config
  std::uint64_t config_hash = 0;
  std::uint64_t sampling_hash = 0;

  int n_majorana = 0;
  std::uint64_t k = 0;
  CouplingScheme scheme = CouplingScheme::BinarySparse;
  std::uint64_t base_seed = 0;

  std::uint64_t n_completed = 0;
  std::uint64_t n_failed = 0;
  std::vector<std::uint64_t> failed_indices;
  std::vector<std::uint64_t> seeds;  // per realization, index order

  double least_degenerate_fraction = 0.0;
  double least_degenerate_stderr = 0.0;

  MeanStderr mean_r;        // pooled over sectors, averaged over realizations
  MeanStderr mean_r_even;   // per-sector variants
  MeanStderr mean_r_odd;
  std::uint64_t n_gap_ratio_realizations = 0;

  std::vector<EnsembleCurve> g_curves;  // one per beta
  std::vector<EnsembleCurve> h_curves;  // one per (alpha, beta), alpha-major
  std::optional<Sigma2Curve> sigma2;

  std::vector<RealizationCurves> raw_g;  // populated when keep_realization_curves
  std::vector<RealizationCurves> raw_h;

  /// Deterministic summary (used for the byte-identical rerun contract).
  nlohmann::json summary_json() const;

private:
  friend EnsembleResult run(const RunConfig&);
  std::string resolved_config_text_;  // canonical JSON of the resolved config
};

/// Execute an ensemble: sample -> assemble -> diagonalize -> aggregate.
/// Realizations run on a bounded worker pool; aggregation is a sequential
/// reduction in realization-index order, so results do not depend on the
/// worker count. Failed realizations are skipped and counted.
EnsembleResult run(const RunConfig& config);

struct SweepEntry {
  std::optional<EnsembleResult> result;  // empty on failure
  std::string error;                     // non-empty on failure
};

/// Run a grid of configs, isolating per-config failures.
std::vector<SweepEntry> sweep(const std::vector<RunConfig>& grid);

// CSV emitters (columns per the external-interface contract).
void write_curve_csv(const EnsembleCurve& curve, const std::string& path);
void write_sigma2_csv(const Sigma2Curve& curve, const std::string& path);
void write_histogram_csv(const Histogram& histogram, const std::string& path);

}  // namespace syk
