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

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "syk/errors.hpp"
#include "syk/rng.hpp"
#include "syk/version.hpp"

namespace syk {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

const char* sff_averaging_name(SffAveraging mode) {
  return mode == SffAveraging::MeanOfRatios ? "mean-of-ratios" : "ratio-of-means";
}

const char* gaussian_norm_name(GaussianNorm norm) {
  return norm == GaussianNorm::PerRealization ? "per-realization" : "fixed-k";
}

const char* h_denominator_name(HDenominator d) {
  return d == HDenominator::SameAlpha ? "same-alpha" : "alpha-zero";
}

SffAveraging sff_averaging_from(const std::string& name) {
  if (name == "mean-of-ratios") return SffAveraging::MeanOfRatios;
  if (name == "ratio-of-means") return SffAveraging::RatioOfMeans;
  throw DataError("unknown sff_averaging: " + name);
}

GaussianNorm gaussian_norm_from(const std::string& name) {
  if (name == "per-realization") return GaussianNorm::PerRealization;
  if (name == "fixed-k") return GaussianNorm::FixedK;
  throw DataError("unknown gaussian_norm: " + name);
}

HDenominator h_denominator_from(const std::string& name) {
  if (name == "same-alpha") return HDenominator::SameAlpha;
  if (name == "alpha-zero") return HDenominator::AlphaZero;
  throw DataError("unknown h_denominator: " + name);
}

}  // namespace

void RunConfig::validate() const {
  if (n_majorana < 8 || n_majorana % 2 != 0) {
    throw std::invalid_argument("RunConfig: N must be even and >= 8");
  }
  if (k_couplings.has_value() == p_fraction.has_value()) {
    throw std::invalid_argument("RunConfig: exactly one of K and p must be given");
  }
  if (n_realizations.has_value() == eigenvalue_budget.has_value()) {
    throw std::invalid_argument(
        "RunConfig: exactly one of n_realizations and eigenvalue_budget must be given");
  }
  if (resolved_realizations() < 1) {
    throw std::invalid_argument("RunConfig: at least one realization required");
  }
  if (t_grid.points < 2 || !(t_grid.t_min > 0.0) || !(t_grid.t_max > t_grid.t_min)) {
    throw std::invalid_argument("RunConfig: invalid time grid");
  }
  for (const double beta : betas) {
    if (beta < 0.0) throw std::invalid_argument("RunConfig: beta must be >= 0");
  }
  for (const double alpha : alphas) {
    if (alpha < 0.0) throw std::invalid_argument("RunConfig: alpha must be >= 0");
  }
  if (persist_spectra && output_dir.empty()) {
    throw std::invalid_argument("RunConfig: persist_spectra requires output_dir");
  }
  const std::uint64_t k = resolved_k();
  if (k < 1 || k > n_total(n_majorana)) {
    throw std::invalid_argument("RunConfig: K out of range for this N");
  }
}

std::uint64_t RunConfig::resolved_k() const {
  if (k_couplings) return *k_couplings;
  if (!p_fraction) throw std::invalid_argument("RunConfig: neither K nor p given");
  const double total = static_cast<double>(n_total(n_majorana));
  const auto k = static_cast<std::uint64_t>(std::llround(*p_fraction * total));
  return k;
}

std::uint64_t RunConfig::resolved_realizations() const {
  if (n_realizations) return *n_realizations;
  if (!eigenvalue_budget) throw std::invalid_argument("RunConfig: no realization count");
  const std::uint64_t dim = std::uint64_t{1} << (n_majorana / 2);
  return std::max<std::uint64_t>(1, *eigenvalue_budget / dim);
}

json RunConfig::to_json() const {
  json doc;
  doc["schema_version"] = 1;
  doc["N"] = n_majorana;
  doc["scheme"] = scheme_name(scheme);
  if (k_couplings) doc["K"] = *k_couplings;
  if (p_fraction) doc["p"] = *p_fraction;
  if (n_realizations) doc["n_realizations"] = *n_realizations;
  if (eigenvalue_budget) doc["eigenvalue_budget"] = *eigenvalue_budget;
  doc["base_seed"] = base_seed;
  doc["betas"] = betas;
  doc["alphas"] = alphas;
  doc["t_grid"] = json{{"t_min", t_grid.t_min}, {"t_max", t_grid.t_max}, {"points", t_grid.points}};
  doc["sigma2_windows"] = sigma2_windows;
  doc["output_dir"] = output_dir;
  doc["persist_spectra"] = persist_spectra;
  doc["spectrum_format"] = (spectrum_format == SpectrumFileFormat::Binary) ? "binary" : "csv";
  doc["least_degenerate_only_for_r"] = least_degenerate_only_for_r;
  doc["sff_averaging"] = sff_averaging_name(sff_averaging);
  doc["gaussian_norm"] = gaussian_norm_name(gaussian_norm);
  doc["h_denominator"] = h_denominator_name(h_denominator);
  if (degeneracy_tol) doc["degeneracy_tol"] = *degeneracy_tol;
  doc["unfold"] = json{{"order", unfold_order}, {"trim", unfold_trim}};
  doc["keep_realization_curves"] = keep_realization_curves;
  doc["workers"] = workers;
  doc["dim_cap"] = dim_cap;
  return doc;
}

RunConfig RunConfig::from_json(const json& doc) {
  const int version = doc.value("schema_version", 1);
  if (version != 1) throw DataError("RunConfig: unsupported schema_version");
  RunConfig config;
  config.n_majorana = doc.at("N").get<int>();
  const auto scheme = scheme_from_name(doc.at("scheme").get<std::string>());
  if (!scheme) throw DataError("RunConfig: unknown scheme");
  config.scheme = *scheme;
  if (doc.contains("K")) config.k_couplings = doc["K"].get<std::uint64_t>();
  if (doc.contains("p")) config.p_fraction = doc["p"].get<double>();
  if (doc.contains("n_realizations"))
    config.n_realizations = doc["n_realizations"].get<std::uint64_t>();
  if (doc.contains("eigenvalue_budget"))
    config.eigenvalue_budget = doc["eigenvalue_budget"].get<std::uint64_t>();
  config.base_seed = doc.value("base_seed", std::uint64_t{0});
  if (doc.contains("betas")) config.betas = doc["betas"].get<std::vector<double>>();
  if (doc.contains("alphas")) config.alphas = doc["alphas"].get<std::vector<double>>();
  if (doc.contains("t_grid")) {
    const auto& grid = doc["t_grid"];
    config.t_grid.t_min = grid.value("t_min", 1e-1);
    config.t_grid.t_max = grid.value("t_max", 1e6);
    config.t_grid.points = grid.value("points", 400);
  }
  if (doc.contains("sigma2_windows"))
    config.sigma2_windows = doc["sigma2_windows"].get<std::vector<double>>();
  config.output_dir = doc.value("output_dir", std::string{});
  config.persist_spectra = doc.value("persist_spectra", false);
  if (doc.value("spectrum_format", "binary") == std::string("csv")) {
    config.spectrum_format = SpectrumFileFormat::Csv;
  }
  config.least_degenerate_only_for_r = doc.value("least_degenerate_only_for_r", true);
  config.sff_averaging = sff_averaging_from(doc.value("sff_averaging", "mean-of-ratios"));
  config.gaussian_norm = gaussian_norm_from(doc.value("gaussian_norm", "per-realization"));
  config.h_denominator = h_denominator_from(doc.value("h_denominator", "same-alpha"));
  if (doc.contains("degeneracy_tol") && !doc["degeneracy_tol"].is_null()) {
    config.degeneracy_tol = doc["degeneracy_tol"].get<double>();
  }
  if (doc.contains("unfold")) {
    config.unfold_order = doc["unfold"].value("order", 10);
    config.unfold_trim = doc["unfold"].value("trim", 0.05);
  }
  config.keep_realization_curves = doc.value("keep_realization_curves", false);
  config.workers = doc.value("workers", 0);
  config.dim_cap = doc.value("dim_cap", kDefaultMatrixDimCap);
  return config;
}

std::uint64_t RunConfig::config_hash() const {
  json doc = to_json();
  doc.erase("output_dir");
  doc.erase("workers");
  return fnv1a64(doc.dump());
}

std::uint64_t RunConfig::sampling_hash() const {
  json doc;
  doc["schema_version"] = 1;
  doc["N"] = n_majorana;
  doc["scheme"] = scheme_name(scheme);
  doc["K"] = resolved_k();
  doc["base_seed"] = base_seed;
  doc["gaussian_norm"] = gaussian_norm_name(gaussian_norm);
  return fnv1a64(doc.dump());
}

json EnsembleResult::config_json() const { return json::parse(resolved_config_text_); }

json EnsembleResult::summary_json() const {
  json doc;
  doc["schema_version"] = 1;
  doc["code_version"] = kVersion;
  doc["config"] = json::parse(resolved_config_text_);
  doc["config_hash"] = config_hash;
  doc["n_completed"] = n_completed;
  doc["n_failed"] = n_failed;
  doc["failed_indices"] = failed_indices;
  doc["seeds"] = seeds;
  doc["least_degenerate_fraction"] = least_degenerate_fraction;
  doc["least_degenerate_stderr"] = least_degenerate_stderr;
  doc["mean_r"] = json{{"mean", mean_r.mean},
                       {"std_error", mean_r.std_error},
                       {"n_realizations", n_gap_ratio_realizations}};
  doc["mean_r_even"] = json{{"mean", mean_r_even.mean}, {"std_error", mean_r_even.std_error}};
  doc["mean_r_odd"] = json{{"mean", mean_r_odd.mean}, {"std_error", mean_r_odd.std_error}};
  auto curve_json = [](const EnsembleCurve& curve) {
    json entry;
    entry["beta"] = curve.beta;
    if (curve.alpha) entry["alpha"] = *curve.alpha;
    entry["n_realizations"] = curve.n_realizations;
    entry["mode"] = sff_averaging_name(curve.mode);
    entry["times"] = curve.times;
    entry["values"] = curve.values;
    entry["std_errors"] = curve.std_errors;
    return entry;
  };
  doc["g_curves"] = json::array();
  for (const auto& curve : g_curves) doc["g_curves"].push_back(curve_json(curve));
  doc["h_curves"] = json::array();
  for (const auto& curve : h_curves) doc["h_curves"].push_back(curve_json(curve));
  if (sigma2) {
    doc["sigma2"] = json{{"window_lengths", sigma2->window_lengths},
                         {"values", sigma2->values},
                         {"std_errors", sigma2->std_errors},
                         {"n_realizations", sigma2->n_realizations}};
  }
  return doc;
}

namespace {

struct RealizationOutcome {
  bool ok = false;
  std::string error;
  SpectrumRecord record;
};

/// Welford accumulator over curve samples, one slot per grid point.
struct CurveAccumulator {
  std::vector<double> mean;
  std::vector<double> m2;
  std::uint64_t count = 0;

  explicit CurveAccumulator(std::size_t size) : mean(size, 0.0), m2(size, 0.0) {}

  void add(std::span<const double> sample) {
    ++count;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const double delta = sample[i] - mean[i];
      mean[i] += delta / static_cast<double>(count);
      m2[i] += delta * (sample[i] - mean[i]);
    }
  }

  std::vector<double> std_errors() const {
    std::vector<double> out(mean.size(), 0.0);
    if (count < 2) return out;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      out[i] = std::sqrt(m2[i] / static_cast<double>(count - 1) / static_cast<double>(count));
    }
    return out;
  }
};

/// Accumulates numerator/denominator moments for the ratio-of-means mode;
/// the standard error comes from the delta method.
struct RatioAccumulator {
  std::vector<double> sum_num;
  std::vector<double> sum_num_sq;
  std::vector<double> sum_num_den;
  double sum_den = 0.0;
  double sum_den_sq = 0.0;
  std::uint64_t count = 0;

  explicit RatioAccumulator(std::size_t size)
      : sum_num(size, 0.0), sum_num_sq(size, 0.0), sum_num_den(size, 0.0) {}

  void add(std::span<const double> numerators, double denominator) {
    ++count;
    sum_den += denominator;
    sum_den_sq += denominator * denominator;
    for (std::size_t i = 0; i < numerators.size(); ++i) {
      sum_num[i] += numerators[i];
      sum_num_sq[i] += numerators[i] * numerators[i];
      sum_num_den[i] += numerators[i] * denominator;
    }
  }

  void finalize(EnsembleCurve& curve) const {
    const auto m = static_cast<double>(count);
    curve.values.resize(sum_num.size());
    curve.std_errors.assign(sum_num.size(), 0.0);
    const double den_mean = sum_den / m;
    const double den_sq = den_mean * den_mean;
    for (std::size_t i = 0; i < sum_num.size(); ++i) {
      const double num_mean = sum_num[i] / m;
      curve.values[i] = num_mean / den_sq;
      if (count < 2) continue;
      const double var_num = (sum_num_sq[i] - m * num_mean * num_mean) / (m * (m - 1.0));
      const double var_den = (sum_den_sq - m * den_mean * den_mean) / (m * (m - 1.0));
      const double cov = (sum_num_den[i] - m * num_mean * den_mean) / (m * (m - 1.0));
      const double var_ratio = var_num / (den_sq * den_sq) +
                               4.0 * num_mean * num_mean * var_den / std::pow(den_mean, 6) -
                               4.0 * num_mean * cov / std::pow(den_mean, 5);
      curve.std_errors[i] = var_ratio > 0.0 ? std::sqrt(var_ratio) : 0.0;
    }
  }
};

/// |Y(alpha,t,beta)|^2 per grid point plus Y at t=0 (the denominator root).
void form_factor_raw(std::span<const double> eigs, double alpha, double beta,
                     std::span<const double> times, std::vector<double>& numerators,
                     double& denom_root, HDenominator denominator) {
  std::vector<double> weights(eigs.size());
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < eigs.size(); ++j) {
    weights[j] = std::exp(-alpha * eigs[j] * eigs[j] - beta * eigs[j]);
    weight_sum += weights[j];
  }
  denom_root = weight_sum;
  if (denominator == HDenominator::AlphaZero) {
    denom_root = 0.0;
    for (const double e : eigs) denom_root += std::exp(-beta * e);
  }
  numerators.resize(times.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < eigs.size(); ++j) {
      const double angle = times[ti] * eigs[j];
      re += weights[j] * std::cos(angle);
      im -= weights[j] * std::sin(angle);
    }
    numerators[ti] = re * re + im * im;
  }
}

SpectrumRecord compute_realization(const RunConfig& config, std::uint64_t k,
                                   std::uint64_t seed, std::optional<std::string> persist_path) {
  if (persist_path && fs::exists(*persist_path)) {
    SpectrumRecord record = load_spectrum(*persist_path);
    if (record.n_majorana != config.n_majorana || record.k != k ||
        record.scheme != config.scheme || record.seed != seed) {
      throw DataError("persisted spectrum metadata mismatch (config hash changed?): " +
                      *persist_path);
    }
    return record;
  }
  const CouplingSet cs = sample(config.scheme, config.n_majorana, k, seed, config.gaussian_norm);
  SpectrumRecord record = diagonalize(cs, config.dim_cap, config.degeneracy_tol);
  if (persist_path) {
    const std::string tmp = *persist_path + ".tmp";
    save_spectrum(record, tmp, config.spectrum_format);
    fs::rename(tmp, *persist_path);
  }
  return record;
}

}  // namespace

EnsembleResult run(const RunConfig& config) {
  config.validate();
  const std::uint64_t k = config.resolved_k();
  const std::uint64_t n_real = config.resolved_realizations();

  std::optional<std::string> spectra_dir;
  if (config.persist_spectra) {
    const fs::path dir = fs::path(config.output_dir) / "spectra";
    fs::create_directories(dir);
    spectra_dir = dir.string();
  }

  // --- compute all realizations on the worker pool --------------------------
  std::vector<RealizationOutcome> outcomes(n_real);
  std::vector<std::uint64_t> seeds(n_real);
  for (std::uint64_t i = 0; i < n_real; ++i) seeds[i] = derive_stream_seed(config.base_seed, i);

  const std::string extension =
      (config.spectrum_format == SpectrumFileFormat::Binary) ? ".spec" : ".csv";
  auto worker_task = [&](std::uint64_t index) {
    auto& outcome = outcomes[index];
    try {
      std::optional<std::string> path;
      if (spectra_dir) {
        SpectrumRecord probe;
        probe.n_majorana = config.n_majorana;
        probe.k = k;
        probe.scheme = config.scheme;
        probe.seed = seeds[index];
        path = (fs::path(*spectra_dir) / probe.canonical_filename(extension)).string();
      }
      outcome.record = compute_realization(config, k, seeds[index], path);
      // Re-cluster with the configured tolerance (a loaded record may carry
      // the tolerance it was saved with).
      const double tol = config.degeneracy_tol ? *config.degeneracy_tol
                                               : default_degeneracy_tol(outcome.record.eigenvalues);
      outcome.record.degeneracy_tol = tol;
      outcome.record.multiplicities = detect_degeneracies(outcome.record.eigenvalues, tol);
      for (int s = 0; s < 2; ++s) {
        outcome.record.sector_multiplicities[s] =
            detect_degeneracies(outcome.record.sector_eigenvalues[s], tol);
      }
      outcome.ok = true;
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.error = e.what();
    }
  };

  unsigned n_workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(n_real));
  if (n_workers <= 1) {
    for (std::uint64_t i = 0; i < n_real; ++i) worker_task(i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t i = next.fetch_add(1);
          if (i >= n_real) return;
          worker_task(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // --- deterministic sequential aggregation ---------------------------------
  EnsembleResult result;
  {
    json resolved = config.to_json();
    resolved["K"] = k;
    resolved.erase("p");
    resolved["n_realizations"] = n_real;
    resolved.erase("eigenvalue_budget");
    // Execution details do not belong in the result (the determinism
    // contract spans worker counts and output locations).
    resolved.erase("workers");
    resolved.erase("output_dir");
    result.resolved_config_text_ = resolved.dump();
  }
  result.config_hash = config.config_hash();
  result.sampling_hash = config.sampling_hash();
  result.n_majorana = config.n_majorana;
  result.k = k;
  result.scheme = config.scheme;
  result.base_seed = config.base_seed;
  result.seeds = seeds;

  std::uint64_t least_degenerate = 0;
  std::vector<double> r_pooled, r_even, r_odd;
  const auto times = log_time_grid(config.t_grid.t_min, config.t_grid.t_max, config.t_grid.points);

  std::vector<CurveAccumulator> g_mean, h_mean;
  std::vector<RatioAccumulator> g_ratio, h_ratio;
  const std::size_t n_g = config.betas.size();
  const std::size_t n_h = config.alphas.size() * config.betas.size();
  if (config.sff_averaging == SffAveraging::MeanOfRatios) {
    g_mean.assign(n_g, CurveAccumulator(times.size()));
    h_mean.assign(n_h, CurveAccumulator(times.size()));
  } else {
    g_ratio.assign(n_g, RatioAccumulator(times.size()));
    h_ratio.assign(n_h, RatioAccumulator(times.size()));
  }
  if (config.keep_realization_curves) {
    result.raw_g.resize(n_g);
    result.raw_h.resize(n_h);
  }
  std::vector<UnfoldedSpectrum> unfolded_sectors;

  std::vector<double> scratch(times.size());
  for (std::uint64_t i = 0; i < n_real; ++i) {
    const auto& outcome = outcomes[i];
    if (!outcome.ok) {
      ++result.n_failed;
      result.failed_indices.push_back(i);
      continue;
    }
    ++result.n_completed;
    const auto& record = outcome.record;

    const bool least = record.degeneracy_class() == DegeneracyClass::LeastDegenerate;
    if (least) ++least_degenerate;

    // Gap ratios on distinct values, per sector, pooled across sectors.
    if (!config.least_degenerate_only_for_r || least) {
      double ratio_sum = 0.0;
      std::uint64_t ratio_count = 0;
      bool any_sector = false;
      for (int s = 0; s < 2; ++s) {
        const auto distinct = distinct_values(record.sector_multiplicities[s]);
        if (distinct.size() < 3) continue;
        const auto stats = gap_ratios(distinct);
        for (const double r : stats.ratios) ratio_sum += r;
        ratio_count += stats.ratios.size();
        (s == 0 ? r_even : r_odd).push_back(stats.mean);
        any_sector = true;
      }
      if (ratio_count > 0) {
        r_pooled.push_back(ratio_sum / static_cast<double>(ratio_count));
      }
      if (any_sector) ++result.n_gap_ratio_realizations;
    }

    // Form factors over the full spectrum including degenerate copies.
    for (std::size_t bi = 0; bi < config.betas.size(); ++bi) {
      double denom_root = 0.0;
      form_factor_raw(record.eigenvalues, 0.0, config.betas[bi], times, scratch, denom_root,
                      HDenominator::SameAlpha);
      if (config.sff_averaging == SffAveraging::MeanOfRatios) {
        std::vector<double> ratios(times.size());
        for (std::size_t t = 0; t < times.size(); ++t) {
          ratios[t] = scratch[t] / (denom_root * denom_root);
        }
        g_mean[bi].add(ratios);
        if (config.keep_realization_curves) result.raw_g[bi].values.push_back(std::move(ratios));
      } else {
        g_ratio[bi].add(scratch, denom_root);
        if (config.keep_realization_curves) {
          std::vector<double> ratios(times.size());
          for (std::size_t t = 0; t < times.size(); ++t) {
            ratios[t] = scratch[t] / (denom_root * denom_root);
          }
          result.raw_g[bi].values.push_back(std::move(ratios));
        }
      }
      for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
        const std::size_t slot = ai * config.betas.size() + bi;
        double h_denom_root = 0.0;
        form_factor_raw(record.eigenvalues, config.alphas[ai], config.betas[bi], times, scratch,
                        h_denom_root, config.h_denominator);
        if (config.sff_averaging == SffAveraging::MeanOfRatios) {
          std::vector<double> ratios(times.size());
          for (std::size_t t = 0; t < times.size(); ++t) {
            ratios[t] = scratch[t] / (h_denom_root * h_denom_root);
          }
          h_mean[slot].add(ratios);
          if (config.keep_realization_curves)
            result.raw_h[slot].values.push_back(std::move(ratios));
        } else {
          h_ratio[slot].add(scratch, h_denom_root);
          if (config.keep_realization_curves) {
            std::vector<double> ratios(times.size());
            for (std::size_t t = 0; t < times.size(); ++t) {
              ratios[t] = scratch[t] / (h_denom_root * h_denom_root);
            }
            result.raw_h[slot].values.push_back(std::move(ratios));
          }
        }
      }
    }

    // Number variance: each parity sector unfolds separately on its
    // distinct levels.
    if (!config.sigma2_windows.empty()) {
      for (int s = 0; s < 2; ++s) {
        const auto distinct = distinct_values(record.sector_multiplicities[s]);
        try {
          unfolded_sectors.push_back(
              unfold(distinct, config.unfold_order, config.unfold_trim));
        } catch (const std::exception&) {
          // Pathological sector spectra (heavy extra degeneracy) are skipped.
        }
      }
    }
  }

  if (result.n_completed > 0) {
    const double frac = static_cast<double>(least_degenerate) /
                        static_cast<double>(result.n_completed);
    result.least_degenerate_fraction = frac;
    result.least_degenerate_stderr =
        std::sqrt(frac * (1.0 - frac) / static_cast<double>(result.n_completed));
  }
  result.mean_r = mean_stderr(r_pooled);
  result.mean_r_even = mean_stderr(r_even);
  result.mean_r_odd = mean_stderr(r_odd);

  for (std::size_t bi = 0; bi < config.betas.size(); ++bi) {
    EnsembleCurve curve;
    curve.times = times;
    curve.beta = config.betas[bi];
    curve.n_realizations = result.n_completed;
    curve.mode = config.sff_averaging;
    if (config.sff_averaging == SffAveraging::MeanOfRatios) {
      curve.values = g_mean[bi].mean;
      curve.std_errors = g_mean[bi].std_errors();
    } else {
      g_ratio[bi].finalize(curve);
    }
    if (config.keep_realization_curves) result.raw_g[bi].beta = config.betas[bi];
    result.g_curves.push_back(std::move(curve));
  }
  for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
    for (std::size_t bi = 0; bi < config.betas.size(); ++bi) {
      const std::size_t slot = ai * config.betas.size() + bi;
      EnsembleCurve curve;
      curve.times = times;
      curve.beta = config.betas[bi];
      curve.alpha = config.alphas[ai];
      curve.n_realizations = result.n_completed;
      curve.mode = config.sff_averaging;
      if (config.sff_averaging == SffAveraging::MeanOfRatios) {
        curve.values = h_mean[slot].mean;
        curve.std_errors = h_mean[slot].std_errors();
      } else {
        h_ratio[slot].finalize(curve);
      }
      if (config.keep_realization_curves) {
        result.raw_h[slot].beta = config.betas[bi];
        result.raw_h[slot].alpha = config.alphas[ai];
      }
      result.h_curves.push_back(std::move(curve));
    }
  }
  if (!config.sigma2_windows.empty() && !unfolded_sectors.empty()) {
    result.sigma2 = number_variance_ensemble(unfolded_sectors, config.sigma2_windows);
  }
  return result;
}

std::vector<SweepEntry> sweep(const std::vector<RunConfig>& grid) {
  std::set<std::uint64_t> hashes;
  for (const auto& config : grid) {
    if (!hashes.insert(config.config_hash()).second) {
      throw std::invalid_argument("sweep: duplicate config in grid");
    }
  }
  std::vector<SweepEntry> entries;
  entries.reserve(grid.size());
  for (const auto& config : grid) {
    SweepEntry entry;
    try {
      entry.result = run(config);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

void open_or_throw(std::ofstream& out, const std::string& path) {
  out.open(path);
  if (!out) throw DataError("cannot open output file: " + path);
}

}  // namespace

void write_curve_csv(const EnsembleCurve& curve, const std::string& path) {
  std::ofstream out;
  open_or_throw(out, path);
  out.precision(17);
  out << "t,value,stderr,n_realizations\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    out << curve.times[i] << "," << curve.values[i] << "," << curve.std_errors[i] << ","
        << curve.n_realizations << "\n";
  }
  if (!out) throw DataError("failed writing: " + path);
}

void write_sigma2_csv(const Sigma2Curve& curve, const std::string& path) {
  std::ofstream out;
  open_or_throw(out, path);
  out.precision(17);
  out << "window,sigma2,stderr,n_realizations\n";
  for (std::size_t i = 0; i < curve.window_lengths.size(); ++i) {
    out << curve.window_lengths[i] << "," << curve.values[i] << "," << curve.std_errors[i] << ","
        << curve.n_realizations << "\n";
  }
  if (!out) throw DataError("failed writing: " + path);
}

void write_histogram_csv(const Histogram& histogram, const std::string& path) {
  std::ofstream out;
  open_or_throw(out, path);
  out.precision(17);
  out << "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < histogram.bin_left.size(); ++i) {
    out << histogram.bin_left[i] << "," << histogram.bin_right[i] << "," << histogram.density[i]
        << "\n";
  }
  if (!out) throw DataError("failed writing: " + path);
}

}  // namespace syk
