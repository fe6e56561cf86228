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

// Command-line front end: sampling, diagonalization, statistics datasets,
// figure presets, and fixture validation.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 resource cap exceeded.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "syk/ensemble.hpp"
#include "syk/errors.hpp"
#include "syk/model.hpp"
#include "syk/rmt.hpp"
#include "syk/rng.hpp"
#include "syk/spectrum.hpp"
#include "syk/statistics.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace syk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitResource = 3;

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Collects produced files; written once per stats invocation.
class Manifest {
public:
  Manifest(fs::path out_dir, std::string command)
      : out_dir_(std::move(out_dir)), command_(std::move(command)) {}

  void add(const fs::path& path, std::uint64_t config_hash) {
    files_.push_back(json{{"path", fs::relative(path, out_dir_).string()},
                          {"config_hash", hex64(config_hash)}});
  }

  void write() const {
    json doc{{"schema_version", 1}, {"command", command_}, {"files", files_}};
    std::ofstream out(out_dir_ / "manifest.json");
    if (!out) throw DataError("cannot write manifest in " + out_dir_.string());
    out << doc.dump(2) << "\n";
  }

private:
  fs::path out_dir_;
  std::string command_;
  json files_ = json::array();
};

void write_json_file(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

json curve_sidecar(const EnsembleResult& result, const EnsembleCurve& curve) {
  json doc = result.config_json();
  doc["beta"] = curve.beta;
  if (curve.alpha) doc["alpha"] = *curve.alpha;
  doc["n_realizations_used"] = curve.n_realizations;
  doc["config_hash"] = hex64(result.config_hash);
  return doc;
}

Histogram value_histogram(const std::vector<double>& values, double bin_width) {
  if (values.empty()) throw DataError("histogram: no values");
  double max_v = 0.0;
  for (const double v : values) max_v = std::max(max_v, v);
  const auto n_bins = static_cast<std::size_t>(std::floor(max_v / bin_width)) + 1;
  Histogram h;
  h.bin_left.resize(n_bins);
  h.bin_right.resize(n_bins);
  h.density.assign(n_bins, 0.0);
  for (std::size_t b = 0; b < n_bins; ++b) {
    h.bin_left[b] = static_cast<double>(b) * bin_width;
    h.bin_right[b] = static_cast<double>(b + 1) * bin_width;
  }
  const double weight = 1.0 / (static_cast<double>(values.size()) * bin_width);
  for (const double v : values) {
    auto b = static_cast<std::size_t>(v / bin_width);
    if (b >= n_bins) b = n_bins - 1;
    h.density[b] += weight;
  }
  return h;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  int n = 0;
  std::uint64_t k = 0;
  std::string scheme;
  std::uint64_t seed = 0;
  std::string out;
  std::string gaussian_norm = "per-realization";
};

int run_sample(const SampleArgs& args) {
  const auto scheme = scheme_from_name(args.scheme);
  if (!scheme) {
    std::cerr << "error: unknown scheme '" << args.scheme << "'\n";
    return kExitUsage;
  }
  if (*scheme == CouplingScheme::BinarySparse && args.k % 2 != 0) {
    std::cerr << "error: K must be even for binary scheme\n";
    return kExitUsage;
  }
  const std::uint64_t total = n_total(args.n);
  if (*scheme != CouplingScheme::GaussianDense && args.k > total) {
    std::cerr << "error: K exceeds N_total=" << total << "\n";
    return kExitUsage;
  }
  const GaussianNorm norm = (args.gaussian_norm == "fixed-k") ? GaussianNorm::FixedK
                                                              : GaussianNorm::PerRealization;
  const auto cs = sample(*scheme, args.n, args.k, args.seed, norm);
  write_fixture(cs, args.out);
  const auto counts = cs.sign_counts();
  std::printf("N=%d K=%llu C=%.9g (+:%llu -:%llu", cs.n_majorana,
              static_cast<unsigned long long>(cs.k()), cs.normalization,
              static_cast<unsigned long long>(counts[0]),
              static_cast<unsigned long long>(counts[1]));
  if (counts[2] > 0) std::printf(" other:%llu", static_cast<unsigned long long>(counts[2]));
  std::printf(") -> %s\n", args.out.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
  std::string fixture;
  int n = 0;
  std::uint64_t k = 0;
  std::string scheme = "binary";
  std::uint64_t seed = 0;
  std::string sector = "both";
  std::string out;
  std::string format = "csv";
  bool force = false;
  std::uint64_t max_dim = kDefaultMatrixDimCap;
  double degeneracy_tol = 0.0;  // 0 = relative default
};

int run_spectrum(const SpectrumArgs& args) {
  CouplingSet cs;
  if (!args.fixture.empty()) {
    cs = read_fixture(args.fixture);
  } else {
    if (args.n == 0 || args.k == 0) {
      std::cerr << "error: provide --fixture or --n/--k/--scheme/--seed\n";
      return kExitUsage;
    }
    const auto scheme = scheme_from_name(args.scheme);
    if (!scheme) {
      std::cerr << "error: unknown scheme '" << args.scheme << "'\n";
      return kExitUsage;
    }
    cs = sample(*scheme, args.n, args.k, args.seed);
  }

  const std::uint64_t full_dim = std::uint64_t{1} << (cs.n_majorana / 2);
  const std::uint64_t needed_dim = (args.sector == "full") ? full_dim : full_dim / 2;
  if (needed_dim > args.max_dim && !args.force) {
    const double gib =
        static_cast<double>(needed_dim) * static_cast<double>(needed_dim) * 16.0 / (1 << 30);
    std::fprintf(stderr,
                 "error: matrix dimension %llu exceeds the cap %llu (~%.0f GiB per dense "
                 "matrix); pass --force on a machine with enough memory\n",
                 static_cast<unsigned long long>(needed_dim),
                 static_cast<unsigned long long>(args.max_dim), gib);
    return kExitResource;
  }
  const std::uint64_t cap = std::max(args.max_dim, needed_dim);
  const std::optional<double> tol =
      args.degeneracy_tol > 0.0 ? std::optional<double>(args.degeneracy_tol) : std::nullopt;

  SpectrumRecord record;
  if (args.sector == "both") {
    record = diagonalize(cs, cap, tol);
  } else {
    const auto terms = assemble(cs);
    record.n_majorana = cs.n_majorana;
    record.k = cs.k();
    record.scheme = cs.scheme;
    record.seed = cs.seed;
    if (args.sector == "full") {
      record.eigenvalues = eigenvalues(build_matrix(terms, std::nullopt, cap));
    } else if (args.sector == "even" || args.sector == "odd") {
      const auto label = (args.sector == "even") ? SectorLabel::Even : SectorLabel::Odd;
      const int idx = (args.sector == "even") ? 0 : 1;
      record.sector_eigenvalues[idx] = eigenvalues(build_matrix(terms, label, cap));
      record.eigenvalues = record.sector_eigenvalues[idx];
    } else {
      std::cerr << "error: --sector must be both|even|odd|full\n";
      return kExitUsage;
    }
    record.degeneracy_tol = tol ? *tol : default_degeneracy_tol(record.eigenvalues);
    record.multiplicities = detect_degeneracies(record.eigenvalues, record.degeneracy_tol);
    for (int s = 0; s < 2; ++s) {
      if (!record.sector_eigenvalues[s].empty()) {
        record.sector_multiplicities[s] =
            detect_degeneracies(record.sector_eigenvalues[s], record.degeneracy_tol);
      }
    }
  }

  std::printf("N=%d K=%llu scheme=%s seed=%llu\n", record.n_majorana,
              static_cast<unsigned long long>(record.k), scheme_name(record.scheme),
              static_cast<unsigned long long>(record.seed));
  const double per_dim = record.sum_sq_over_dim() *
                         (args.sector == "both" || args.sector == "full"
                              ? 1.0
                              : 2.0);  // single sector holds half the levels
  std::printf("levels=%zu  sum(e^2)/2^(N/2) = %.12f\n", record.eigenvalues.size(), per_dim);
  if (args.sector == "both") {
    const auto cls = record.degeneracy_class();
    std::printf("degeneracy: %s (tol %.3e)\n",
                cls == DegeneracyClass::LeastDegenerate ? "least-degenerate" : "extra-degenerate",
                record.degeneracy_tol);
    if (record.n_majorana % 8 == 2 || record.n_majorana % 8 == 6) {
      double max_dev = 0.0;
      const auto& even = record.sector_eigenvalues[0];
      const auto& odd = record.sector_eigenvalues[1];
      for (std::size_t i = 0; i < even.size(); ++i) {
        max_dev = std::max(max_dev, std::abs(even[i] - odd[i]));
      }
      std::printf("sector spectra equal within 1e-9: %s (max |diff| = %.3e)\n",
                  max_dev <= 1e-9 ? "yes" : "NO", max_dev);
    }
  }
  if (!args.out.empty()) {
    const auto format = (args.format == "binary") ? SpectrumFileFormat::Binary
                                                  : SpectrumFileFormat::Csv;
    save_spectrum(record, args.out, format);
    std::printf("wrote %s\n", args.out.c_str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// validate

int run_validate(const std::string& path) {
  const auto report = validate_fixture(path);
  std::printf("%s\n", report.summary.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::string config_path;
  std::string figure;
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string data_dir = SYK_DEFAULT_DATA_DIR;
  // overrides / analysis knobs
  std::uint64_t realizations = 0;  // 0 = preset default
  std::uint64_t seed = 0;
  bool seed_set = false;
  int max_n = 0;
  int n_override = 0;
  int workers = 0;
  std::vector<double> betas{0.0};
  std::vector<double> alphas;
  std::vector<double> sigma2_windows;
  double bin_width = 0.1;
  double r_bin_width = 0.02;
  bool include_extra_degenerate = false;
  double t_min = 1e-1, t_max = 1e6;
  int t_points = 400;
  int unfold_order = 10;
  double unfold_trim = 0.05;
  bool force = false;
  std::uint64_t max_dim = kDefaultMatrixDimCap;
};

void write_ensemble_outputs(const EnsembleResult& result, const fs::path& dir,
                            const std::string& stem, Manifest& manifest) {
  for (const auto& curve : result.g_curves) {
    char suffix[64];
    std::snprintf(suffix, sizeof(suffix), "_g_b%g", curve.beta);
    const fs::path path = dir / (stem + suffix + ".csv");
    write_curve_csv(curve, path.string());
    write_json_file(path.string() + ".json", curve_sidecar(result, curve));
    manifest.add(path, result.config_hash);
  }
  for (const auto& curve : result.h_curves) {
    char suffix[64];
    std::snprintf(suffix, sizeof(suffix), "_h_a%g_b%g", curve.alpha.value_or(0.0), curve.beta);
    const fs::path path = dir / (stem + suffix + ".csv");
    write_curve_csv(curve, path.string());
    write_json_file(path.string() + ".json", curve_sidecar(result, curve));
    manifest.add(path, result.config_hash);
  }
  if (result.sigma2) {
    const fs::path path = dir / (stem + "_sigma2.csv");
    write_sigma2_csv(*result.sigma2, path.string());
    manifest.add(path, result.config_hash);
  }
  const fs::path summary = dir / (stem + "_summary.json");
  write_json_file(summary, result.summary_json());
  manifest.add(summary, result.config_hash);
}

int stats_from_config(const StatsArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw DataError("cannot open config: " + args.config_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw DataError("config is not valid JSON: " + std::string(e.what()));
  }
  RunConfig config = RunConfig::from_json(doc);
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  if (config.output_dir.empty()) {
    std::cerr << "error: no output directory (config output_dir or --out-dir)\n";
    return kExitUsage;
  }
  if (args.workers > 0) config.workers = args.workers;
  fs::create_directories(config.output_dir);
  const auto result = run(config);
  Manifest manifest(config.output_dir, "stats --config");
  char stem[64];
  std::snprintf(stem, sizeof(stem), "N%d_K%llu_%s", result.n_majorana,
                static_cast<unsigned long long>(result.k),
                scheme_file_token(result.scheme).c_str());
  write_ensemble_outputs(result, config.output_dir, stem, manifest);
  manifest.write();
  std::printf("completed %llu realizations (%llu failed); outputs in %s\n",
              static_cast<unsigned long long>(result.n_completed),
              static_cast<unsigned long long>(result.n_failed), config.output_dir.c_str());
  return kExitOk;
}

std::uint64_t k_from_multiple(int n, double multiple, CouplingScheme scheme) {
  auto k = static_cast<std::uint64_t>(std::llround(multiple * n));
  if (scheme == CouplingScheme::BinarySparse && k % 2 != 0) ++k;
  return std::max<std::uint64_t>(k, 4);
}

int stats_from_figure(const StatsArgs& args) {
  const fs::path presets_path = fs::path(args.data_dir) / "figure_presets.json";
  std::ifstream in(presets_path);
  if (!in) throw DataError("cannot open figure presets: " + presets_path.string());
  json presets;
  in >> presets;
  if (!presets.at("figures").contains(args.figure)) {
    std::cerr << "error: unknown figure preset '" << args.figure << "'\n";
    return kExitUsage;
  }
  const json preset = presets["figures"][args.figure];
  const fs::path dir = args.out_dir;
  fs::create_directories(dir);
  Manifest manifest(dir, "stats --figure " + args.figure);

  // --- s3: fixture validation (full run gated behind --force) --------------
  if (args.figure == "s3") {
    std::ofstream report(dir / "fixture_report.txt");
    for (const auto& rel : preset.at("fixtures")) {
      const fs::path path = fs::path(args.data_dir) / rel.get<std::string>();
      const auto fixture_report = validate_fixture(path.string());
      report << path.filename().string() << ": " << fixture_report.summary << "\n";
      std::printf("%s: %s\n", path.filename().string().c_str(), fixture_report.summary.c_str());

      const auto cs = read_fixture(path.string());
      const std::uint64_t sector_dim = (std::uint64_t{1} << (cs.n_majorana / 2)) / 2;
      if (sector_dim > args.max_dim && !args.force) {
        const double gib = static_cast<double>(sector_dim) * static_cast<double>(sector_dim) *
                           16.0 / (1 << 30);
        std::printf("  full diagonalization skipped: sector dimension %llu needs ~%.0f GiB "
                    "per dense matrix (pass --force on a large-memory host)\n",
                    static_cast<unsigned long long>(sector_dim), gib);
        continue;
      }
      const auto record = diagonalize(cs, std::max(args.max_dim, sector_dim));
      // P(s) and P(r) per sector on distinct levels, pooled.
      std::vector<double> spacings, ratios;
      for (int s = 0; s < 2; ++s) {
        const auto distinct = distinct_values(record.sector_multiplicities[s]);
        const auto u = unfold(distinct, args.unfold_order, args.unfold_trim);
        for (std::size_t i = 1; i < u.values.size(); ++i) {
          spacings.push_back(u.values[i] - u.values[i - 1]);
        }
        const auto r = gap_ratios(distinct);
        ratios.insert(ratios.end(), r.ratios.begin(), r.ratios.end());
      }
      const std::string stem = "N" + std::to_string(cs.n_majorana);
      const fs::path ps_path = dir / (stem + "_ps.csv");
      write_histogram_csv(value_histogram(spacings, args.bin_width), ps_path.string());
      manifest.add(ps_path, 0);
      const fs::path pr_path = dir / (stem + "_pr.csv");
      write_histogram_csv(value_histogram(ratios, args.r_bin_width), pr_path.string());
      manifest.add(pr_path, 0);
    }
    manifest.add(dir / "fixture_report.txt", 0);
    manifest.write();
    return kExitOk;
  }

  const std::uint64_t preset_seed = args.seed_set ? args.seed
                                                  : preset.value("base_seed", std::uint64_t{1});
  const std::uint64_t n_realizations =
      args.realizations > 0 ? args.realizations
                            : preset.value("n_realizations", std::uint64_t{100});

  auto make_config = [&](CouplingScheme scheme, int n, std::uint64_t k, std::uint64_t cell) {
    RunConfig config;
    config.n_majorana = n;
    config.scheme = scheme;
    config.k_couplings = k;
    config.n_realizations = n_realizations;
    config.base_seed = derive_stream_seed(preset_seed, cell);
    if (preset.contains("betas")) config.betas = preset["betas"].get<std::vector<double>>();
    if (preset.contains("alphas")) config.alphas = preset["alphas"].get<std::vector<double>>();
    config.t_grid = TimeGridSpec{args.t_min, args.t_max, args.t_points};
    config.workers = args.workers;
    config.least_degenerate_only_for_r = !args.include_extra_degenerate;
    return config;
  };

  // --- figures 1, 2, s1: scans over (N, K) ----------------------------------
  if (args.figure == "1" || args.figure == "2" || args.figure == "s1") {
    const auto scheme = *scheme_from_name(preset.at("scheme").get<std::string>());
    std::vector<int> n_list = preset.at("n_list").get<std::vector<int>>();
    if (args.max_n > 0) {
      std::erase_if(n_list, [&](int n) { return n > args.max_n; });
    }
    const auto multiples = preset.at("k_multiples").get<std::vector<double>>();
    const bool fraction_mode = (args.figure == "1");

    const fs::path csv_path = dir / (fraction_mode ? "fraction_vs_k.csv" : "r_vs_k.csv");
    std::ofstream csv(csv_path);
    csv.precision(17);
    csv << (fraction_mode ? "N,K,fraction,stderr,n_realizations\n"
                          : "N,K,mean_r,stderr,n_realizations\n");
    std::uint64_t cell = 0;
    for (const int n : n_list) {
      for (const double multiple : multiples) {
        const std::uint64_t k = k_from_multiple(n, multiple, scheme);
        const auto result = run(make_config(scheme, n, k, cell++));
        if (fraction_mode) {
          csv << n << "," << k << "," << result.least_degenerate_fraction << ","
              << result.least_degenerate_stderr << "," << result.n_completed << "\n";
        } else {
          csv << n << "," << k << "," << result.mean_r.mean << "," << result.mean_r.std_error
              << "," << result.n_gap_ratio_realizations << "\n";
        }
        std::printf("N=%d K=%llu done\n", n, static_cast<unsigned long long>(k));
      }
    }
    csv.close();
    manifest.add(csv_path, 0);

    if (!fraction_mode) {
      // Reference values for the universality classes, from the pinned table.
      const auto table =
          RmtReferenceTable::load((fs::path(args.data_dir) / "rmt_reference.json").string());
      const fs::path ref_path = dir / "rmt_reference.csv";
      std::ofstream ref(ref_path);
      ref.precision(17);
      ref << "N,ensemble,mean_r,std_error\n";
      for (const int n : n_list) {
        const auto& v = table.value_for_n(n);
        ref << n << "," << rmt_name(rmt_class(n)) << "," << v.mean_r << "," << v.std_error
            << "\n";
      }
      ref << ",Poisson," << poisson_mean_r() << ",0\n";
      ref.close();
      manifest.add(ref_path, 0);
    }
    manifest.write();
    return kExitOk;
  }

  // --- figures 3, s2: SFF curves per K --------------------------------------
  if (args.figure == "3" || args.figure == "s2") {
    const auto scheme = *scheme_from_name(preset.at("scheme").get<std::string>());
    const int n = args.n_override > 0 ? args.n_override : preset.at("n").get<int>();
    const auto multiples = preset.at("k_multiples").get<std::vector<double>>();
    std::uint64_t cell = 0;
    for (const double multiple : multiples) {
      const std::uint64_t k = k_from_multiple(n, multiple, scheme);
      const auto result = run(make_config(scheme, n, k, cell++));
      char stem[64];
      std::snprintf(stem, sizeof(stem), "N%d_K%llu_%s", n, static_cast<unsigned long long>(k),
                    scheme_file_token(scheme).c_str());
      write_ensemble_outputs(result, dir, stem, manifest);
      std::printf("N=%d K=%llu done\n", n, static_cast<unsigned long long>(k));
    }
    manifest.write();
    return kExitOk;
  }

  // --- figures 4, 5: binary vs Gaussian, plus the dense-limit cell ----------
  if (args.figure == "4" || args.figure == "5") {
    const auto scheme_names = preset.at("schemes").get<std::vector<std::string>>();
    const int n = args.n_override > 0 ? args.n_override : preset.at("n").get<int>();
    const auto multiples = preset.at("k_multiples").get<std::vector<double>>();
    const int dense_n = preset.value("dense_n", 0);
    std::uint64_t cell = 0;
    for (const auto& scheme_name_str : scheme_names) {
      const auto scheme = *scheme_from_name(scheme_name_str);
      for (const double multiple : multiples) {
        const std::uint64_t k = k_from_multiple(n, multiple, scheme);
        const auto result = run(make_config(scheme, n, k, cell++));
        char stem[64];
        std::snprintf(stem, sizeof(stem), "N%d_K%llu_%s", n, static_cast<unsigned long long>(k),
                      scheme_file_token(scheme).c_str());
        write_ensemble_outputs(result, dir, stem, manifest);
        std::printf("%s N=%d K=%llu done\n", scheme_name_str.c_str(), n,
                    static_cast<unsigned long long>(k));
      }
      if (dense_n > 0) {
        // Densest even coupling count, so binary and Gaussian run at the
        // same K (binom(N,4) can be odd, which binary cannot realize).
        std::uint64_t k_dense = n_total(dense_n);
        if (k_dense % 2 != 0) --k_dense;
        const auto result = run(make_config(scheme, dense_n, k_dense, cell++));
        char stem[64];
        std::snprintf(stem, sizeof(stem), "N%d_K%llu_%s_dense", dense_n,
                      static_cast<unsigned long long>(k_dense),
                      scheme_file_token(scheme).c_str());
        write_ensemble_outputs(result, dir, stem, manifest);
        std::printf("%s dense N=%d K=%llu done\n", scheme_name_str.c_str(), dense_n,
                    static_cast<unsigned long long>(k_dense));
      }
    }
    manifest.write();
    return kExitOk;
  }

  std::cerr << "error: figure preset '" << args.figure << "' is not handled\n";
  return kExitUsage;
}

int stats_from_inputs(const StatsArgs& args) {
  const fs::path dir = args.out_dir;
  fs::create_directories(dir);
  Manifest manifest(dir, "stats --inputs");

  std::vector<SpectrumRecord> records;
  records.reserve(args.inputs.size());
  for (const auto& path : args.inputs) records.push_back(load_spectrum(path));
  if (records.empty()) throw DataError("stats: no input spectra");

  // Gap ratios (pooled over sectors) plus the P(r) and P(s) sample pools.
  std::vector<double> per_realization_mean_r, all_ratios, all_spacings;
  std::vector<UnfoldedSpectrum> unfolded;
  std::uint64_t skipped_extra = 0;
  for (const auto& record : records) {
    const bool has_sectors = !record.sector_eigenvalues[0].empty() &&
                             !record.sector_eigenvalues[1].empty();
    if (has_sectors && !args.include_extra_degenerate &&
        record.degeneracy_class() == DegeneracyClass::ExtraDegenerate) {
      ++skipped_extra;
      continue;
    }
    double sum = 0.0;
    std::uint64_t count = 0;
    auto accumulate = [&](const std::vector<Multiplicity>& mults) {
      const auto distinct = distinct_values(mults);
      if (distinct.size() < 3) return;
      const auto stats = gap_ratios(distinct);
      for (const double r : stats.ratios) {
        sum += r;
        all_ratios.push_back(r);
      }
      count += stats.ratios.size();
      try {
        const auto u = unfold(distinct, args.unfold_order, args.unfold_trim);
        for (std::size_t i = 1; i < u.values.size(); ++i) {
          all_spacings.push_back(u.values[i] - u.values[i - 1]);
        }
        unfolded.push_back(u);
      } catch (const std::exception&) {
        // unfoldable spectrum (too few levels or non-monotone fit); skip
      }
    };
    if (has_sectors) {
      accumulate(record.sector_multiplicities[0]);
      accumulate(record.sector_multiplicities[1]);
    } else {
      accumulate(record.multiplicities);
    }
    if (count > 0) per_realization_mean_r.push_back(sum / static_cast<double>(count));
  }

  const auto r_stats = mean_stderr(per_realization_mean_r);
  json summary{{"schema_version", 1},
               {"n_inputs", records.size()},
               {"skipped_extra_degenerate", skipped_extra},
               {"mean_r", r_stats.mean},
               {"mean_r_stderr", r_stats.std_error},
               {"n_realizations_used", r_stats.count}};
  write_json_file(dir / "r_summary.json", summary);
  manifest.add(dir / "r_summary.json", 0);
  if (!all_ratios.empty()) {
    write_histogram_csv(value_histogram(all_ratios, args.r_bin_width),
                        (dir / "pr_hist.csv").string());
    manifest.add(dir / "pr_hist.csv", 0);
  }
  if (!all_spacings.empty()) {
    write_histogram_csv(value_histogram(all_spacings, args.bin_width),
                        (dir / "ps_hist.csv").string());
    manifest.add(dir / "ps_hist.csv", 0);
  }
  if (!args.sigma2_windows.empty() && !unfolded.empty()) {
    const auto curve = number_variance_ensemble(unfolded, args.sigma2_windows);
    write_sigma2_csv(curve, (dir / "sigma2.csv").string());
    manifest.add(dir / "sigma2.csv", 0);
  }

  // Ensemble-averaged form factors over the loaded spectra.
  const auto times = log_time_grid(args.t_min, args.t_max, args.t_points);
  auto average_curves = [&](double alpha, double beta) {
    std::vector<double> mean(times.size(), 0.0);
    for (const auto& record : records) {
      const auto curve = (alpha == 0.0) ? sff_g(record.eigenvalues, times, beta)
                                        : sff_h(record.eigenvalues, alpha, times, beta);
      for (std::size_t i = 0; i < times.size(); ++i) mean[i] += curve.values[i];
    }
    EnsembleCurve out;
    out.times = times;
    out.values = std::move(mean);
    for (auto& v : out.values) v /= static_cast<double>(records.size());
    out.std_errors.assign(times.size(), 0.0);
    out.beta = beta;
    if (alpha != 0.0) out.alpha = alpha;
    out.n_realizations = records.size();
    return out;
  };
  for (const double beta : args.betas) {
    const auto curve = average_curves(0.0, beta);
    char name[64];
    std::snprintf(name, sizeof(name), "g_b%g.csv", beta);
    write_curve_csv(curve, (dir / name).string());
    manifest.add(dir / name, 0);
    for (const double alpha : args.alphas) {
      const auto h = average_curves(alpha, beta);
      std::snprintf(name, sizeof(name), "h_a%g_b%g.csv", alpha, beta);
      write_curve_csv(h, (dir / name).string());
      manifest.add(dir / name, 0);
    }
  }
  manifest.write();
  std::printf("analyzed %zu spectra (skipped %llu extra-degenerate); outputs in %s\n",
              records.size(), static_cast<unsigned long long>(skipped_extra),
              args.out_dir.c_str());
  return kExitOk;
}

int run_stats(const StatsArgs& args) {
  const int modes = (!args.config_path.empty() ? 1 : 0) + (!args.figure.empty() ? 1 : 0) +
                    (!args.inputs.empty() ? 1 : 0);
  if (modes != 1) {
    std::cerr << "error: choose exactly one of --config, --figure, --inputs\n";
    return kExitUsage;
  }
  if ((!args.figure.empty() || !args.inputs.empty()) && args.out_dir.empty()) {
    std::cerr << "error: --out-dir is required\n";
    return kExitUsage;
  }
  if (!args.config_path.empty()) return stats_from_config(args);
  if (!args.figure.empty()) return stats_from_figure(args);
  return stats_from_inputs(args);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sykspectra: sparse SYK Hamiltonians and spectral-chaos diagnostics"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  auto* cmd_sample = app.add_subcommand("sample", "Sample a coupling set to a fixture file");
  cmd_sample->add_option("--n", sample_args.n, "Number of Majorana fermions (even)")->required();
  cmd_sample->add_option("--k", sample_args.k, "Number of nonzero couplings")->required();
  cmd_sample->add_option("--scheme", sample_args.scheme,
                         "binary | unary | gaussian | gaussian-dense")
      ->required();
  cmd_sample->add_option("--seed", sample_args.seed, "RNG seed");
  cmd_sample->add_option("--out", sample_args.out, "Output fixture path")->required();
  cmd_sample->add_option("--gaussian-norm", sample_args.gaussian_norm,
                         "per-realization | fixed-k");

  SpectrumArgs spectrum_args;
  auto* cmd_spectrum =
      app.add_subcommand("spectrum", "Diagonalize one realization and report its spectrum");
  cmd_spectrum->add_option("--fixture", spectrum_args.fixture, "Read the coupling set from a file");
  cmd_spectrum->add_option("--n", spectrum_args.n, "N (inline sampling)");
  cmd_spectrum->add_option("--k", spectrum_args.k, "K (inline sampling)");
  cmd_spectrum->add_option("--scheme", spectrum_args.scheme, "Scheme (inline sampling)");
  cmd_spectrum->add_option("--seed", spectrum_args.seed, "Seed (inline sampling)");
  cmd_spectrum->add_option("--sector", spectrum_args.sector, "both | even | odd | full");
  cmd_spectrum->add_option("--out", spectrum_args.out, "Write the spectrum to this path");
  cmd_spectrum->add_option("--format", spectrum_args.format, "csv | binary");
  cmd_spectrum->add_flag("--force", spectrum_args.force, "Override the matrix dimension cap");
  cmd_spectrum->add_option("--max-dim", spectrum_args.max_dim, "Matrix dimension cap");
  cmd_spectrum->add_option("--degeneracy-tol", spectrum_args.degeneracy_tol,
                           "Absolute degeneracy tolerance (default: relative 1e-10)");

  StatsArgs stats_args;
  auto* cmd_stats = app.add_subcommand("stats", "Ensemble statistics and figure datasets");
  cmd_stats->add_option("--config", stats_args.config_path, "RunConfig JSON file");
  cmd_stats->add_option("--figure", stats_args.figure, "Figure preset: 1|2|3|4|5|s1|s2|s3");
  cmd_stats->add_option("--inputs", stats_args.inputs, "Persisted spectrum files");
  cmd_stats->add_option("--out-dir", stats_args.out_dir, "Output directory");
  cmd_stats->add_option("--data-dir", stats_args.data_dir, "Data directory (presets, fixtures)");
  cmd_stats->add_option("--realizations", stats_args.realizations, "Override realization count");
  cmd_stats
      ->add_option("--seed", stats_args.seed, "Override base seed")
      ->each([&stats_args](const std::string&) { stats_args.seed_set = true; });
  cmd_stats->add_option("--max-n", stats_args.max_n, "Limit scans to N <= this");
  cmd_stats->add_option("--n", stats_args.n_override, "Override N for single-N presets");
  cmd_stats->add_option("--workers", stats_args.workers, "Worker threads (0 = auto)");
  cmd_stats->add_option("--beta", stats_args.betas, "Beta values (inputs mode)");
  cmd_stats->add_option("--alpha", stats_args.alphas, "Alpha values (inputs mode)");
  cmd_stats->add_option("--sigma2-windows", stats_args.sigma2_windows,
                        "Number-variance window lengths");
  cmd_stats->add_option("--bin-width", stats_args.bin_width, "P(s) histogram bin width");
  cmd_stats->add_option("--r-bin-width", stats_args.r_bin_width, "P(r) histogram bin width");
  cmd_stats->add_flag("--include-extra-degenerate", stats_args.include_extra_degenerate,
                      "Keep extra-degenerate samples in gap-ratio statistics");
  cmd_stats->add_option("--t-min", stats_args.t_min, "Time grid start");
  cmd_stats->add_option("--t-max", stats_args.t_max, "Time grid end");
  cmd_stats->add_option("--t-points", stats_args.t_points, "Time grid points");
  cmd_stats->add_option("--unfold-order", stats_args.unfold_order, "Unfolding fit order");
  cmd_stats->add_option("--unfold-trim", stats_args.unfold_trim, "Unfolding edge trim fraction");
  cmd_stats->add_flag("--force", stats_args.force, "Allow the gated N=32/34 full run");
  cmd_stats->add_option("--max-dim", stats_args.max_dim, "Matrix dimension cap");

  std::string validate_path;
  auto* cmd_validate = app.add_subcommand("validate", "Validate a coupling fixture file");
  cmd_validate->add_option("path", validate_path, "Fixture file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_sample->parsed()) return run_sample(sample_args);
    if (cmd_spectrum->parsed()) return run_spectrum(spectrum_args);
    if (cmd_stats->parsed()) return run_stats(stats_args);
    if (cmd_validate->parsed()) return run_validate(validate_path);
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
