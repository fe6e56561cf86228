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

#include "syk/statistics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "syk/errors.hpp"

namespace syk {

namespace {

void require_sorted(std::span<const double> values, const char* who) {
  if (!std::is_sorted(values.begin(), values.end())) {
    throw std::invalid_argument(std::string(who) + ": input must be sorted ascending");
  }
}

/// Evaluate a polynomial (coefficients in ascending order) and its derivative.
double poly_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

double poly_deriv_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + coeffs[i] * static_cast<double>(i);
  return acc;
}

}  // namespace

GapRatioStats gap_ratios(std::span<const double> distinct_sorted) {
  if (distinct_sorted.size() < 3) {
    throw std::invalid_argument("gap_ratios: need at least 3 distinct eigenvalues");
  }
  require_sorted(distinct_sorted, "gap_ratios");
  GapRatioStats stats;
  stats.ratios.reserve(distinct_sorted.size() - 2);
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 < distinct_sorted.size(); ++i) {
    const double s0 = distinct_sorted[i + 1] - distinct_sorted[i];
    const double s1 = distinct_sorted[i + 2] - distinct_sorted[i + 1];
    if (s0 <= 0.0 || s1 <= 0.0) {
      throw std::invalid_argument("gap_ratios: input must be strictly increasing (deduplicated)");
    }
    const double r = std::min(s0, s1) / std::max(s0, s1);
    stats.ratios.push_back(r);
    sum += r;
  }
  stats.mean = sum / static_cast<double>(stats.ratios.size());
  return stats;
}

double poisson_mean_r() { return 2.0 * std::numbers::ln2 - 1.0; }

UnfoldedSpectrum unfold(std::span<const double> sorted_eigs, int fit_order, double trim) {
  if (fit_order < 1) throw std::invalid_argument("unfold: fit order must be positive");
  if (trim < 0.0 || trim >= 0.5) throw std::invalid_argument("unfold: trim must be in [0, 0.5)");
  require_sorted(sorted_eigs, "unfold");
  const std::size_t n = sorted_eigs.size();
  const auto lo = static_cast<std::size_t>(std::floor(static_cast<double>(n) * trim));
  const std::size_t hi = n - lo;
  const std::size_t kept = hi - lo;
  if (kept < static_cast<std::size_t>(fit_order) + 2) {
    throw DataError("unfold: too few levels after trimming for the requested fit order");
  }

  // Center and scale energies to [-1, 1]; a raw degree-10 Vandermonde would
  // be numerically useless.
  const double e_lo = sorted_eigs[lo];
  const double e_hi = sorted_eigs[hi - 1];
  const double mid = 0.5 * (e_lo + e_hi);
  const double half = 0.5 * (e_hi - e_lo);
  if (half <= 0.0) throw DataError("unfold: spectrum has zero width after trimming");

  Eigen::MatrixXd vandermonde(static_cast<Eigen::Index>(kept), fit_order + 1);
  Eigen::VectorXd staircase(static_cast<Eigen::Index>(kept));
  for (std::size_t i = 0; i < kept; ++i) {
    const double x = (sorted_eigs[lo + i] - mid) / half;
    double power = 1.0;
    for (int j = 0; j <= fit_order; ++j) {
      vandermonde(static_cast<Eigen::Index>(i), j) = power;
      power *= x;
    }
    // Staircase height at an eigenvalue: global rank + 1/2.
    staircase(static_cast<Eigen::Index>(i)) = static_cast<double>(lo + i) + 0.5;
  }
  const Eigen::VectorXd solution = vandermonde.colPivHouseholderQr().solve(staircase);
  std::vector<double> coeffs(solution.data(), solution.data() + solution.size());

  // Reject fits whose density goes non-positive anywhere inside the retained
  // window: probe a uniform grid as well as the nodes themselves.
  for (int probe = 0; probe <= 256; ++probe) {
    const double x = -1.0 + 2.0 * probe / 256.0;
    if (poly_deriv_eval(coeffs, x) <= 0.0) {
      throw DataError("unfold: fitted level density is non-positive inside the window "
                      "(pathological spectrum or over-trimmed fit)");
    }
  }
  UnfoldedSpectrum out;
  out.fit_order = fit_order;
  out.trim_fraction = trim;
  out.values.reserve(kept);
  for (std::size_t i = 0; i < kept; ++i) {
    const double x = (sorted_eigs[lo + i] - mid) / half;
    if (poly_deriv_eval(coeffs, x) <= 0.0) {
      throw DataError("unfold: fitted level density is non-positive inside the window "
                      "(pathological spectrum or over-trimmed fit)");
    }
    out.values.push_back(poly_eval(coeffs, x));
  }
  // The derivative check makes the map monotone at the nodes; duplicate
  // eigenvalues (within fp resolution) would still collapse, so verify.
  for (std::size_t i = 1; i < out.values.size(); ++i) {
    if (out.values[i] <= out.values[i - 1]) {
      throw DataError("unfold: unfolded values are not strictly increasing");
    }
  }
  out.mean_spacing = (out.values.back() - out.values.front()) /
                     static_cast<double>(out.values.size() - 1);
  return out;
}

Histogram spacing_histogram(const UnfoldedSpectrum& u, double bin_width) {
  if (bin_width <= 0.0) throw std::invalid_argument("spacing_histogram: bin width must be positive");
  if (u.values.size() < 2) throw std::invalid_argument("spacing_histogram: need at least 2 levels");
  std::vector<double> spacings;
  spacings.reserve(u.values.size() - 1);
  double max_s = 0.0;
  for (std::size_t i = 1; i < u.values.size(); ++i) {
    const double s = u.values[i] - u.values[i - 1];
    spacings.push_back(s);
    max_s = std::max(max_s, s);
  }
  const auto n_bins = static_cast<std::size_t>(std::floor(max_s / bin_width)) + 1;
  Histogram h;
  h.bin_left.resize(n_bins);
  h.bin_right.resize(n_bins);
  h.density.assign(n_bins, 0.0);
  for (std::size_t b = 0; b < n_bins; ++b) {
    h.bin_left[b] = static_cast<double>(b) * bin_width;
    h.bin_right[b] = static_cast<double>(b + 1) * bin_width;
  }
  const double weight = 1.0 / (static_cast<double>(spacings.size()) * bin_width);
  for (const double s : spacings) {
    auto b = static_cast<std::size_t>(s / bin_width);
    if (b >= n_bins) b = n_bins - 1;
    h.density[b] += weight;
  }
  return h;
}

double wigner_surmise_goe(double s) {
  const double pi = std::numbers::pi;
  return (pi / 2.0) * s * std::exp(-pi * s * s / 4.0);
}

double wigner_surmise_gue(double s) {
  const double pi = std::numbers::pi;
  return (32.0 / (pi * pi)) * s * s * std::exp(-4.0 * s * s / pi);
}

double wigner_surmise_gse(double s) {
  const double pi = std::numbers::pi;
  const double c = 262144.0 / (729.0 * pi * pi * pi);  // 2^18 / (3^6 pi^3)
  return c * std::pow(s, 4) * std::exp(-64.0 * s * s / (9.0 * pi));
}

double poisson_spacing_density(double s) { return std::exp(-s); }

namespace {

constexpr double kSigma2Stride = 0.5;

double sigma2_single(std::span<const double> values, double window) {
  const double span = values.back() - values.front();
  if (window <= 0.0) throw std::invalid_argument("number_variance: window must be positive");
  if (window >= span) {
    throw std::invalid_argument("number_variance: window exceeds the spectrum span");
  }
  const double start = values.front();
  const auto n_windows =
      static_cast<std::size_t>(std::floor((span - window) / kSigma2Stride)) + 1;
  // Two-pointer sweep; counts are exact integers.
  std::size_t lo = 0, hi = 0;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t w = 0; w < n_windows; ++w) {
    const double left = start + static_cast<double>(w) * kSigma2Stride;
    const double right = left + window;
    while (lo < values.size() && values[lo] < left) ++lo;
    if (hi < lo) hi = lo;
    while (hi < values.size() && values[hi] < right) ++hi;
    const auto count = static_cast<double>(hi - lo);
    sum += count;
    sum_sq += count * count;
  }
  const double mean = sum / static_cast<double>(n_windows);
  return sum_sq / static_cast<double>(n_windows) - mean * mean;
}

}  // namespace

Sigma2Curve number_variance(const UnfoldedSpectrum& u, std::span<const double> window_lengths) {
  if (u.values.size() < 4) throw std::invalid_argument("number_variance: spectrum too small");
  Sigma2Curve curve;
  curve.mode = Sigma2Averaging::SingleSpectrum;
  curve.n_realizations = 1;
  for (const double k : window_lengths) {
    curve.window_lengths.push_back(k);
    curve.values.push_back(sigma2_single(u.values, k));
    curve.std_errors.push_back(0.0);
  }
  return curve;
}

Sigma2Curve number_variance_ensemble(std::span<const UnfoldedSpectrum> spectra,
                                     std::span<const double> window_lengths) {
  if (spectra.empty()) throw std::invalid_argument("number_variance_ensemble: no spectra");
  Sigma2Curve curve;
  curve.mode = Sigma2Averaging::EnsembleMean;
  curve.n_realizations = static_cast<int>(spectra.size());
  std::vector<double> per_realization(spectra.size());
  for (const double k : window_lengths) {
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      per_realization[i] = sigma2_single(spectra[i].values, k);
    }
    const auto ms = mean_stderr(per_realization);
    curve.window_lengths.push_back(k);
    curve.values.push_back(ms.mean);
    curve.std_errors.push_back(ms.std_error);
  }
  return curve;
}

std::vector<double> log_time_grid(double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) {
    throw std::invalid_argument("log_time_grid: need 0 < t_min < t_max and >= 2 points");
  }
  std::vector<double> grid(points);
  const double log_min = std::log(t_min);
  const double step = (std::log(t_max) - log_min) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) grid[i] = std::exp(log_min + step * i);
  return grid;
}

namespace {

SffCurve filtered_form_factor(std::span<const double> eigs, double alpha,
                              std::span<const double> times, double beta,
                              HDenominator denominator) {
  if (eigs.empty()) throw std::invalid_argument("spectral form factor: empty spectrum");
  if (beta < 0.0) throw std::invalid_argument("spectral form factor: beta must be >= 0");
  if (alpha < 0.0) throw std::invalid_argument("spectral form factor: alpha must be >= 0");

  std::vector<double> weights(eigs.size());
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < eigs.size(); ++j) {
    weights[j] = std::exp(-alpha * eigs[j] * eigs[j] - beta * eigs[j]);
    weight_sum += weights[j];
  }
  double denom_root = weight_sum;  // Y(alpha, t=0, beta)
  if (denominator == HDenominator::AlphaZero) {
    denom_root = 0.0;
    for (const double e : eigs) denom_root += std::exp(-beta * e);  // Z(0, beta)
  }
  const double denom = denom_root * denom_root;

  SffCurve curve;
  curve.beta = beta;
  curve.times.assign(times.begin(), times.end());
  curve.values.resize(times.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const double t = times[ti];
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < eigs.size(); ++j) {
      const double angle = t * eigs[j];
      re += weights[j] * std::cos(angle);
      im -= weights[j] * std::sin(angle);
    }
    curve.values[ti] = (re * re + im * im) / denom;
  }
  return curve;
}

}  // namespace

SffCurve sff_g(std::span<const double> eigs, std::span<const double> times, double beta) {
  return filtered_form_factor(eigs, 0.0, times, beta, HDenominator::SameAlpha);
}

SffCurve sff_h(std::span<const double> eigs, double alpha, std::span<const double> times,
               double beta, HDenominator denominator) {
  SffCurve curve = filtered_form_factor(eigs, alpha, times, beta, denominator);
  curve.alpha = alpha;
  return curve;
}

double ramp_onset(const SffCurve& curve) {
  const auto n = curve.values.size();
  if (n < 3) throw std::invalid_argument("ramp_onset: curve too short");
  // 5-point moving average (window clipped at the boundaries).
  std::vector<double> smoothed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = (i >= 2) ? i - 2 : 0;
    const std::size_t hi = std::min(i + 2, n - 1);
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += curve.values[j];
    smoothed[i] = acc / static_cast<double>(hi - lo + 1);
  }
  const std::size_t smooth_min =
      static_cast<std::size_t>(std::min_element(smoothed.begin(), smoothed.end()) -
                               smoothed.begin());
  if (smooth_min == 0 || smooth_min == n - 1) {
    throw DataError("ramp_onset: curve has no interior minimum (no visible dip)");
  }
  // Refine to the raw minimum inside the winning smoothing window.
  const std::size_t lo = (smooth_min >= 2) ? smooth_min - 2 : 0;
  const std::size_t hi = std::min(smooth_min + 2, n - 1);
  std::size_t best = lo;
  for (std::size_t j = lo; j <= hi; ++j) {
    if (curve.values[j] < curve.values[best]) best = j;
  }
  return curve.times[best];
}

MeanStderr mean_stderr(std::span<const double> values) {
  MeanStderr out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (const double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (const double v : values) ss += (v - out.mean) * (v - out.mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

}  // namespace syk
