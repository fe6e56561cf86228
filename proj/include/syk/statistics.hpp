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
#include <span>
#include <vector>

namespace syk {

// ---------------------------------------------------------------------------
// Gap ratios

struct GapRatioStats {
  std::vector<double> ratios;  // each in (0, 1]
  double mean = 0.0;
};

/// Neighboring gap ratios r_i = min(s_i, s_{i+1}) / max(s_i, s_{i+1}) with
/// s_i = E_{i+1} - E_i, on the list of DISTINCT eigenvalues (degenerate
/// copies must have been removed first, so all spacings are nonzero).
GapRatioStats gap_ratios(std::span<const double> distinct_sorted);

/// The Poisson reference <r> = 2 ln 2 - 1.
double poisson_mean_r();

// ---------------------------------------------------------------------------
// Unfolding

struct UnfoldedSpectrum {
  std::vector<double> values;  // strictly increasing, mean spacing ~ 1
  double mean_spacing = 0.0;
  int fit_order = 10;
  double trim_fraction = 0.05;
};

/// Polynomial unfolding: drop the lowest and highest `trim` fraction of the
/// sorted spectrum, least-squares fit a degree `fit_order` polynomial to the
/// spectral staircase (rank + 1/2 against energy), and map each retained
/// eigenvalue through the fit. Throws DataError if the fitted density goes
/// non-positive inside the retained window.
UnfoldedSpectrum unfold(std::span<const double> sorted_eigs, int fit_order = 10,
                        double trim = 0.05);

struct Histogram {
  std::vector<double> bin_left;
  std::vector<double> bin_right;
  std::vector<double> density;
};

/// Density-normalized histogram of nearest-neighbor spacings; integrates to 1.
Histogram spacing_histogram(const UnfoldedSpectrum& u, double bin_width);

// Wigner-surmise densities, used as analytic references for P(s).
double wigner_surmise_goe(double s);
double wigner_surmise_gue(double s);
double wigner_surmise_gse(double s);
double poisson_spacing_density(double s);

// ---------------------------------------------------------------------------
// Number variance

enum class Sigma2Averaging { SingleSpectrum, EnsembleMean };

struct Sigma2Curve {
  std::vector<double> window_lengths;
  std::vector<double> values;
  std::vector<double> std_errors;   // zero in SingleSpectrum mode
  Sigma2Averaging mode = Sigma2Averaging::SingleSpectrum;
  int n_realizations = 1;
};

/// Number variance Sigma^2(K) = <n^2(E,K)> - <n(E,K)>^2 where n(E,K) counts
/// unfolded levels in [E, E+K) and the average runs over window positions
/// with stride 0.5 (overlapping windows).
Sigma2Curve number_variance(const UnfoldedSpectrum& u,
                            std::span<const double> window_lengths);

/// Ensemble mode: Sigma^2 is computed per realization and averaged.
Sigma2Curve number_variance_ensemble(std::span<const UnfoldedSpectrum> spectra,
                                     std::span<const double> window_lengths);

// ---------------------------------------------------------------------------
// Spectral form factors

struct SffCurve {
  std::vector<double> times;
  std::vector<double> values;
  double beta = 0.0;
  std::optional<double> alpha;  // set for filtered curves
  int n_realizations = 1;
};

/// Log-spaced time grid (the default covers slope, dip, ramp and plateau for
/// Hilbert-space dimensions up to 2^14).
std::vector<double> log_time_grid(double t_min = 1e-1, double t_max = 1e6, int points = 400);

/// Which denominator the filtered form factor h uses. The defining formula
/// writes Y(0,beta)^2; the default reads that as Y at the same alpha and
/// t = 0 (so h(alpha,0,beta) = 1), the alternative as Y at alpha = 0, which
/// equals Z(0,beta)^2.
enum class HDenominator { SameAlpha, AlphaZero };

/// g(t,beta) = |Z(t,beta)|^2 / Z(0,beta)^2 with Z = sum_j exp(-(beta+it) e_j)
/// over the full spectrum including degenerate copies.
SffCurve sff_g(std::span<const double> eigs, std::span<const double> times, double beta);

/// h(alpha,t,beta) = |Y(alpha,t,beta)|^2 / Y(0,beta)^2 with
/// Y = sum_j exp(-alpha e_j^2 - (beta+it) e_j). alpha = 0 reduces to g.
SffCurve sff_h(std::span<const double> eigs, double alpha, std::span<const double> times,
               double beta, HDenominator denominator = HDenominator::SameAlpha);

/// Dip time of an ensemble-averaged curve: global minimum of the 5-point
/// moving average over log-spaced samples, refined to the raw minimum inside
/// that smoothing window. Throws DataError when the curve has no interior
/// minimum (monotone curve, no dip).
double ramp_onset(const SffCurve& curve);

// ---------------------------------------------------------------------------
// Small helpers shared by the aggregation layer

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t count = 0;
};

MeanStderr mean_stderr(std::span<const double> values);

}  // namespace syk
