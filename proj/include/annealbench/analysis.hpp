// Copyright 2026 The annealbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace annealbench {

// ---------------------------------------------------------------------------
// Time to solution

inline constexpr double kDefaultTargetProbability = 0.99;

enum class TtsKind { finite, infinite, degenerate };

struct TtsResult {
  TtsKind kind = TtsKind::finite;
  // +inf when p_S = 0, NaN when p_S = 1.
  double value = 0.0;
  // ln(1 - p_d) / ln(1 - p_S), not rounded up.
  double repetitions = 0.0;

  bool finite() const { return kind == TtsKind::finite; }
};

// effort * R * N / N_max. Throws ParameterError for p_S outside [0, 1],
// p_d outside (0, 1), non-positive effort, or N outside (0, N_max].
TtsResult tts(double p_s, double effort, double N, double N_max, double p_d = kDefaultTargetProbability);

// Device timing constants, microseconds.
struct DeviceTimings {
  double t_program = 0.0;
  double t_initial = 0.0;
  double t_readout = 0.0;
};
DeviceTimings dw2kq_timings();

// G t_program + (t_f + t_initial + t_readout) R / floor(N_max / N).
double wallclock_tts(double gauges, const DeviceTimings& timings, double t_f, double R, double N, double N_max);

// ---------------------------------------------------------------------------
// Statistics

namespace statistics {
double mean(std::span<const double> x);
double median(std::span<const double> x);
double stddev(std::span<const double> x);  // n - 1 denominator
}  // namespace statistics

// Type-7 sample quantile (linear interpolation between order statistics).
// +inf values sort above every finite value. Throws ParameterError for empty
// input, NaN entries, or q outside [0, 1].
double quantile(std::span<const double> values, double q);

// ln of the q-quantile of per-instance TTS values at one effort; +inf if the
// quantile falls among instances that never succeeded.
double quantile_tts(std::span<const double> tts_values, double q);

struct QuantileCurve {
  double q = 0.5;
  std::vector<double> effort;
  std::vector<double> ln_tts;
};

// tts[e][i] is instance i's TTS at effort[e].
QuantileCurve quantile_curve(std::span<const double> effort, const std::vector<std::vector<double>>& tts, double q);

// q-quantile of solver/baseline ratios, paired by instance key. Throws
// ParameterError if the key sets differ.
double quantile_of_ratios(const std::map<std::string, double>& solver, const std::map<std::string, double>& baseline,
                          double q);

// ---------------------------------------------------------------------------
// Bootstrap

enum class CiMethod { percentile, two_sigma };

std::string to_string(CiMethod m);
CiMethod ci_method_from_string(const std::string& s);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct BootstrapResult {
  double estimate = 0.0;  // statistic of the original sample
  Interval ci;
  double std_error = 0.0;
  CiMethod method = CiMethod::percentile;
  std::vector<double> replicates;
};

using Statistic = std::function<double(std::span<const double>)>;

// Resample b draws indices from Rng(stream_seed(seed, b)), so results do not
// depend on the number of threads. Throws ParameterError for fewer than two
// samples or n_boot < 1.
BootstrapResult bootstrap(std::span<const double> samples, const Statistic& statistic, int n_boot = 1000,
                          std::uint64_t seed = 0, CiMethod method = CiMethod::percentile);

// n indices drawn with replacement for resample b.
std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, int b);

// Central 95% interval of a set of replicates around `estimate`.
Interval confidence_interval(std::span<const double> replicates, double estimate, CiMethod method);

// ---------------------------------------------------------------------------
// Overlap of hard instances

struct MeanSigma {
  double mean = 0.0;
  double sigma = 0.0;
};

struct OverlapResult {
  double f_bar = 0.0;    // mean over resamples of the normalized overlap
  Interval ci;
  double raw = 0.0;      // mean un-normalized f_{A1,B2}
  int valid_resamples = 0;
};

// Per resample: instances drawn with replacement, two noisy realizations
// mean + sigma * N(0, 1) per instance and solver, below-median sets S, and
// f_{X,Y} = |S_X & S_Y| / |S_X|. Returns f_{A1,B2} / sqrt(f_{A1,A2} f_{B1,B2}).
// Throws ParameterError if the inputs differ in length or hold fewer than two
// instances.
OverlapResult overlap_fraction(std::span<const MeanSigma> a, std::span<const MeanSigma> b, int n_boot = 1000,
                               std::uint64_t seed = 0, CiMethod method = CiMethod::percentile);

// ---------------------------------------------------------------------------
// Fits

enum class FitFamily { quadratic_log, hfs_form, power_law, scaling_exp, scaling_poly, scaling_hybrid };

std::string to_string(FitFamily f);
FitFamily fit_family_from_string(const std::string& s);

struct FitParam {
  std::string name;
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct FitPoint {
  double x = 0.0;
  double y = 0.0;
};

struct FitResult {
  FitFamily family = FitFamily::quadratic_log;
  std::vector<FitParam> params;
  // Quantities computed from the parameters, e.g. t_star, tts_star.
  std::map<std::string, double> derived;
  std::vector<std::string> diagnostics;
  double residual_norm = 0.0;
  CiMethod ci_method = CiMethod::percentile;
  // Quadratic family: false when the fitted curvature is not positive.
  bool convex = true;

  // Throws ParameterError for an unknown name.
  const FitParam& param(const std::string& name) const;
  bool operator==(const FitResult&) const;
};

struct FitOptions {
  int n_boot = 1000;
  std::uint64_t seed = 0;
  CiMethod ci_method = CiMethod::percentile;
  // Pre-computed resamples of the input points (e.g. from gauge or instance
  // bootstraps). When given they are fitted instead of residual resamples.
  std::vector<std::vector<FitPoint>> resamples;
};

// y = a (x - b)^2 + c on (ln effort, ln TTS). derived: t_star = e^b,
// tts_star = e^c when convex. Throws ParameterError on fewer than 4 points.
FitResult fit_quadratic_log(std::span<const FitPoint> points, const FitOptions& options = {});

// y = a x^-3 + b x + c - 4 (a^3 b)^(1/4) / 3^(3/4) on (ln n_trees, ln TTS).
// Throws ParameterError on fewer than 5 points or x <= 0, FitError when the
// damped least squares does not converge.
FitResult fit_hfs_form(std::span<const FitPoint> points, const FitOptions& options = {});

// ln p_S = a ln t_f + b on (t_f, p_S). derived: tts_exponent = 1 - a.
// Throws ParameterError on p_S <= 0 or t_f <= 0.
FitResult fit_power_law(std::span<const FitPoint> points, const FitOptions& options = {});

// On (L, ln TTS*): exp: ln y = ln a + b L; poly: ln y = ln a + b ln L;
// hybrid: ln y = a + b ln L + c L. Throws ParameterError with fewer than
// (parameter count + 1) points.
FitResult fit_scaling(std::span<const FitPoint> points, FitFamily family, const FitOptions& options = {});

// Evaluate a fitted model at x.
double evaluate_fit(const FitResult& fit, double x);

}  // namespace annealbench
