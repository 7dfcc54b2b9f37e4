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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "annealbench/analysis.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {

TtsResult tts(double p_s, double effort, double N, double N_max, double p_d) {
  if (!(p_s >= 0.0 && p_s <= 1.0)) throw ParameterError("p_S must lie in [0, 1]");
  if (!(p_d > 0.0 && p_d < 1.0)) throw ParameterError("p_d must lie in (0, 1)");
  if (!(effort > 0.0) || !std::isfinite(effort)) throw ParameterError("effort must be positive");
  if (!(N > 0.0 && N <= N_max)) throw ParameterError("N must lie in (0, N_max]");
  TtsResult r;
  if (p_s == 0.0) {
    r.kind = TtsKind::infinite;
    r.value = std::numeric_limits<double>::infinity();
    r.repetitions = std::numeric_limits<double>::infinity();
    return r;
  }
  if (p_s == 1.0) {
    r.kind = TtsKind::degenerate;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.repetitions = 0.0;
    return r;
  }
  r.repetitions = std::log1p(-p_d) / std::log1p(-p_s);
  r.value = effort * r.repetitions * (N / N_max);
  return r;
}

DeviceTimings dw2kq_timings() { return {6987.80, 0.0, 124.98}; }

double wallclock_tts(double gauges, const DeviceTimings& t, double t_f, double R, double N, double N_max) {
  if (!(N > 0.0 && N <= N_max)) throw ParameterError("N must lie in (0, N_max]");
  if (gauges < 0.0 || R < 0.0 || t_f < 0.0 || t.t_program < 0.0 || t.t_initial < 0.0 || t.t_readout < 0.0)
    throw ParameterError("wall-clock inputs must be non-negative");
  const double copies = std::floor(N_max / N);
  return gauges * t.t_program + (t_f + t.t_initial + t.t_readout) * R / copies;
}

namespace statistics {

double mean(std::span<const double> x) {
  if (x.empty()) throw ParameterError("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

double stddev(std::span<const double> x) {
  if (x.size() < 2) throw ParameterError("standard deviation needs two samples");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace statistics

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw ParameterError("quantile of empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("quantile level must lie in [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  for (double x : v)
    if (std::isnan(x)) throw ParameterError("quantile input contains NaN");
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || v[lo] == v[hi]) return v[lo];
  if (std::isinf(v[hi])) return v[hi];
  return v[lo] + frac * (v[hi] - v[lo]);
}

double quantile_tts(std::span<const double> tts_values, double q) {
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantile level must lie in (0, 1)");
  for (double t : tts_values)
    if (!(t > 0.0)) throw ParameterError("TTS values must be positive");
  return std::log(quantile(tts_values, q));
}

QuantileCurve quantile_curve(std::span<const double> effort, const std::vector<std::vector<double>>& tts, double q) {
  if (effort.size() != tts.size()) throw ParameterError("one TTS row per effort value required");
  QuantileCurve c;
  c.q = q;
  for (std::size_t e = 0; e < effort.size(); ++e) {
    c.effort.push_back(effort[e]);
    c.ln_tts.push_back(quantile_tts(tts[e], q));
  }
  return c;
}

double quantile_of_ratios(const std::map<std::string, double>& solver, const std::map<std::string, double>& baseline,
                          double q) {
  if (solver.size() != baseline.size()) throw ParameterError("quantile-of-ratios: instance sets differ in size");
  std::vector<double> ratios;
  for (const auto& [key, value] : solver) {
    auto it = baseline.find(key);
    if (it == baseline.end()) throw ParameterError("quantile-of-ratios: no baseline for instance " + key);
    if (!(it->second > 0.0) || !(value > 0.0)) throw ParameterError("quantile-of-ratios: TTS must be positive");
    ratios.push_back(value / it->second);
  }
  return quantile(ratios, q);
}

OverlapResult overlap_fraction(std::span<const MeanSigma> a, std::span<const MeanSigma> b, int n_boot,
                               std::uint64_t seed, CiMethod method) {
  if (a.size() != b.size()) throw ParameterError("overlap: solvers cover different instance counts");
  if (a.size() < 2) throw ParameterError("overlap: at least two instances required");
  if (n_boot < 1) throw ParameterError("overlap: n_boot must be positive");
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k)
    for (const MeanSigma& m : {a[k], b[k]})
      if (!std::isfinite(m.mean) || !std::isfinite(m.sigma) || m.sigma < 0.0)
        throw ParameterError("overlap: means must be finite and sigmas finite and non-negative");

  std::vector<double> fbar(static_cast<std::size_t>(n_boot), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> raw(fbar.size(), std::numeric_limits<double>::quiet_NaN());
#pragma omp parallel for schedule(static)
  for (int bidx = 0; bidx < n_boot; ++bidx) {
    const auto idx = resample_indices(n, seed, bidx);
    Rng rng(stream_seed(~seed, static_cast<std::uint64_t>(bidx)));
    std::array<std::vector<double>, 4> draws;  // A1, A2, B1, B2
    for (auto& d : draws) d.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const MeanSigma& ai = a[idx[k]];
      const MeanSigma& bi = b[idx[k]];
      draws[0][k] = ai.mean + ai.sigma * rng.normal();
      draws[1][k] = ai.mean + ai.sigma * rng.normal();
      draws[2][k] = bi.mean + bi.sigma * rng.normal();
      draws[3][k] = bi.mean + bi.sigma * rng.normal();
    }
    std::array<std::vector<bool>, 4> below;
    for (std::size_t d = 0; d < 4; ++d) {
      const double med = quantile(draws[d], 0.5);
      below[d].resize(n);
      for (std::size_t k = 0; k < n; ++k) below[d][k] = draws[d][k] < med;
    }
    auto f = [&](std::size_t x, std::size_t y) {
      std::size_t sx = 0, both = 0;
      for (std::size_t k = 0; k < n; ++k) {
        sx += below[x][k];
        both += below[x][k] && below[y][k];
      }
      return sx == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(both) / static_cast<double>(sx);
    };
    const double f_ab = f(0, 3), f_aa = f(0, 1), f_bb = f(2, 3);
    raw[static_cast<std::size_t>(bidx)] = f_ab;
    if (f_aa > 0.0 && f_bb > 0.0) fbar[static_cast<std::size_t>(bidx)] = f_ab / std::sqrt(f_aa * f_bb);
  }

  std::vector<double> valid, valid_raw;
  for (std::size_t k = 0; k < fbar.size(); ++k) {
    if (std::isfinite(fbar[k])) valid.push_back(fbar[k]);
    if (std::isfinite(raw[k])) valid_raw.push_back(raw[k]);
  }
  if (valid.empty()) throw NumericalError("overlap: every resample had an empty below-median set");
  OverlapResult r;
  r.valid_resamples = static_cast<int>(valid.size());
  r.f_bar = statistics::mean(valid);
  r.raw = valid_raw.empty() ? 0.0 : statistics::mean(valid_raw);
  r.ci = valid.size() >= 2 ? confidence_interval(valid, r.f_bar, method) : Interval{r.f_bar, r.f_bar};
  return r;
}

}  // namespace annealbench
