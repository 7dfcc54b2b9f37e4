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
#include <cmath>

#include "annealbench/analysis.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {

std::string to_string(CiMethod m) { return m == CiMethod::percentile ? "percentile95" : "two_sigma"; }

CiMethod ci_method_from_string(const std::string& s) {
  if (s == "percentile95" || s == "percentile") return CiMethod::percentile;
  if (s == "two_sigma" || s == "2sigma") return CiMethod::two_sigma;
  throw ParameterError("unknown confidence interval method: " + s);
}

std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, int b) {
  Rng rng(stream_seed(seed, static_cast<std::uint64_t>(b)));
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
  return idx;
}

Interval confidence_interval(std::span<const double> replicates, double estimate, CiMethod method) {
  if (replicates.empty()) throw ParameterError("no bootstrap replicates");
  if (method == CiMethod::percentile) return {quantile(replicates, 0.025), quantile(replicates, 0.975)};
  const double se = replicates.size() >= 2 ? statistics::stddev(replicates) : 0.0;
  return {estimate - 2.0 * se, estimate + 2.0 * se};
}

BootstrapResult bootstrap(std::span<const double> samples, const Statistic& statistic, int n_boot,
                          std::uint64_t seed, CiMethod method) {
  if (samples.size() < 2) throw ParameterError("bootstrap needs at least two samples");
  if (n_boot < 1) throw ParameterError("n_boot must be positive");
  BootstrapResult r;
  r.method = method;
  r.estimate = statistic(samples);
  r.replicates.resize(static_cast<std::size_t>(n_boot));
#pragma omp parallel for schedule(static)
  for (int b = 0; b < n_boot; ++b) {
    const auto idx = resample_indices(samples.size(), seed, b);
    std::vector<double> x(samples.size());
    for (std::size_t k = 0; k < idx.size(); ++k) x[k] = samples[idx[k]];
    r.replicates[static_cast<std::size_t>(b)] = statistic(x);
  }
  r.std_error = n_boot >= 2 ? statistics::stddev(r.replicates) : 0.0;
  r.ci = confidence_interval(r.replicates, r.estimate, method);
  return r;
}

}  // namespace annealbench
