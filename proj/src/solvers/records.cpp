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
#include <bit>
#include <cctype>
#include <cmath>

#include "annealbench/analysis.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/solvers.hpp"

namespace annealbench {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::SA: return "SA";
    case SolverKind::SAC: return "SAC";
    case SolverKind::SVMC: return "SVMC";
    case SolverKind::SQA: return "SQA";
  }
  return "SA";
}

SolverKind solver_kind_from_string(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (u == "SA") return SolverKind::SA;
  if (u == "SAC") return SolverKind::SAC;
  if (u == "SVMC") return SolverKind::SVMC;
  if (u == "SQA") return SolverKind::SQA;
  throw ParameterError("unknown solver: " + s);
}

void validate(const SolverConfig& cfg) {
  if (cfg.n_sweeps < 1) throw ParameterError("n_sweeps must be at least 1");
  if (cfg.replicas < 1) throw ParameterError("replicas must be at least 1");
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) throw ParameterError("beta must be positive");
  if (cfg.kind == SolverKind::SQA &&
      (cfg.sqa_slices < 1 || cfg.sqa_slices > kMaxSqaSlices || !std::has_single_bit(static_cast<unsigned>(cfg.sqa_slices))))
    throw ParameterError("sqa_slices must be a power of two in [1, 256], got " + std::to_string(cfg.sqa_slices));
}

std::vector<AnnealRecord> run(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt) {
  switch (cfg.kind) {
    case SolverKind::SA: return run_sa(inst, cfg, opt);
    case SolverKind::SAC: return run_sac(inst, cfg, opt);
    case SolverKind::SVMC: return run_svmc(inst, cfg, opt);
    case SolverKind::SQA: return run_sqa(inst, cfg, opt);
  }
  throw ParameterError("unknown solver kind");
}

namespace reference {
std::vector<AnnealRecord> run(const IsingInstance& inst, const SolverConfig& cfg) {
  switch (cfg.kind) {
    case SolverKind::SA: return reference::run_sa(inst, cfg);
    case SolverKind::SAC: return reference::run_sac(inst, cfg);
    case SolverKind::SVMC: return reference::run_svmc(inst, cfg);
    case SolverKind::SQA: return reference::run_sqa(inst, cfg);
  }
  throw ParameterError("unknown solver kind");
}
}  // namespace reference

double updates_per_ns(SolverKind kind) {
  switch (kind) {
    case SolverKind::SA: return 50.0;
    case SolverKind::SAC: return 25.0;
    case SolverKind::SVMC: return 29.0;
    case SolverKind::SQA: return 5.0;
  }
  throw ParameterError("unknown solver kind");
}

std::chrono::duration<double, std::nano> model_time(SolverKind kind, int L, long n_sweeps, long runs) {
  if (L < 1 || n_sweeps < 1 || runs < 1) throw ParameterError("model_time arguments must be positive");
  const double updates = static_cast<double>(kQubitsPerCell) * L * L * static_cast<double>(n_sweeps) *
                         static_cast<double>(runs);
  return std::chrono::duration<double, std::nano>(updates / updates_per_ns(kind));
}

SuccessEstimate estimate_ps(std::span<const AnnealRecord> records, int n_boot, std::uint64_t seed) {
  if (records.empty()) throw ParameterError("no records to estimate a success probability from");
  std::vector<double> hits;
  hits.reserve(records.size());
  for (const auto& r : records) hits.push_back(r.success ? 1.0 : 0.0);
  const auto boot = bootstrap(hits, statistics::mean, n_boot, seed);
  SuccessEstimate est;
  est.total = static_cast<long>(records.size());
  est.successes = static_cast<long>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.success; }));
  est.p_s = static_cast<double>(est.successes) / static_cast<double>(est.total);
  est.ci_lo = boot.ci.lo;
  est.ci_hi = boot.ci.hi;
  return est;
}

}  // namespace annealbench
