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

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annealbench/instance.hpp"
#include "annealbench/schedule.hpp"

namespace annealbench {

enum class SolverKind { SA, SAC, SVMC, SQA };

std::string to_string(SolverKind kind);
// Accepts "SA", "SAC", "SVMC", "SQA" in any case.
SolverKind solver_kind_from_string(const std::string& s);

inline constexpr int kDefaultSqaSlices = 64;
inline constexpr int kMaxSqaSlices = 256;

struct SolverConfig {
  SolverKind kind = SolverKind::SA;
  long n_sweeps = 1000;
  // SA/SAC: scale of beta(s) = beta * B(s). SVMC/SQA: fixed inverse
  // temperature in 1/GHz. Units where max |J| = 1 in both cases.
  double beta = presets::kSaBetaLogical;
  Schedule schedule = builtin_schedule("dw2x-like");
  int replicas = 1;
  std::uint64_t seed = 0;
  // Power of two, at most 256.
  int sqa_slices = kDefaultSqaSlices;
  // Energy that counts as success; defaults to reference_ground_energy().
  std::optional<Thirds> ground_energy;
};

// Throws ParameterError on n_sweeps < 1, replicas < 1, non-positive beta or an
// unsupported slice count.
void validate(const SolverConfig& cfg);

struct AnnealRecord {
  int replica = 0;
  SpinState final_state;
  Thirds energy;
  bool success = false;
  std::uint64_t seed_used = 0;

  bool operator==(const AnnealRecord&) const = default;
};

struct RunOptions {
  // OpenMP threads for the replica loop; 0 uses the runtime default.
  int threads = 0;
};

// Replica r draws from Rng(stream_seed(cfg.seed, r)); records come back
// ordered by replica index regardless of thread count.
std::vector<AnnealRecord> run_sa(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt = {});
std::vector<AnnealRecord> run_sac(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt = {});
std::vector<AnnealRecord> run_svmc(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt = {});
std::vector<AnnealRecord> run_sqa(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt = {});
// Dispatches on cfg.kind.
std::vector<AnnealRecord> run(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt = {});

// Straightforward single-threaded versions of the kernels above. They consume
// random numbers in the same order and produce identical records; kept as the
// baseline for tests and benchmarks.
namespace reference {
std::vector<AnnealRecord> run_sa(const IsingInstance& inst, const SolverConfig& cfg);
std::vector<AnnealRecord> run_sac(const IsingInstance& inst, const SolverConfig& cfg);
std::vector<AnnealRecord> run_svmc(const IsingInstance& inst, const SolverConfig& cfg);
std::vector<AnnealRecord> run_sqa(const IsingInstance& inst, const SolverConfig& cfg);
std::vector<AnnealRecord> run(const IsingInstance& inst, const SolverConfig& cfg);
}  // namespace reference

// Spin updates per nanosecond of the cost model.
double updates_per_ns(SolverKind kind);

// 8 L^2 * n_sweeps * runs / f_kind. Throws ParameterError on non-positive
// arguments.
std::chrono::duration<double, std::nano> model_time(SolverKind kind, int L, long n_sweeps, long runs);

struct SuccessEstimate {
  double p_s = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  long successes = 0;
  long total = 0;
};

// Success fraction with a 95% percentile bootstrap interval. Throws
// ParameterError on an empty record list.
SuccessEstimate estimate_ps(std::span<const AnnealRecord> records, int n_boot = 1000, std::uint64_t seed = 0);

}  // namespace annealbench
