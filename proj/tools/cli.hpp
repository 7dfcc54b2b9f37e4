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

// Batch experiment driver behind the annealbench executable.
//
// Layout of an output directory:
//   instances/<class>_L<L>_<index>.json   manifest_gen.json
//   results/<instance>__<solver>_b<beta>_s<sweeps>.json   manifest_run.json
//   curves/*.csv  fits/*.json   manifest_fit.json
//   report/report.json  report/optimum_fits.csv  report/scaling_fits.csv

#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "annealbench/analysis.hpp"
#include "annealbench/instance.hpp"
#include "annealbench/io.hpp"
#include "annealbench/solvers.hpp"

namespace annealbench::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericalError = 3 };

struct InstanceSpec {
  InstanceClass cls = InstanceClass::logical;
  double alpha = kLogicalAlpha;
  double p = kGadgetFraction;
  std::vector<int> L;
  int count = 1;
  std::uint64_t seed = 0;
  // Full-device fault mask; sizes below its side use the lower-right block.
  std::optional<std::filesystem::path> fault_mask;
};

struct SolverGrid {
  std::vector<SolverKind> kinds;
  std::vector<double> betas;
  std::vector<long> sweeps;
  std::string schedule = "dw2x-like";
  int reads = 1000;   // per gauge
  int gauges = 1;
  // reads * sweeps per gauge may not exceed this; 0 disables the rule.
  double budget = 0.0;
  int sqa_slices = kDefaultSqaSlices;
  std::uint64_t seed = 0;
};

struct AnalysisSpec {
  std::vector<double> quantiles{0.25, 0.5, 0.75};
  double p_d = kDefaultTargetProbability;
  std::vector<FitFamily> families{FitFamily::quadratic_log};
  int n_boot = 200;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  InstanceSpec instances;
  SolverGrid solvers;
  AnalysisSpec analysis;
  std::filesystem::path output_dir;
  // sha256 of the canonical JSON serialization.
  std::string hash;
};

// Relative paths resolve against `base`. Throws DataError on malformed or
// inconsistent configs.
ExperimentConfig config_from_json(const Json& j, const std::filesystem::path& base);
// Throws DataError on unreadable or malformed JSON.
Json load_json(const std::filesystem::path& path);
ExperimentConfig load_config(const std::filesystem::path& path);

// ANNEALBENCH_WORKERS, or 0 (runtime default) when unset. Throws
// ParameterError on a non-numeric or negative value.
int workers_from_env();

// Reads per gauge after the effort budget rule, never below one.
int budgeted_reads(int reads, long sweeps, double budget);

// The lower-right L x L block of a larger topology, relabelled.
ChimeraTopology subgraph(const ChimeraTopology& full, int L);

struct Failure {
  std::string task;
  std::string error;
};

struct StageSummary {
  int written = 0;
  int skipped = 0;
  std::vector<Failure> failures;
  std::filesystem::path manifest;
};

StageSummary cmd_gen(const ExperimentConfig& cfg);
// Tasks already present with a matching config hash are skipped, so an
// interrupted run resumes where it stopped.
StageSummary cmd_run(const ExperimentConfig& cfg, int workers);
StageSummary cmd_fit(const ExperimentConfig& cfg);
// Throws DataError when there are no fits to report on.
StageSummary cmd_report(const ExperimentConfig& cfg);

struct ExactOptions {
  std::optional<std::filesystem::path> instance;  // gadget when empty
  std::string schedule = "dw2kq-like";             // builtin name or CSV path
  int points = 200;
  int levels = 4;
  std::vector<double> t_f_us;
  int steps = 2000;
  int cap = kDefaultDenseCap;
  std::filesystem::path output_dir;
};

// spectrum.csv, min_gap.json and, given t_f values, evolution.csv.
StageSummary cmd_exact(const ExactOptions& opt);

struct VerifyReport {
  int checked = 0;
  std::vector<Failure> failures;
};

// Certificate, planted energy, brute force (small instances) and gauge
// energy invariance for every instance file under `dir`.
VerifyReport cmd_verify(const std::filesystem::path& dir, std::uint64_t seed = 0);

// Maps an exception to the documented exit code.
int exit_code(std::exception_ptr e);

}  // namespace annealbench::cli
