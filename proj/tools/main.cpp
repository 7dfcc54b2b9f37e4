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

#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace cli = annealbench::cli;

namespace {

int report(const char* stage, const cli::StageSummary& s) {
  std::cout << stage << ": " << s.written << " written, " << s.skipped << " skipped, " << s.failures.size()
            << " failed";
  if (!s.manifest.empty()) std::cout << " (" << s.manifest.string() << ")";
  std::cout << "\n";
  for (const auto& f : s.failures) std::cerr << "  " << f.task << ": " << f.error << "\n";
  return s.failures.empty() ? cli::kOk : cli::kDataError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planted-instance annealing benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", annealbench::version());

  std::string config;
  auto* gen = app.add_subcommand("gen", "Generate instances");
  auto* run = app.add_subcommand("run", "Run solvers over the instance set (resumable)");
  auto* fit = app.add_subcommand("fit", "Quantile curves and optimal-effort fits");
  auto* rep = app.add_subcommand("report", "Scaling fits and summary tables");
  for (auto* sub : {gen, run, fit, rep}) sub->add_option("config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

  cli::ExactOptions ex;
  std::string instance;
  auto* exact = app.add_subcommand("exact", "Spectrum, minimum gap and Schrodinger evolution of a small instance");
  exact->add_option("--instance", instance, "Instance file (default: the 8-qubit gadget)")->check(CLI::ExistingFile);
  exact->add_option("--schedule", ex.schedule, "Builtin schedule name or CSV path")->capture_default_str();
  exact->add_option("--points", ex.points, "s-grid points")->capture_default_str();
  exact->add_option("--levels", ex.levels, "Levels per slice")->capture_default_str();
  exact->add_option("--tf", ex.t_f_us, "Anneal times in microseconds for evolution")->delimiter(',');
  exact->add_option("--steps", ex.steps, "Initial RK4 step count")->capture_default_str();
  exact->add_option("--cap", ex.cap, "Largest qubit count accepted")->capture_default_str();
  exact->add_option("-o,--out", ex.output_dir, "Output directory")->required();

  std::string verify_dir;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "Certificate and invariant checks on instance files");
  verify->add_option("dir", verify_dir, "Directory with instance files")->required()->check(CLI::ExistingDirectory);
  verify->add_option("--seed", verify_seed, "Gauge seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*exact) {
      if (!instance.empty()) ex.instance = instance;
      return report("exact", cli::cmd_exact(ex));
    }
    if (*verify) {
      const auto r = cli::cmd_verify(verify_dir, verify_seed);
      std::cout << "verify: " << r.checked << " instances, " << r.failures.size() << " failed\n";
      for (const auto& f : r.failures) std::cerr << "  " << f.task << ": " << f.error << "\n";
      return r.failures.empty() ? cli::kOk : cli::kDataError;
    }
    const auto cfg = cli::load_config(config);
    if (*gen) return report("gen", cli::cmd_gen(cfg));
    if (*run) return report("run", cli::cmd_run(cfg, cli::workers_from_env()));
    if (*fit) return report("fit", cli::cmd_fit(cfg));
    return report("report", cli::cmd_report(cfg));
  } catch (...) {
    const auto e = std::current_exception();
    try {
      std::rethrow_exception(e);
    } catch (const std::exception& x) {
      std::cerr << "error: " << x.what() << "\n";
    } catch (...) {
      std::cerr << "error: unknown failure\n";
    }
    return cli::exit_code(e);
  }
}
