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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "annealbench/errors.hpp"
#include "annealbench/io.hpp"
#include "cli.hpp"

namespace annealbench::cli {
namespace {

namespace fs = std::filesystem;

fs::path fresh(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("annealbench_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Json small_config(const std::string& out) {
  Json j = Json::parse(R"({
    "instances": {"class": "hardware", "L": [2, 3], "count": 3, "seed": 5},
    "solvers": {"kinds": ["SA"], "beta": [0.396], "sweeps": [1, 2, 4, 8, 16], "reads": 50, "seed": 2},
    "analysis": {"quantiles": [0.5], "families": ["quadratic_log", "power_law"], "n_boot": 20}
  })");
  j["output_dir"] = out;
  return j;
}

TEST(Config, DefaultsAndHash) {
  const auto cfg = config_from_json(Json::object(), "/base");
  EXPECT_EQ(cfg.instances.cls, InstanceClass::logical);
  EXPECT_EQ(cfg.instances.L, std::vector<int>{4});
  EXPECT_EQ(cfg.solvers.kinds, std::vector<SolverKind>{SolverKind::SA});
  EXPECT_EQ(cfg.output_dir, fs::path("/base/annealbench_out"));
  EXPECT_EQ(cfg.hash, sha256_hex("{}"));
  // Key order does not change the hash.
  EXPECT_EQ(config_from_json(Json::parse(R"({"a":1,"b":2})"), "/").hash,
            config_from_json(Json::parse(R"({"b":2,"a":1})"), "/").hash);
}

TEST(Config, InvalidInputsAreDataErrors) {
  for (const char* text : {R"([1,2])", R"({"instances":{"class":"weird"}})", R"({"instances":{"L":[0]}})",
                           R"({"instances":{"L":[]}})", R"({"solvers":{"kinds":["QMC"]}})",
                           R"({"solvers":{"beta":[-1]}})", R"({"solvers":{"sweeps":[0]}})",
                           R"({"solvers":{"schedule":"nope"}})", R"({"analysis":{"quantiles":[1.5]}})",
                           R"({"instances":{"class":"gadget","L":[2]}})", R"({"instances":{"count":"x"}})",
                           R"({"instances":{"fault_mask":"missing.json"}})"})
    EXPECT_THROW(config_from_json(Json::parse(text), "/tmp"), DataError) << text;
}

TEST(Budget, ReadsCapped) {
  EXPECT_EQ(budgeted_reads(1000, 100, 0.0), 1000);
  EXPECT_EQ(budgeted_reads(1000, 100, 5e4), 500);
  EXPECT_EQ(budgeted_reads(1000, 100, 1e9), 1000);
  EXPECT_EQ(budgeted_reads(1000, 100, 10.0), 1);
}

TEST(Workers, Environment) {
  ::unsetenv("ANNEALBENCH_WORKERS");
  EXPECT_EQ(workers_from_env(), 0);
  ::setenv("ANNEALBENCH_WORKERS", "3", 1);
  EXPECT_EQ(workers_from_env(), 3);
  ::setenv("ANNEALBENCH_WORKERS", "three", 1);
  EXPECT_THROW(workers_from_env(), ParameterError);
  ::unsetenv("ANNEALBENCH_WORKERS");
}

TEST(Subgraph, LowerRightBlock) {
  // Qubit 8 * (3 * 4 + 3) = 120 is in the last cell of a 4 x 4 grid.
  const std::vector<int> fq{0, 120};
  const auto full = ChimeraTopology::build(4, fq);
  const auto sub = subgraph(full, 2);
  EXPECT_EQ(sub.side(), 2);
  EXPECT_EQ(sub.faulty_qubits(), std::vector<int>{24});
  EXPECT_THROW(subgraph(full, 5), ParameterError);
}

TEST(ExitCodes, Mapping) {
  auto code = [](auto e) { return exit_code(std::make_exception_ptr(e)); };
  EXPECT_EQ(code(ParameterError("x")), kUsage);
  EXPECT_EQ(code(DataError("x")), kDataError);
  EXPECT_EQ(code(GenerationError("x", 1)), kDataError);
  EXPECT_EQ(code(NumericalError("x")), kNumericalError);
  EXPECT_EQ(code(CapabilityError("x")), kNumericalError);
}

TEST(Pipeline, GenRunFitReportAndResume) {
  const auto dir = fresh("pipeline");
  const auto cfg = config_from_json(small_config((dir / "out").string()), dir);

  EXPECT_THROW(cmd_run(cfg, 1), DataError);
  const auto gen = cmd_gen(cfg);
  EXPECT_EQ(gen.written, 6);
  EXPECT_TRUE(gen.failures.empty());
  const auto inst = load_json(dir / "out/instances/hardware_L2_0000.json");
  EXPECT_EQ(inst.at("provenance").at("config_sha256"), cfg.hash);
  EXPECT_EQ(inst.at("provenance").at("version"), version());

  EXPECT_THROW(cmd_fit(cfg), DataError);
  const auto run1 = cmd_run(cfg, 2);
  EXPECT_EQ(run1.written, 30);
  const std::string manifest = read_file(dir / "out/manifest_run.json");
  const auto run2 = cmd_run(cfg, 1);
  EXPECT_EQ(run2.written, 0);
  EXPECT_EQ(run2.skipped, 30);
  EXPECT_EQ(read_file(dir / "out/manifest_run.json"), manifest);

  // An interrupted run: remove one result and resume.
  fs::remove(dir / "out/results/hardware_L3_0001__SA_b0.396_s4.json");
  const auto run3 = cmd_run(cfg, 1);
  EXPECT_EQ(run3.written, 1);
  EXPECT_EQ(read_file(dir / "out/manifest_run.json"), manifest);

  const auto fit = cmd_fit(cfg);
  EXPECT_GT(fit.written, 0);
  EXPECT_TRUE(fs::exists(dir / "out/curves/hardware_L2_SA_b0.396_q0.5.csv"));
  const std::string curve = read_file(dir / "out/curves/hardware_L2_SA_b0.396_q0.5.csv");
  EXPECT_EQ(curve.rfind("# annealbench " + version() + " config_sha256=" + cfg.hash, 0), 0u);

  cmd_report(cfg);
  const auto report = load_json(dir / "out/report/report.json");
  EXPECT_EQ(report.at("provenance").at("config_sha256"), cfg.hash);
  EXPECT_TRUE(fs::exists(dir / "out/report/optimum_fits.csv"));
}

TEST(Pipeline, ManifestsAreDeterministic) {
  const auto a = fresh("det_a"), b = fresh("det_b");
  for (const auto& d : {a, b}) {
    const auto cfg = config_from_json(small_config("out"), d);
    cmd_gen(cfg);
    cmd_run(cfg, d == a ? 1 : 3);
  }
  EXPECT_EQ(read_file(a / "out/manifest_gen.json"), read_file(b / "out/manifest_gen.json"));
  EXPECT_EQ(read_file(a / "out/manifest_run.json"), read_file(b / "out/manifest_run.json"));
}

TEST(Pipeline, ReportWithoutFitsFails) {
  const auto dir = fresh("nofits");
  const auto cfg = config_from_json(small_config("out"), dir);
  EXPECT_THROW(cmd_report(cfg), DataError);
}

TEST(Pipeline, BudgetRuleLimitsReads) {
  const auto dir = fresh("budget");
  auto j = small_config("out");
  j["solvers"]["budget"] = 100;
  j["instances"]["L"] = {2};
  j["instances"]["count"] = 1;
  const auto cfg = config_from_json(j, dir);
  cmd_gen(cfg);
  cmd_run(cfg, 1);
  const auto r = load_json(dir / "out/results/hardware_L2_0000__SA_b0.396_s16.json");
  EXPECT_EQ(r.at("reads_per_gauge"), 6);
  EXPECT_LE(r.at("reads").template get<long>() * 16, 100);
}

TEST(Exact, GadgetOutputs) {
  const auto dir = fresh("exact");
  ExactOptions opt;
  opt.output_dir = dir;
  opt.points = 120;
  opt.t_f_us = {0.001};
  const auto s = cmd_exact(opt);
  EXPECT_EQ(s.written, 3);
  const auto mg = load_json(dir / "min_gap.json");
  EXPECT_GT(mg.at("gap_GHz").template get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(dir / "spectrum.csv"));
  EXPECT_TRUE(fs::exists(dir / "evolution.csv"));
  opt.points = 10;
  EXPECT_THROW(cmd_exact(opt), ParameterError);
}

TEST(Verify, GeneratedInstancesPassTamperedFail) {
  const auto dir = fresh("verify");
  const auto cfg = config_from_json(small_config("out"), dir);
  cmd_gen(cfg);
  auto r = cmd_verify(dir / "out/instances");
  EXPECT_EQ(r.checked, 6);
  EXPECT_TRUE(r.failures.empty());

  auto j = load_json(dir / "out/instances/hardware_L2_0001.json");
  j["couplings"][0][2] = j["couplings"][0][2].template get<int>() + 3;
  write_file(dir / "out/instances/hardware_L2_0001.json", dump(j));
  r = cmd_verify(dir / "out/instances");
  // One file, possibly several reasons.
  ASSERT_FALSE(r.failures.empty());
  for (const auto& f : r.failures) EXPECT_EQ(f.task, "hardware_L2_0001.json");
  EXPECT_THROW(cmd_verify(dir / "nowhere"), DataError);
}

}  // namespace
}  // namespace annealbench::cli
