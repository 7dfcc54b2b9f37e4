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

#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "annealbench/errors.hpp"
#include "annealbench/exact.hpp"
#include "annealbench/rng.hpp"

namespace annealbench::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

template <typename T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw DataError(std::string("config field '") + key + "': " + e.what());
  }
}

template <typename T>
std::vector<T> list(const Json& j, const char* key, std::vector<T> fallback = {}) {
  auto v = field(j, key, fallback);
  if (v.empty()) throw DataError(std::string("config list '") + key + "' must not be empty");
  return v;
}

Json provenance(const std::string& config_hash) {
  return {{"config_sha256", config_hash}, {"version", version()}};
}

std::string csv_banner(const std::string& config_hash) {
  return "# annealbench " + version() + " config_sha256=" + config_hash + "\n";
}

Schedule resolve_schedule(const std::string& name_or_path) {
  const auto names = builtin_schedule_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_schedule(name_or_path);
  if (!fs::exists(name_or_path)) throw DataError("unknown schedule '" + name_or_path + "'");
  return schedule_from_csv(fs::path(name_or_path).stem().string(), read_file(name_or_path));
}

std::uint64_t key_seed(const std::string& key) { return std::stoull(sha256_hex(key).substr(0, 16), nullptr, 16); }

}  // namespace

Json load_json(const fs::path& path) {
  const auto text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

namespace {

struct FileEntry {
  std::string path;
  std::string sha256;
};

fs::path write_manifest(const ExperimentConfig& cfg, const std::string& stage, std::vector<FileEntry> files,
                        std::vector<Failure> failures) {
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.task < b.task; });
  Json jf = Json::array(), jx = Json::array();
  for (const auto& f : files) jf.push_back({{"path", f.path}, {"sha256", f.sha256}});
  for (const auto& f : failures) jx.push_back({{"task", f.task}, {"error", f.error}});
  const fs::path path = cfg.output_dir / ("manifest_" + stage + ".json");
  write_file(path, dump({{"stage", stage}, {"provenance", provenance(cfg.hash)}, {"files", jf}, {"failures", jx}}));
  return path;
}

std::vector<std::string> manifest_files(const ExperimentConfig& cfg, const std::string& stage) {
  const fs::path path = cfg.output_dir / ("manifest_" + stage + ".json");
  if (!fs::exists(path)) throw DataError("missing " + path.string() + "; run the '" + stage + "' stage first");
  std::vector<std::string> out;
  const Json manifest = load_json(path);
  for (const auto& f : manifest.at("files")) out.push_back(f.at("path").get<std::string>());
  return out;
}

std::string error_text(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& x) {
    return x.what();
  } catch (...) {
    return "unknown error";
  }
}

}  // namespace

ExperimentConfig config_from_json(const Json& j, const fs::path& base) {
  if (!j.is_object()) throw DataError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.hash = sha256_hex(j.dump());
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  cfg.output_dir = resolve(field<std::string>(j, "output_dir", "annealbench_out"));

  const Json inst = field(j, "instances", Json::object());
  auto& is = cfg.instances;
  try {
    is.cls = instance_class_from_string(field<std::string>(inst, "class", "logical"));
  } catch (const ParameterError& e) {
    throw DataError(e.what());
  }
  const bool hardware = is.cls == InstanceClass::hardware;
  is.alpha = field(inst, "alpha", hardware ? kHardwareAlpha : kLogicalAlpha);
  is.p = field(inst, "p", kGadgetFraction);
  is.L = list<int>(inst, "L", {is.cls == InstanceClass::gadget ? 1 : 4});
  is.count = field(inst, "count", 1);
  is.seed = field<std::uint64_t>(inst, "seed", 0);
  if (inst.contains("fault_mask")) is.fault_mask = resolve(field<std::string>(inst, "fault_mask", ""));
  if (is.count < 1) throw DataError("instances.count must be positive");
  for (int L : is.L)
    if (L < 1 || L > kMaxChimeraSide) throw DataError("instance sizes must lie in [1, 16]");
  if (is.cls == InstanceClass::custom) throw DataError("instances.class must be gadget, hardware or logical");
  if (is.cls == InstanceClass::gadget && (is.L != std::vector<int>{1} || is.count != 1))
    throw DataError("the gadget class has a single instance with L = 1");
  if (is.fault_mask && !fs::exists(*is.fault_mask)) throw DataError("fault mask " + is.fault_mask->string() + " not found");

  const Json sol = field(j, "solvers", Json::object());
  auto& sg = cfg.solvers;
  for (const auto& k : list<std::string>(sol, "kinds", {"SA"})) {
    try {
      sg.kinds.push_back(solver_kind_from_string(k));
    } catch (const ParameterError& e) {
      throw DataError(e.what());
    }
  }
  sg.betas = list<double>(sol, "beta", {presets::kSaBetaLogical});
  sg.sweeps = list<long>(sol, "sweeps", {100});
  sg.schedule = field<std::string>(sol, "schedule", "dw2x-like");
  if (!fs::exists(sg.schedule) && fs::exists(resolve(sg.schedule))) sg.schedule = resolve(sg.schedule).string();
  resolve_schedule(sg.schedule);
  sg.reads = field(sol, "reads", 1000);
  sg.gauges = field(sol, "gauges", 1);
  sg.budget = field(sol, "budget", 0.0);
  sg.sqa_slices = field(sol, "sqa_slices", kDefaultSqaSlices);
  sg.seed = field<std::uint64_t>(sol, "seed", 0);
  for (double b : sg.betas)
    if (!(b > 0.0)) throw DataError("solver betas must be positive");
  for (long s : sg.sweeps)
    if (s < 1) throw DataError("sweep counts must be positive");
  if (sg.reads < 1 || sg.gauges < 1) throw DataError("reads and gauges must be positive");
  if (sg.budget < 0.0) throw DataError("budget must be non-negative");

  const Json an = field(j, "analysis", Json::object());
  auto& as = cfg.analysis;
  as.quantiles = list<double>(an, "quantiles", as.quantiles);
  as.p_d = field(an, "p_d", kDefaultTargetProbability);
  as.families.clear();
  for (const auto& f : list<std::string>(an, "families", {"quadratic_log"})) {
    try {
      as.families.push_back(fit_family_from_string(f));
    } catch (const ParameterError& e) {
      throw DataError(e.what());
    }
  }
  as.n_boot = field(an, "n_boot", 200);
  as.seed = field<std::uint64_t>(an, "seed", 0);
  for (double q : as.quantiles)
    if (!(q > 0.0 && q < 1.0)) throw DataError("quantiles must lie in (0, 1)");
  if (!(as.p_d > 0.0 && as.p_d < 1.0)) throw DataError("p_d must lie in (0, 1)");
  if (as.n_boot < 1) throw DataError("n_boot must be positive");
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  return config_from_json(load_json(path), fs::absolute(path).parent_path());
}

int workers_from_env() {
  const char* v = std::getenv("ANNEALBENCH_WORKERS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw ParameterError(std::string("ANNEALBENCH_WORKERS must be a non-negative integer, got '") + v + "'");
  return static_cast<int>(n);
}

int budgeted_reads(int reads, long sweeps, double budget) {
  if (budget <= 0.0) return reads;
  const double cap = std::floor(budget / static_cast<double>(sweeps));
  return static_cast<int>(std::max(1.0, std::min(static_cast<double>(reads), cap)));
}

ChimeraTopology subgraph(const ChimeraTopology& full, int L) {
  const int F = full.side();
  if (L < 1 || L > F) throw ParameterError("subgraph side must lie in [1, " + std::to_string(F) + "]");
  const int off = F - L;
  auto map = [&](int q) -> int {
    const int cell = chimera::cell_of(q);
    const int r = chimera::cell_row(F, cell) - off, c = chimera::cell_col(F, cell) - off;
    if (r < 0 || c < 0) return -1;
    return chimera::qubit_id(L, r, c, chimera::index_in_cell(q));
  };
  std::vector<int> fq;
  for (int q : full.faulty_qubits())
    if (int m = map(q); m >= 0) fq.push_back(m);
  std::vector<Coupler> fc;
  for (const auto& c : full.faulty_couplers()) {
    const int a = map(c.u), b = map(c.v);
    if (a >= 0 && b >= 0) fc.push_back(Coupler::make(a, b));
  }
  return ChimeraTopology::build(L, fq, fc);
}

// ---------------------------------------------------------------------------

StageSummary cmd_gen(const ExperimentConfig& cfg) {
  const auto& is = cfg.instances;
  std::optional<ChimeraTopology> mask;
  if (is.fault_mask) mask = load_fault_mask(*is.fault_mask);

  struct Task {
    int L;
    int index;
    std::string name;
  };
  std::vector<Task> tasks;
  for (int L : is.L)
    for (int i = 0; i < is.count; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_L%d_%04d", to_string(is.cls).c_str(), L, i);
      tasks.push_back({L, i, name});
    }

  fs::create_directories(cfg.output_dir / "instances");
  std::vector<std::optional<FileEntry>> written(tasks.size());
  std::vector<std::optional<Failure>> failed(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& task = tasks[t];
    try {
      const std::uint64_t seed = stream_seed(is.seed, (static_cast<std::uint64_t>(task.L) << 32) | static_cast<std::uint64_t>(task.index));
      IsingInstance inst;
      if (is.cls == InstanceClass::gadget) {
        inst = gadget_hamiltonian();
      } else {
        auto topo = std::make_shared<const ChimeraTopology>(mask ? subgraph(*mask, task.L) : ChimeraTopology::build(task.L));
        inst = is.cls == InstanceClass::hardware ? gen_hardware_planted(topo, is.alpha, is.p, seed)
                                                 : gen_logical_planted(topo, is.alpha, is.p, seed);
      }
      Json j = instance_to_json(inst);
      j["provenance"] = provenance(cfg.hash);
      const std::string rel = "instances/" + task.name + ".json";
      const std::string text = dump(j);
      write_file(cfg.output_dir / rel, text);
      written[t] = FileEntry{rel, sha256_hex(text)};
    } catch (...) {
      failed[t] = Failure{task.name, error_text(std::current_exception())};
    }
  }

  StageSummary out;
  std::vector<FileEntry> files;
  for (auto& w : written)
    if (w) files.push_back(*w);
  for (auto& f : failed)
    if (f) out.failures.push_back(*f);
  out.written = static_cast<int>(files.size());
  out.manifest = write_manifest(cfg, "gen", files, out.failures);
  return out;
}

StageSummary cmd_run(const ExperimentConfig& cfg, int workers) {
  const auto instances = manifest_files(cfg, "gen");
  const auto& sg = cfg.solvers;
  const Schedule schedule = resolve_schedule(sg.schedule);

  struct Task {
    std::string instance;  // relative path
    SolverKind kind;
    double beta;
    long sweeps;
    std::string rel;
  };
  std::vector<Task> tasks;
  for (const auto& rel : instances)
    for (SolverKind k : sg.kinds)
      for (double b : sg.betas)
        for (long s : sg.sweeps) {
          const std::string stem = fs::path(rel).stem().string();
          tasks.push_back({rel, k, b, s, "results/" + stem + "__" + to_string(k) + "_b" + fmt(b) + "_s" + std::to_string(s) + ".json"});
        }

  fs::create_directories(cfg.output_dir / "results");
  std::vector<int> status(tasks.size(), 0);  // 1 written, 2 skipped
  std::vector<std::optional<Failure>> failed(tasks.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& task = tasks[t];
    const fs::path out_path = cfg.output_dir / task.rel;
    try {
      if (fs::exists(out_path)) {
        const Json prev = load_json(out_path);
        if (prev.value("/provenance/config_sha256"_json_pointer, std::string()) == cfg.hash) {
          status[t] = 2;
          continue;
        }
      }
      const IsingInstance inst = load_instance(cfg.output_dir / task.instance);
      const Thirds ground = reference_ground_energy(inst);
      const std::uint64_t task_seed = stream_seed(sg.seed, key_seed(task.rel));
      const int reads = budgeted_reads(sg.reads, task.sweeps, sg.budget);

      SolverConfig sc;
      sc.kind = task.kind;
      sc.n_sweeps = task.sweeps;
      sc.beta = task.beta;
      sc.schedule = schedule;
      sc.replicas = reads;
      sc.sqa_slices = sg.sqa_slices;
      sc.ground_energy = ground;
      std::vector<AnnealRecord> records;
      for (int g = 0; g < sg.gauges; ++g) {
        const GaugeVector gv = sg.gauges == 1 ? GaugeVector::identity(inst.topology())
                                               : GaugeVector::random(inst.topology(), stream_seed(task_seed, static_cast<std::uint64_t>(2 * g)));
        sc.seed = stream_seed(task_seed, static_cast<std::uint64_t>(2 * g + 1));
        auto part = run(apply_gauge(inst, gv), sc, RunOptions{1});
        records.insert(records.end(), part.begin(), part.end());
      }
      const auto est = estimate_ps(records, cfg.analysis.n_boot, task_seed);
      Thirds best = records.front().energy;
      for (const auto& r : records) best = std::min(best, r.energy);

      Json j{{"format", "annealbench.result"},
             {"task",
              {{"instance", task.instance},
               {"class", to_string(inst.metadata().cls)},
               {"L", inst.topology().side()},
               {"solver", to_string(task.kind)},
               {"beta", task.beta},
               {"sweeps", task.sweeps},
               {"schedule", schedule.name()},
               {"sqa_slices", sg.sqa_slices}}},
             {"reads_per_gauge", reads},
             {"gauges", sg.gauges},
             {"reads", static_cast<long>(records.size())},
             {"successes", est.successes},
             {"p_s", est.p_s},
             {"ci", {est.ci_lo, est.ci_hi}},
             {"ground_energy", ground.to_string()},
             {"best_energy", best.to_string()},
             {"seed", task_seed},
             {"provenance", provenance(cfg.hash)}};
      write_file(out_path, dump(j));
      status[t] = 1;
    } catch (...) {
      failed[t] = Failure{task.rel, error_text(std::current_exception())};
    }
  }

  StageSummary out;
  std::vector<FileEntry> files;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (failed[t]) {
      out.failures.push_back(*failed[t]);
      continue;
    }
    (status[t] == 1 ? out.written : out.skipped) += 1;
    files.push_back({tasks[t].rel, sha256_file(cfg.output_dir / tasks[t].rel)});
  }
  out.manifest = write_manifest(cfg, "run", files, out.failures);
  return out;
}

namespace {

struct Observation {
  double p_s;
  long reads;
};

// (class, L, solver, beta) -> instance -> sweeps -> observation
using Groups = std::map<std::tuple<std::string, int, std::string, double>,
                        std::map<std::string, std::map<long, Observation>>>;

std::string group_name(const Groups::key_type& k) {
  return std::get<0>(k) + "_L" + std::to_string(std::get<1>(k)) + "_" + std::get<2>(k) + "_b" + fmt(std::get<3>(k));
}

Json group_json(const Groups::key_type& k) {
  return {{"class", std::get<0>(k)}, {"L", std::get<1>(k)}, {"solver", std::get<2>(k)}, {"beta", std::get<3>(k)},
          {"effort_axis", "sweeps"}};
}

}  // namespace

StageSummary cmd_fit(const ExperimentConfig& cfg) {
  Groups groups;
  for (const auto& rel : manifest_files(cfg, "run")) {
    const Json j = load_json(cfg.output_dir / rel);
    try {
      const auto& t = j.at("task");
      groups[{t.at("class").get<std::string>(), t.at("L").get<int>(), t.at("solver").get<std::string>(),
              t.at("beta").get<double>()}][t.at("instance").get<std::string>()][t.at("sweeps").get<long>()] =
          {j.at("p_s").get<double>(), j.at("reads").get<long>()};
    } catch (const Json::exception& e) {
      throw DataError(rel + ": " + e.what());
    }
  }
  if (groups.empty()) throw DataError("no results to fit in " + (cfg.output_dir / "results").string());

  const auto& an = cfg.analysis;
  FitOptions fo;
  fo.n_boot = an.n_boot;
  fo.seed = an.seed;
  StageSummary out;
  std::vector<FileEntry> files;
  fs::create_directories(cfg.output_dir / "curves");
  fs::create_directories(cfg.output_dir / "fits");
  auto emit = [&](const std::string& rel, const std::string& text) {
    write_file(cfg.output_dir / rel, text);
    files.push_back({rel, sha256_hex(text)});
    ++out.written;
  };

  for (const auto& [key, per_instance] : groups) {
    const std::string name = group_name(key);
    std::set<long> effort_set;
    for (const auto& [inst, obs] : per_instance)
      for (const auto& [s, o] : obs) effort_set.insert(s);
    const std::vector<long> efforts(effort_set.begin(), effort_set.end());
    std::vector<double> effort_d(efforts.begin(), efforts.end());

    // tts[e][i]; instances missing an effort are left out of the group.
    std::vector<std::vector<double>> tts(efforts.size());
    std::vector<std::string> used;
    for (const auto& [inst, obs] : per_instance) {
      if (obs.size() != efforts.size()) {
        out.failures.push_back({name + ":" + inst, "missing efforts; instance left out"});
        continue;
      }
      used.push_back(inst);
      for (std::size_t e = 0; e < efforts.size(); ++e) {
        const auto& o = obs.at(efforts[e]);
        // All reads succeeded: one pseudo-failure keeps the repetition count finite.
        const double p = o.p_s >= 1.0 ? 1.0 - 0.5 / static_cast<double>(o.reads) : o.p_s;
        tts[e].push_back(annealbench::tts(p, effort_d[e], 1.0, 1.0, an.p_d).value);
      }
    }
    if (used.empty()) continue;

    for (double q : an.quantiles) {
      const QuantileCurve curve = quantile_curve(effort_d, tts, q);
      const std::string qname = name + "_q" + fmt(q);
      emit("curves/" + qname + ".csv", csv_banner(cfg.hash) + quantile_curve_csv(curve));

      std::vector<FitPoint> pts;
      for (std::size_t e = 0; e < efforts.size(); ++e)
        if (std::isfinite(curve.ln_tts[e])) pts.push_back({std::log(effort_d[e]), curve.ln_tts[e]});
      for (FitFamily fam : an.families) {
        if (fam != FitFamily::quadratic_log && fam != FitFamily::hfs_form) continue;
        const std::string rel = "fits/" + qname + "_" + to_string(fam) + ".json";
        try {
          const FitResult fit = fam == FitFamily::quadratic_log ? fit_quadratic_log(pts, fo) : fit_hfs_form(pts, fo);
          Json g = group_json(key);
          g["q"] = q;
          g["min_effort"] = efforts.front();
          g["max_effort"] = efforts.back();
          g["instances"] = used.size();
          emit(rel, dump({{"format", "annealbench.fit"},
                          {"group", g},
                          {"fit", fit_to_json(fit)},
                          {"provenance", provenance(cfg.hash)}}));
        } catch (...) {
          out.failures.push_back({rel, error_text(std::current_exception())});
        }
      }
    }

    if (std::find(an.families.begin(), an.families.end(), FitFamily::power_law) != an.families.end()) {
      const std::string rel = "fits/" + name + "_power_law.json";
      Json slopes = Json::array();
      std::vector<double> a_values;
      for (const auto& inst : used) {
        std::vector<FitPoint> pts;
        for (const auto& [s, o] : per_instance.at(inst))
          if (o.p_s > 0.0) pts.push_back({static_cast<double>(s), o.p_s});
        if (pts.size() < 3) continue;
        try {
          const FitResult fit = fit_power_law(pts, fo);
          a_values.push_back(fit.param("a").value);
          slopes.push_back({{"instance", inst}, {"a", fit.param("a").value}, {"b", fit.param("b").value}});
        } catch (...) {
          out.failures.push_back({rel + ":" + inst, error_text(std::current_exception())});
        }
      }
      if (!a_values.empty()) {
        const double med = statistics::median(a_values);
        emit(rel, dump({{"format", "annealbench.power_law"},
                        {"group", group_json(key)},
                        {"slopes", slopes},
                        {"median_a", med},
                        {"median_tts_exponent", 1.0 - med},
                        {"provenance", provenance(cfg.hash)}}));
      }
    }
  }
  out.manifest = write_manifest(cfg, "fit", files, out.failures);
  return out;
}

StageSummary cmd_report(const ExperimentConfig& cfg) {
  const fs::path manifest = cfg.output_dir / "manifest_fit.json";
  if (!fs::exists(manifest)) throw DataError("no fits in " + cfg.output_dir.string() + "; run the 'fit' stage first");

  struct Row {
    Json group;
    FitResult fit;
  };
  std::vector<Row> rows;
  for (const auto& rel : manifest_files(cfg, "fit")) {
    if (rel.rfind("fits/", 0) != 0) continue;
    const Json j = load_json(cfg.output_dir / rel);
    if (j.value("format", "") != "annealbench.fit") continue;
    rows.push_back({j.at("group"), fit_from_json(j.at("fit"))});
  }
  if (rows.empty()) throw DataError("no fits to report in " + (cfg.output_dir / "fits").string());

  auto half = [](const FitParam& p) { return 0.5 * (p.ci_hi - p.ci_lo); };
  std::string optimum = csv_banner(cfg.hash) +
                        "table,solver,instance_class,family,L,effort_axis,min_effort,max_effort,a,a_err,b,b_err,c,c_err,q,beta\n";
  // (class, solver, beta, q, family) -> L -> ln TTS*
  std::map<std::tuple<std::string, std::string, double, double, std::string>, std::map<int, double>> scaling;
  Json report_rows = Json::array();
  for (const auto& r : rows) {
    const auto& g = r.group;
    const std::string cls = g.at("class"), solver = g.at("solver");
    const double beta = g.at("beta"), q = g.at("q");
    const int L = g.at("L");
    std::ostringstream line;
    line << cls << solver << "," << solver << "," << cls << "," << to_string(r.fit.family) << "," << L << ","
         << g.at("effort_axis").get<std::string>() << "," << g.at("min_effort").get<long>() << ","
         << g.at("max_effort").get<long>();
    for (const char* p : {"a", "b", "c"})
      line << "," << r.fit.param(p).value << "," << half(r.fit.param(p));
    line << "," << fmt(q) << "," << fmt(beta) << "\n";
    optimum += line.str();
    report_rows.push_back({{"group", g}, {"fit", fit_to_json(r.fit)}});
    if (r.fit.convex && std::isfinite(r.fit.param("c").value))
      scaling[{cls, solver, beta, q, to_string(r.fit.family)}][L] = r.fit.param("c").value;
  }

  StageSummary out;
  std::string scaling_csv =
      csv_banner(cfg.hash) + "solver,instance_class,family,q,L_min,L_max,ln_a,ln_a_err,b,b_err,beta,source_family\n";
  Json scaling_json = Json::array();
  FitOptions fo;
  fo.n_boot = cfg.analysis.n_boot;
  fo.seed = cfg.analysis.seed;
  for (const auto& [key, by_L] : scaling) {
    const auto& [cls, solver, beta, q, source] = key;
    if (by_L.size() < 3) continue;
    std::vector<FitPoint> pts;
    for (const auto& [L, c] : by_L) pts.push_back({static_cast<double>(L), c});
    for (FitFamily fam : {FitFamily::scaling_exp, FitFamily::scaling_poly}) {
      try {
        const FitResult fit = fit_scaling(pts, fam, fo);
        const auto& a = fit.param("a");
        const auto& b = fit.param("b");
        std::ostringstream line;
        line << solver << "," << cls << "," << to_string(fam) << "," << fmt(q) << "," << by_L.begin()->first << ","
             << by_L.rbegin()->first << "," << std::log(a.value) << ","
             << 0.5 * (std::log(a.ci_hi) - std::log(a.ci_lo)) << "," << b.value << "," << half(b) << "," << fmt(beta)
             << "," << source << "\n";
        scaling_csv += line.str();
        scaling_json.push_back({{"solver", solver},
                                {"class", cls},
                                {"beta", beta},
                                {"q", q},
                                {"source_family", source},
                                {"fit", fit_to_json(fit)}});
      } catch (...) {
        out.failures.push_back({solver + "_" + cls + "_" + to_string(fam), error_text(std::current_exception())});
      }
    }
  }

  fs::create_directories(cfg.output_dir / "report");
  std::vector<FileEntry> files;
  auto emit = [&](const std::string& rel, const std::string& text) {
    write_file(cfg.output_dir / rel, text);
    files.push_back({rel, sha256_hex(text)});
    ++out.written;
  };
  emit("report/optimum_fits.csv", optimum);
  emit("report/scaling_fits.csv", scaling_csv);
  emit("report/report.json",
       dump({{"format", "annealbench.report"},
             {"optimum_fits", report_rows},
             {"scaling_fits", scaling_json},
             {"provenance", provenance(cfg.hash)}}));
  out.manifest = write_manifest(cfg, "report", files, out.failures);
  return out;
}

// ---------------------------------------------------------------------------

StageSummary cmd_exact(const ExactOptions& opt) {
  if (opt.points < 100) throw ParameterError("exact analysis needs at least 100 s-points");
  const IsingInstance inst = opt.instance ? load_instance(*opt.instance) : gadget_hamiltonian();
  const Schedule schedule = resolve_schedule(opt.schedule);
  const DenseOperatorContext ctx(inst, schedule, opt.cap);
  const int levels = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(opt.levels), ctx.dimension()));

  std::vector<double> grid(static_cast<std::size_t>(opt.points));
  for (int i = 0; i < opt.points; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (opt.points - 1);
  std::vector<SpectrumSlice> slices(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < grid.size(); ++i) slices[i] = spectrum(ctx, grid[i], levels);
  const MinGapResult gap = min_gap(ctx, grid);

  const std::string hash = sha256_hex(inst.topology().num_sites() > 0 ? dump(instance_to_json(inst)) + schedule_to_csv(schedule) : "");
  fs::create_directories(opt.output_dir);
  StageSummary out;
  write_file(opt.output_dir / "spectrum.csv", csv_banner(hash) + spectrum_csv(slices));
  write_file(opt.output_dir / "min_gap.json",
             dump({{"s_star", gap.s_star},
                   {"gap_GHz", gap.gap},
                   {"degenerate", gap.degenerate},
                   {"schedule", schedule.name()},
                   {"provenance", provenance(hash)}}));
  out.written = 2;

  if (!opt.t_f_us.empty()) {
    std::vector<EvolveResult> ev(opt.t_f_us.size());
    for (std::size_t i = 0; i < opt.t_f_us.size(); ++i) ev[i] = evolve(ctx, opt.t_f_us[i], opt.steps);
    std::string csv = csv_banner(hash) + "t_f_us,p_S,max_norm_drift,steps\n";
    for (std::size_t i = 0; i < ev.size(); ++i) {
      std::ostringstream line;
      line.precision(17);
      line << opt.t_f_us[i] << "," << ev[i].p_s << "," << ev[i].max_norm_drift << "," << ev[i].steps_used << "\n";
      csv += line.str();
    }
    write_file(opt.output_dir / "evolution.csv", csv);
    ++out.written;
  }
  return out;
}

VerifyReport cmd_verify(const fs::path& dir, std::uint64_t seed) {
  if (!fs::is_directory(dir)) throw DataError(dir.string() + " is not a directory");
  std::vector<fs::path> paths;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename().string().rfind("manifest", 0) != 0)
      paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());

  VerifyReport rep;
  for (const auto& p : paths) {
    const Json j = load_json(p);
    if (j.value("format", "") != "annealbench.instance") continue;
    ++rep.checked;
    const std::string name = fs::relative(p, dir).string();
    auto fail = [&](const std::string& why) { rep.failures.push_back({name, why}); };
    try {
      const IsingInstance inst = instance_from_json(j);
      const Certificate cert = frustration_certificate(inst);
      const Thirds planted = energy(inst, inst.planted_state());
      if (!cert.certified) fail("certificate rejects the planted state");
      if (planted != cert.ground_energy)
        fail("planted energy " + planted.to_string() + " differs from the term bound " + cert.ground_energy.to_string());
      if (inst.size() <= 16 && brute_force_ground_energy(inst) != planted) fail("exhaustive ground energy differs");
      const GaugeVector g = GaugeVector::random(inst.topology(), stream_seed(seed, key_seed(name)));
      const IsingInstance gauged = apply_gauge(inst, g);
      if (energy(gauged, apply_gauge(inst.planted_state(), inst.topology(), g)) != planted)
        fail("gauge transform changes the planted energy");
      if (inst.range() > Thirds::whole(6)) fail("coupling range exceeds 6");
    } catch (...) {
      fail(error_text(std::current_exception()));
    }
  }
  if (rep.checked == 0) throw DataError("no instance files under " + dir.string());
  return rep;
}

int exit_code(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const ParameterError&) {
    return kUsage;
  } catch (const DataError&) {
    return kDataError;
  } catch (const GenerationError&) {
    return kDataError;
  } catch (const std::filesystem::filesystem_error&) {
    return kDataError;
  } catch (const NumericalError&) {
    return kNumericalError;
  } catch (const CapabilityError&) {
    return kNumericalError;
  } catch (...) {
    return kNumericalError;
  }
}

}  // namespace annealbench::cli
