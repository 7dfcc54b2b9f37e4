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

#include "annealbench/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "annealbench/errors.hpp"

namespace annealbench {

std::string version() { return "0.1.0"; }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("SHA-256 computation failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string to_string(TermKind kind) {
  switch (kind) {
    case TermKind::loop: return "loop";
    case TermKind::gadget: return "gadget";
    case TermKind::ferromagnet: return "ferromagnet";
  }
  return "loop";
}

TermKind term_kind_from_string(const std::string& s) {
  if (s == "loop") return TermKind::loop;
  if (s == "gadget") return TermKind::gadget;
  if (s == "ferromagnet") return TermKind::ferromagnet;
  throw DataError("unknown term kind: " + s);
}

namespace {

// Wrap nlohmann and annealbench parameter errors into DataError.
template <typename F>
auto parsing(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(what + ": " + e.what());
  }
}

Json couplers_json(const std::vector<Coupler>& cs) {
  Json arr = Json::array();
  for (const auto& c : cs) arr.push_back({c.u, c.v});
  return arr;
}

}  // namespace

Json topology_to_json(const ChimeraTopology& topo) {
  return {{"L", topo.side()},
          {"faulty_qubits", topo.faulty_qubits()},
          {"faulty_couplers", couplers_json(topo.faulty_couplers())}};
}

ChimeraTopology topology_from_json(const Json& j) {
  return parsing("topology", [&] {
    const int L = j.at("L").get<int>();
    std::vector<int> fq = j.value("faulty_qubits", std::vector<int>{});
    std::vector<Coupler> fc;
    for (const auto& c : j.value("faulty_couplers", Json::array())) {
      if (!c.is_array() || c.size() != 2) throw DataError("faulty coupler must be a pair");
      fc.push_back(Coupler::make(c[0].get<int>(), c[1].get<int>()));
    }
    return ChimeraTopology::build(L, fq, fc);
  });
}

ChimeraTopology load_fault_mask(const std::filesystem::path& path) {
  const auto text = read_file(path);
  return topology_from_json(parsing(path.string(), [&] { return Json::parse(text); }));
}

namespace {

Json fields_json(const std::vector<FieldEntry>& fs) {
  Json arr = Json::array();
  for (const auto& f : fs) arr.push_back({f.qubit, f.value.numerator()});
  return arr;
}

Json couplings_json(const std::vector<CouplingEntry>& cs) {
  Json arr = Json::array();
  for (const auto& c : cs) arr.push_back({c.u, c.v, c.value.numerator()});
  return arr;
}

std::string planted_string(const IsingInstance& inst) {
  std::string s;
  for (int q : inst.topology().qubits()) s += inst.planted_state()[static_cast<std::size_t>(q)] > 0 ? '+' : '-';
  return s;
}

}  // namespace

Json instance_to_json(const IsingInstance& inst) {
  const auto& topo = inst.topology();
  Json fields = Json::array();
  for (int q : topo.qubits())
    if (inst.field(q).numerator() != 0) fields.push_back({q, inst.field(q).numerator()});
  Json couplings = Json::array();
  for (std::size_t i = 0; i < topo.couplers().size(); ++i)
    if (inst.coupling(i).numerator() != 0)
      couplings.push_back({topo.couplers()[i].u, topo.couplers()[i].v, inst.coupling(i).numerator()});
  Json terms = Json::array();
  for (const auto& t : inst.decomposition()) {
    Json term{{"kind", to_string(t.kind)},
              {"vertices", t.vertices},
              {"fields", fields_json(t.fields)},
              {"couplings", couplings_json(t.couplings)}};
    term["flipped_edge"] = t.flipped_edge ? Json{t.flipped_edge->u, t.flipped_edge->v} : Json(nullptr);
    terms.push_back(std::move(term));
  }
  const auto& m = inst.metadata();
  return {{"format", "annealbench.instance"},
          {"version", version()},
          {"units", "thirds"},
          {"topology", topology_to_json(topo)},
          {"metadata", {{"class", to_string(m.cls)}, {"alpha", m.alpha}, {"p", m.p}, {"seed", m.seed}}},
          {"fields", fields},
          {"couplings", couplings},
          {"planted", planted_string(inst)},
          {"terms", terms}};
}

IsingInstance instance_from_json(const Json& j) {
  return parsing("instance", [&] {
    if (j.value("format", "") != "annealbench.instance") throw DataError("not an annealbench instance file");
    auto topo = std::make_shared<const ChimeraTopology>(topology_from_json(j.at("topology")));
    IsingInstance inst(topo);
    for (const auto& t : j.at("terms")) {
      HamiltonianTerm term;
      term.kind = term_kind_from_string(t.at("kind").get<std::string>());
      term.vertices = t.at("vertices").get<std::vector<int>>();
      if (!t.at("flipped_edge").is_null())
        term.flipped_edge = Coupler::make(t["flipped_edge"][0].get<int>(), t["flipped_edge"][1].get<int>());
      for (const auto& f : t.at("fields"))
        term.fields.push_back({f[0].get<int>(), Thirds::from_numerator(f[1].get<std::int64_t>())});
      for (const auto& c : t.at("couplings"))
        term.couplings.push_back(
            {c[0].get<int>(), c[1].get<int>(), Thirds::from_numerator(c[2].get<std::int64_t>())});
      inst.add_term(std::move(term));
    }
    // The stored totals are authoritative; whatever the terms do not cover
    // is added on top.
    std::vector<Thirds> h(static_cast<std::size_t>(topo->num_sites()));
    for (const auto& f : j.at("fields")) {
      const int q = f[0].get<int>();
      if (!topo->is_active(q)) throw DataError("field on inactive qubit " + std::to_string(q));
      h[static_cast<std::size_t>(q)] += Thirds::from_numerator(f[1].get<std::int64_t>());
    }
    for (int q : topo->qubits())
      if (h[static_cast<std::size_t>(q)] != inst.field(q)) inst.add_field(q, h[static_cast<std::size_t>(q)] - inst.field(q));
    std::vector<Thirds> J(topo->couplers().size());
    for (const auto& c : j.at("couplings")) {
      auto idx = topo->coupler_index(c[0].get<int>(), c[1].get<int>());
      if (!idx) throw DataError("coupling on inactive coupler");
      J[*idx] += Thirds::from_numerator(c[2].get<std::int64_t>());
    }
    for (std::size_t i = 0; i < J.size(); ++i)
      if (J[i] != inst.coupling(i)) inst.add_coupling(topo->couplers()[i].u, topo->couplers()[i].v, J[i] - inst.coupling(i));

    const auto planted = j.at("planted").get<std::string>();
    if (planted.size() != topo->qubits().size()) throw DataError("planted state length mismatch");
    SpinState state(static_cast<std::size_t>(topo->num_sites()), 0);
    for (std::size_t i = 0; i < planted.size(); ++i) {
      if (planted[i] != '+' && planted[i] != '-') throw DataError("planted state must use '+' and '-'");
      state[static_cast<std::size_t>(topo->qubits()[i])] = planted[i] == '+' ? 1 : -1;
    }
    inst.set_planted_state(std::move(state));

    const auto& m = j.at("metadata");
    inst.set_metadata({instance_class_from_string(m.at("class").get<std::string>()), m.at("alpha").get<double>(),
                       m.at("p").get<double>(), m.at("seed").get<std::uint64_t>()});
    return inst;
  });
}

void save_instance(const std::filesystem::path& path, const IsingInstance& inst) {
  write_file(path, dump(instance_to_json(inst)));
}

IsingInstance load_instance(const std::filesystem::path& path) {
  const auto text = read_file(path);
  return instance_from_json(parsing(path.string(), [&] { return Json::parse(text); }));
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericalError("cannot format number");
  return {buf, end};
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\r')) --e;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw DataError("bad number in " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string schedule_to_csv(const Schedule& schedule) {
  std::string out = "s,A_GHz,B_GHz\n";
  for (const auto& p : schedule.points())
    out += format_double(p.s) + "," + format_double(p.A) + "," + format_double(p.B) + "\n";
  return out;
}

Schedule schedule_from_csv(const std::string& name, const std::string& text) {
  std::vector<SchedulePoint> pts;
  for (const auto& row : parse_csv(text)) {
    auto get = [&](const char* col) {
      auto it = row.find(col);
      if (it == row.end()) throw DataError(std::string("schedule CSV lacks column ") + col);
      return parse_double(it->second, "schedule");
    };
    pts.push_back({get("s"), get("A_GHz"), get("B_GHz")});
  }
  return parsing("schedule " + name, [&] { return Schedule(name, std::move(pts)); });
}

std::string rle_encode(const ChimeraTopology& topo, std::span<const std::int8_t> state) {
  if (state.size() != static_cast<std::size_t>(topo.num_sites())) throw ParameterError("state size mismatch");
  std::string out;
  char run_sym = 0;
  long run = 0;
  auto flush = [&] {
    if (run > 0) out += std::to_string(run) + run_sym;
  };
  for (int q : topo.qubits()) {
    const char sym = state[static_cast<std::size_t>(q)] > 0 ? '+' : '-';
    if (sym == run_sym) {
      ++run;
    } else {
      flush();
      run_sym = sym;
      run = 1;
    }
  }
  flush();
  return out;
}

SpinState rle_decode(const ChimeraTopology& topo, const std::string& text) {
  SpinState state(static_cast<std::size_t>(topo.num_sites()), 0);
  std::size_t pos = 0, filled = 0;
  const auto& qs = topo.qubits();
  while (pos < text.size()) {
    std::size_t digits = pos;
    while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) ++digits;
    if (digits == pos || digits == text.size()) throw DataError("malformed run-length state");
    const long run = std::stol(text.substr(pos, digits - pos));
    const char sym = text[digits];
    if (sym != '+' && sym != '-') throw DataError("malformed run-length state");
    for (long r = 0; r < run; ++r) {
      if (filled >= qs.size()) throw DataError("run-length state too long");
      state[static_cast<std::size_t>(qs[filled++])] = sym == '+' ? 1 : -1;
    }
    pos = digits + 1;
  }
  if (filled != qs.size()) throw DataError("run-length state too short");
  return state;
}

Json record_to_json(const ChimeraTopology& topo, const AnnealRecord& r) {
  return {{"replica", r.replica},
          {"final_state", rle_encode(topo, r.final_state)},
          {"energy", r.energy.numerator()},
          {"success", r.success},
          {"seed_used", r.seed_used}};
}

AnnealRecord record_from_json(const ChimeraTopology& topo, const Json& j) {
  return parsing("record", [&] {
    AnnealRecord r;
    r.replica = j.at("replica").get<int>();
    r.final_state = rle_decode(topo, j.at("final_state").get<std::string>());
    r.energy = Thirds::from_numerator(j.at("energy").get<std::int64_t>());
    r.success = j.at("success").get<bool>();
    r.seed_used = j.at("seed_used").get<std::uint64_t>();
    return r;
  });
}

Json fit_to_json(const FitResult& fit) {
  Json params = Json::array();
  for (const auto& p : fit.params)
    params.push_back({{"name", p.name}, {"value", p.value}, {"ci", {p.ci_lo, p.ci_hi}}});
  return {{"family", to_string(fit.family)},
          {"params", params},
          {"derived", fit.derived},
          {"diagnostics", fit.diagnostics},
          {"residual_norm", fit.residual_norm},
          {"ci_method", to_string(fit.ci_method)},
          {"convex", fit.convex}};
}

FitResult fit_from_json(const Json& j) {
  return parsing("fit", [&] {
    FitResult fit;
    fit.family = fit_family_from_string(j.at("family").get<std::string>());
    for (const auto& p : j.at("params"))
      fit.params.push_back({p.at("name").get<std::string>(), p.at("value").get<double>(),
                            p.at("ci").at(0).get<double>(), p.at("ci").at(1).get<double>()});
    fit.derived = j.value("derived", std::map<std::string, double>{});
    fit.diagnostics = j.value("diagnostics", std::vector<std::string>{});
    fit.residual_norm = j.value("residual_norm", 0.0);
    fit.ci_method = ci_method_from_string(j.value("ci_method", std::string("percentile95")));
    fit.convex = j.value("convex", true);
    return fit;
  });
}

std::string spectrum_csv(std::span<const SpectrumSlice> slices) {
  if (slices.empty()) return "s\n";
  const std::size_t k = slices.front().eigenvalues.size();
  std::string out = "s";
  for (std::size_t i = 0; i < k; ++i) out += ",E" + std::to_string(i);
  for (std::size_t i = 0; i < k; ++i) out += ",HW" + std::to_string(i);
  out += "\n";
  for (const auto& sl : slices) {
    if (sl.eigenvalues.size() != k || sl.hw_expectations.size() != k)
      throw ParameterError("spectrum slices must have equal level counts");
    out += format_double(sl.s);
    for (double e : sl.eigenvalues) out += "," + format_double(e);
    for (double h : sl.hw_expectations) out += "," + format_double(h);
    out += "\n";
  }
  return out;
}

std::string quantile_curve_csv(const QuantileCurve& curve) {
  std::ostringstream q;
  q << curve.q;
  std::string out = "effort,lnTTS_" + q.str() + "\n";
  for (std::size_t i = 0; i < curve.effort.size(); ++i)
    out += format_double(curve.effort[i]) + "," + format_double(curve.ln_tts[i]) + "\n";
  return out;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size())
      throw DataError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    CsvRow row;
    for (std::size_t i = 0; i < cells.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw DataError("CSV has no header");
  return rows;
}

std::vector<ReferenceFit> load_reference_fits(const std::filesystem::path& path) {
  std::vector<ReferenceFit> out;
  for (const auto& row : parse_csv(read_file(path))) {
    auto col = [&](const std::string& name) -> const std::string& {
      auto it = row.find(name);
      if (it == row.end()) throw DataError(path.string() + " lacks column " + name);
      return it->second;
    };
    auto num = [&](const std::string& name) { return parse_double(col(name), path.string()); };
    ReferenceFit ref;
    ref.table = col("table");
    ref.solver = col("solver");
    ref.instance_class = col("instance_class");
    ref.L = static_cast<int>(num("L"));
    ref.effort_axis = col("effort_axis");
    ref.min_effort = num("min_effort");
    ref.max_effort = num("max_effort");
    ref.fit.family = parsing(path.string(), [&] { return fit_family_from_string(col("family")); });
    for (const char* p : {"a", "b", "c"}) {
      const double v = num(p), e = num(std::string(p) + "_err");
      ref.fit.params.push_back({p, v, v - e, v + e});
    }
    if (ref.fit.family == FitFamily::quadratic_log) {
      ref.fit.derived["t_star"] = std::exp(ref.fit.param("b").value);
      ref.fit.derived["tts_star"] = std::exp(ref.fit.param("c").value);
    }
    out.push_back(std::move(ref));
  }
  return out;
}

}  // namespace annealbench
