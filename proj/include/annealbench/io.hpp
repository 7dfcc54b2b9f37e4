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

// File formats. Every reader throws DataError on malformed input.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "annealbench/analysis.hpp"
#include "annealbench/exact.hpp"
#include "annealbench/instance.hpp"
#include "annealbench/schedule.hpp"
#include "annealbench/solvers.hpp"
#include "json.hpp"

namespace annealbench {

using Json = nlohmann::json;

std::string version();

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
// Writes via a temporary file and rename.
void write_file(const std::filesystem::path& path, std::string_view contents);

// Serialized JSON with sorted keys and a trailing newline.
std::string dump(const Json& j);

std::string to_string(TermKind kind);
TermKind term_kind_from_string(const std::string& s);

// {"L", "faulty_qubits", "faulty_couplers": [[u, v], ...]}
Json topology_to_json(const ChimeraTopology& topo);
ChimeraTopology topology_from_json(const Json& j);
ChimeraTopology load_fault_mask(const std::filesystem::path& path);

// Fields and couplings are stored as integer numerators of thirds; the
// planted state as a '+'/'-' string over the active qubits.
Json instance_to_json(const IsingInstance& inst);
IsingInstance instance_from_json(const Json& j);
void save_instance(const std::filesystem::path& path, const IsingInstance& inst);
IsingInstance load_instance(const std::filesystem::path& path);

// "s,A_GHz,B_GHz"
std::string schedule_to_csv(const Schedule& schedule);
Schedule schedule_from_csv(const std::string& name, const std::string& text);

// Run-length encoding of spins over the active qubits, e.g. "3+2-1+".
std::string rle_encode(const ChimeraTopology& topo, std::span<const std::int8_t> state);
SpinState rle_decode(const ChimeraTopology& topo, const std::string& text);

Json record_to_json(const ChimeraTopology& topo, const AnnealRecord& record);
AnnealRecord record_from_json(const ChimeraTopology& topo, const Json& j);

Json fit_to_json(const FitResult& fit);
FitResult fit_from_json(const Json& j);

// "s,E0,...,E{k-1},HW0,...,HW{k-1}"
std::string spectrum_csv(std::span<const SpectrumSlice> slices);
// "effort,lnTTS_q"
std::string quantile_curve_csv(const QuantileCurve& curve);

// Minimal CSV: header row, comma separated, no quoting.
using CsvRow = std::map<std::string, std::string>;
std::vector<CsvRow> parse_csv(const std::string& text);

// One row of a stored table of published fits. The fit's intervals are
// value -/+ the tabulated error.
struct ReferenceFit {
  std::string table;
  std::string solver;
  std::string instance_class;
  int L = 0;
  std::string effort_axis;
  double min_effort = 0.0;
  double max_effort = 0.0;
  FitResult fit;
};

// Columns table,solver,instance_class,family,L,effort_axis,min_effort,
// max_effort,a,a_err,b,b_err,c,c_err.
std::vector<ReferenceFit> load_reference_fits(const std::filesystem::path& path);

}  // namespace annealbench
