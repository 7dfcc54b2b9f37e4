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

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace annealbench {

inline constexpr int kMaxChimeraSide = 16;
inline constexpr int kQubitsPerCell = 8;

// Undirected edge stored with u < v.
struct Coupler {
  int u = 0;
  int v = 0;

  static Coupler make(int a, int b) { return a < b ? Coupler{a, b} : Coupler{b, a}; }
  auto operator<=>(const Coupler&) const = default;
};

// Cell-major qubit indexing: id = 8 * (row * L + col) + k. Partition A holds
// k in [0, 4) and couples vertically; partition B holds k in [4, 8) and couples
// horizontally.
namespace chimera {

constexpr int qubit_id(int L, int row, int col, int k) { return kQubitsPerCell * (row * L + col) + k; }
constexpr int cell_of(int qubit) { return qubit / kQubitsPerCell; }
constexpr int index_in_cell(int qubit) { return qubit % kQubitsPerCell; }
constexpr bool in_partition_a(int qubit) { return index_in_cell(qubit) < 4; }
constexpr int cell_row(int L, int cell) { return cell / L; }
constexpr int cell_col(int L, int cell) { return cell % L; }

// True iff (a, b) is a coupler of the fault-free L x L Chimera graph.
bool is_edge(int L, int a, int b);

// All couplers of the fault-free graph, sorted.
std::vector<Coupler> ideal_couplers(int L);

}  // namespace chimera

// An L x L Chimera hardware graph with masked qubits and couplers removed.
// Immutable after construction.
class ChimeraTopology {
 public:
  // Throws ParameterError for L outside [1, 16], fault qubit ids outside
  // [0, 8L^2), or fault couplers that are not edges of the ideal graph.
  static ChimeraTopology build(int L, std::span<const int> faulty_qubits = {},
                               std::span<const Coupler> faulty_couplers = {});

  int side() const noexcept { return L_; }
  int num_sites() const noexcept { return kQubitsPerCell * L_ * L_; }
  int num_cells() const noexcept { return L_ * L_; }

  bool is_active(int qubit) const noexcept {
    return qubit >= 0 && qubit < num_sites() && active_[static_cast<std::size_t>(qubit)];
  }
  const std::vector<int>& qubits() const noexcept { return qubits_; }
  const std::vector<Coupler>& couplers() const noexcept { return couplers_; }
  const std::vector<int>& faulty_qubits() const noexcept { return faulty_qubits_; }
  const std::vector<Coupler>& faulty_couplers() const noexcept { return faulty_couplers_; }

  // Index into couplers(), if the edge is active.
  std::optional<std::size_t> coupler_index(int a, int b) const;

  // Sorted active neighbours. Throws ParameterError for an inactive qubit.
  std::span<const int> neighbors(int qubit) const;
  // Coupler indices parallel to neighbors(qubit).
  std::span<const std::size_t> incident_couplers(int qubit) const;

  // All 8 qubits and all 16 intra-cell couplers active.
  bool cell_complete(int cell) const;
  // Number of active intra-cell couplers.
  int intra_coupler_count(int cell) const;

  bool operator==(const ChimeraTopology& other) const {
    return L_ == other.L_ && faulty_qubits_ == other.faulty_qubits_ &&
           faulty_couplers_ == other.faulty_couplers_;
  }

 private:
  int L_ = 0;
  std::vector<bool> active_;
  std::vector<int> qubits_;
  std::vector<Coupler> couplers_;
  std::vector<int> faulty_qubits_;
  std::vector<Coupler> faulty_couplers_;
  std::vector<std::size_t> offsets_;
  std::vector<int> adjacency_;
  std::vector<std::size_t> adjacency_coupler_;
};

struct LogicalOptions {
  // Admit cells that miss exactly one intra-cell coupler.
  bool allow_one_missing_intra = false;
};

// Graph of complete unit cells. An edge joins grid-adjacent cells whose four
// inter-cell couplers are all active.
struct LogicalGraph {
  int side = 0;
  std::vector<int> cells;                   // sorted cell ids
  std::vector<std::pair<int, int>> edges;   // sorted, first < second

  bool contains(int cell) const;
  std::vector<int> neighbors(int cell) const;
};

LogicalGraph logical_graph(const ChimeraTopology& topo, LogicalOptions options = {});

// The four physical couplers realizing the logical edge between two
// grid-adjacent cells, ordered by in-cell index.
std::vector<Coupler> inter_cell_couplers(int L, int cell_a, int cell_b);

}  // namespace annealbench
