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

#include "annealbench/topology.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "annealbench/errors.hpp"

namespace annealbench {

namespace chimera {

bool is_edge(int L, int a, int b) {
  const int n = kQubitsPerCell * L * L;
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) return false;
  const int ca = cell_of(a), cb = cell_of(b);
  const int ka = index_in_cell(a), kb = index_in_cell(b);
  if (ca == cb) return in_partition_a(a) != in_partition_a(b);
  if (ka != kb) return false;
  const int dr = std::abs(cell_row(L, ca) - cell_row(L, cb));
  const int dc = std::abs(cell_col(L, ca) - cell_col(L, cb));
  if (in_partition_a(a)) return dr == 1 && dc == 0;
  return dr == 0 && dc == 1;
}

std::vector<Coupler> ideal_couplers(int L) {
  std::vector<Coupler> out;
  out.reserve(static_cast<std::size_t>(16 * L * L + 8 * L * (L - 1)));
  for (int row = 0; row < L; ++row) {
    for (int col = 0; col < L; ++col) {
      for (int i = 0; i < 4; ++i)
        for (int j = 4; j < 8; ++j) out.push_back({qubit_id(L, row, col, i), qubit_id(L, row, col, j)});
      if (row + 1 < L)
        for (int k = 0; k < 4; ++k) out.push_back({qubit_id(L, row, col, k), qubit_id(L, row + 1, col, k)});
      if (col + 1 < L)
        for (int k = 4; k < 8; ++k) out.push_back({qubit_id(L, row, col, k), qubit_id(L, row, col + 1, k)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace chimera

ChimeraTopology ChimeraTopology::build(int L, std::span<const int> faulty_qubits,
                                       std::span<const Coupler> faulty_couplers) {
  if (L < 1 || L > kMaxChimeraSide)
    throw ParameterError("Chimera side must be in [1, 16], got " + std::to_string(L));
  ChimeraTopology topo;
  topo.L_ = L;
  const int n = kQubitsPerCell * L * L;
  topo.active_.assign(static_cast<std::size_t>(n), true);

  for (int q : faulty_qubits) {
    if (q < 0 || q >= n) throw ParameterError("faulty qubit id out of range: " + std::to_string(q));
    topo.faulty_qubits_.push_back(q);
    topo.active_[static_cast<std::size_t>(q)] = false;
  }
  std::sort(topo.faulty_qubits_.begin(), topo.faulty_qubits_.end());
  topo.faulty_qubits_.erase(std::unique(topo.faulty_qubits_.begin(), topo.faulty_qubits_.end()),
                            topo.faulty_qubits_.end());

  for (const Coupler& c : faulty_couplers) {
    const Coupler e = Coupler::make(c.u, c.v);
    if (!chimera::is_edge(L, e.u, e.v))
      throw ParameterError("faulty coupler is not a Chimera edge: (" + std::to_string(c.u) + ", " +
                           std::to_string(c.v) + ")");
    topo.faulty_couplers_.push_back(e);
  }
  std::sort(topo.faulty_couplers_.begin(), topo.faulty_couplers_.end());
  topo.faulty_couplers_.erase(std::unique(topo.faulty_couplers_.begin(), topo.faulty_couplers_.end()),
                              topo.faulty_couplers_.end());

  for (int q = 0; q < n; ++q)
    if (topo.active_[static_cast<std::size_t>(q)]) topo.qubits_.push_back(q);

  for (const Coupler& e : chimera::ideal_couplers(L)) {
    if (!topo.active_[static_cast<std::size_t>(e.u)] || !topo.active_[static_cast<std::size_t>(e.v)]) continue;
    if (std::binary_search(topo.faulty_couplers_.begin(), topo.faulty_couplers_.end(), e)) continue;
    topo.couplers_.push_back(e);
  }

  // CSR adjacency, neighbours sorted ascending.
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < topo.couplers_.size(); ++idx) {
    const Coupler& e = topo.couplers_[idx];
    adj[static_cast<std::size_t>(e.u)].push_back({e.v, idx});
    adj[static_cast<std::size_t>(e.v)].push_back({e.u, idx});
  }
  topo.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int q = 0; q < n; ++q) {
    auto& list = adj[static_cast<std::size_t>(q)];
    std::sort(list.begin(), list.end());
    topo.offsets_[static_cast<std::size_t>(q) + 1] = topo.offsets_[static_cast<std::size_t>(q)] + list.size();
    for (const auto& [nb, idx] : list) {
      topo.adjacency_.push_back(nb);
      topo.adjacency_coupler_.push_back(idx);
    }
  }
  return topo;
}

std::optional<std::size_t> ChimeraTopology::coupler_index(int a, int b) const {
  const Coupler e = Coupler::make(a, b);
  auto it = std::lower_bound(couplers_.begin(), couplers_.end(), e);
  if (it == couplers_.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - couplers_.begin());
}

std::span<const int> ChimeraTopology::neighbors(int qubit) const {
  if (!is_active(qubit)) throw ParameterError("qubit " + std::to_string(qubit) + " is not active");
  const auto q = static_cast<std::size_t>(qubit);
  return {adjacency_.data() + offsets_[q], offsets_[q + 1] - offsets_[q]};
}

std::span<const std::size_t> ChimeraTopology::incident_couplers(int qubit) const {
  if (!is_active(qubit)) throw ParameterError("qubit " + std::to_string(qubit) + " is not active");
  const auto q = static_cast<std::size_t>(qubit);
  return {adjacency_coupler_.data() + offsets_[q], offsets_[q + 1] - offsets_[q]};
}

int ChimeraTopology::intra_coupler_count(int cell) const {
  int count = 0;
  const int base = kQubitsPerCell * cell;
  for (int i = 0; i < 4; ++i)
    for (int j = 4; j < 8; ++j)
      if (coupler_index(base + i, base + j)) ++count;
  return count;
}

bool ChimeraTopology::cell_complete(int cell) const {
  const int base = kQubitsPerCell * cell;
  for (int k = 0; k < kQubitsPerCell; ++k)
    if (!is_active(base + k)) return false;
  return intra_coupler_count(cell) == 16;
}

std::vector<Coupler> inter_cell_couplers(int L, int cell_a, int cell_b) {
  if (cell_a > cell_b) std::swap(cell_a, cell_b);
  const int dr = chimera::cell_row(L, cell_b) - chimera::cell_row(L, cell_a);
  const int dc = chimera::cell_col(L, cell_b) - chimera::cell_col(L, cell_a);
  const int first = (dr == 1 && dc == 0) ? 0 : (dr == 0 && dc == 1) ? 4 : -1;
  if (first < 0) throw ParameterError("cells are not grid-adjacent");
  std::vector<Coupler> out;
  for (int k = first; k < first + 4; ++k)
    out.push_back({kQubitsPerCell * cell_a + k, kQubitsPerCell * cell_b + k});
  return out;
}

bool LogicalGraph::contains(int cell) const { return std::binary_search(cells.begin(), cells.end(), cell); }

std::vector<int> LogicalGraph::neighbors(int cell) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges) {
    if (a == cell) out.push_back(b);
    if (b == cell) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LogicalGraph logical_graph(const ChimeraTopology& topo, LogicalOptions options) {
  LogicalGraph g;
  const int L = topo.side();
  g.side = L;
  for (int cell = 0; cell < topo.num_cells(); ++cell) {
    bool qubits_ok = true;
    for (int k = 0; k < kQubitsPerCell; ++k) qubits_ok = qubits_ok && topo.is_active(kQubitsPerCell * cell + k);
    if (!qubits_ok) continue;
    const int intra = topo.intra_coupler_count(cell);
    if (intra == 16 || (options.allow_one_missing_intra && intra == 15)) g.cells.push_back(cell);
  }
  auto all_present = [&](int a, int b) {
    for (const Coupler& c : inter_cell_couplers(L, a, b))
      if (!topo.coupler_index(c.u, c.v)) return false;
    return true;
  };
  for (int cell : g.cells) {
    const int row = chimera::cell_row(L, cell), col = chimera::cell_col(L, cell);
    if (col + 1 < L && g.contains(cell + 1) && all_present(cell, cell + 1)) g.edges.push_back({cell, cell + 1});
    if (row + 1 < L && g.contains(cell + L) && all_present(cell, cell + L)) g.edges.push_back({cell, cell + L});
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace annealbench
