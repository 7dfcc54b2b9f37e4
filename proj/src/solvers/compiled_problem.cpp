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

#include "compiled_problem.hpp"

#include <algorithm>
#include <cstdlib>

namespace annealbench::detail {

CompiledProblem::CompiledProblem(const IsingInstance& inst) {
  const auto& topo = inst.topology();
  site = topo.qubits();
  n = static_cast<int>(site.size());
  std::vector<int> local(static_cast<std::size_t>(topo.num_sites()), -1);
  for (int i = 0; i < n; ++i) local[static_cast<std::size_t>(site[static_cast<std::size_t>(i)])] = i;

  offset.push_back(0);
  range = 0;
  for (int i = 0; i < n; ++i) {
    const int q = site[static_cast<std::size_t>(i)];
    h.push_back(inst.field(q).numerator());
    auto nbrs = topo.neighbors(q);
    auto idx = topo.incident_couplers(q);
    std::int64_t bound = std::abs(h.back());
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const std::int64_t w = inst.coupling(idx[k]).numerator();
      nbr.push_back(local[static_cast<std::size_t>(nbrs[k])]);
      J.push_back(w);
      Jd.push_back(static_cast<double>(w));
      range = std::max(range, std::abs(w));
      bound += std::abs(w);
    }
    max_delta = std::max(max_delta, 2 * bound);
    offset.push_back(nbr.size());
  }
  if (range == 0) range = 3;

  const int L = topo.side();
  for (int parity = 0; parity < 2; ++parity) {
    for (int cell = 0; cell < topo.num_cells(); ++cell) {
      if ((chimera::cell_row(L, cell) + chimera::cell_col(L, cell)) % 2 != parity) continue;
      std::vector<int> members;
      for (int k = 0; k < kQubitsPerCell; ++k) {
        const int l = local[static_cast<std::size_t>(kQubitsPerCell * cell + k)];
        if (l >= 0) members.push_back(l);
      }
      if (!members.empty()) cell_members.push_back(std::move(members));
    }
  }
}

Thirds success_threshold(const IsingInstance& inst, const SolverConfig& cfg) {
  return cfg.ground_energy ? *cfg.ground_energy : reference_ground_energy(inst);
}

AnnealRecord make_record(const IsingInstance& inst, int replica, std::uint64_t seed_used, SpinState state,
                         Thirds ground) {
  AnnealRecord rec;
  rec.replica = replica;
  rec.seed_used = seed_used;
  rec.energy = energy(inst, state);
  rec.success = rec.energy == ground;
  rec.final_state = std::move(state);
  return rec;
}

}  // namespace annealbench::detail
