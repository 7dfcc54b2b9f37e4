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

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "annealbench/errors.hpp"
#include "annealbench/instance.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {

namespace {

void check_params(double alpha, double p) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
}

[[noreturn]] void stall(const char* what, long attempts) {
  throw GenerationError(std::string(what) + ": no acceptable loop", attempts);
}

// Self-avoiding walk closed at the first revisit; the tail before the revisited
// vertex is dropped. Immediate backtracking is excluded. `next_options(prev,
// cur, out)` fills the admissible successors of cur. Returns an empty vector on
// a dead end.
template <typename Options>
std::vector<int> random_loop(int start, int num_vertices, Rng& rng, Options&& next_options,
                             std::vector<int>& pos) {
  std::vector<int> chain{start};
  pos[static_cast<std::size_t>(start)] = 0;
  std::vector<int> options;
  int prev = -1;
  int cur = start;
  std::vector<int> loop;
  for (;;) {
    options.clear();
    next_options(prev, cur, options);
    if (options.empty()) break;
    const int nxt = options[rng.below(options.size())];
    const int at = pos[static_cast<std::size_t>(nxt)];
    if (at >= 0) {
      loop.assign(chain.begin() + at, chain.end());
      break;
    }
    pos[static_cast<std::size_t>(nxt)] = static_cast<int>(chain.size());
    chain.push_back(nxt);
    prev = cur;
    cur = nxt;
    if (static_cast<int>(chain.size()) > num_vertices) break;
  }
  for (int v : chain) pos[static_cast<std::size_t>(v)] = -1;
  return loop;
}

Thirds abs(Thirds t) { return t < Thirds{} ? -t : t; }

constexpr Thirds kOne = Thirds::whole(1);
constexpr Thirds kSaturated = Thirds::whole(3);

// Sample `count` distinct entries of `pool` uniformly (partial Fisher-Yates).
std::vector<int> sample_cells(std::vector<int> pool, int count, Rng& rng) {
  for (int i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

Thirds planted_energy(const HamiltonianTerm& term) {
  Thirds e{};
  for (const auto& f : term.fields) e += f.value;
  for (const auto& c : term.couplings) e += c.value;
  return e;
}

SpinState all_up(const ChimeraTopology& topo) {
  SpinState s(static_cast<std::size_t>(topo.num_sites()), 0);
  for (int q : topo.qubits()) s[static_cast<std::size_t>(q)] = 1;
  return s;
}

IsingInstance hardware_attempt(const std::shared_ptr<const ChimeraTopology>& topo, double alpha, double p,
                               std::uint64_t seed, const GeneratorOptions& options, Rng& rng) {
  const int L = topo->side();
  const auto n_loops = static_cast<long>(std::floor(alpha * kQubitsPerCell * L * L));
  const auto n_gadgets = static_cast<int>(std::floor(p * L * L));

  IsingInstance inst(topo);
  const auto& qubits = topo->qubits();
  if (n_loops > 0 && topo->couplers().empty()) stall("hardware-planted", 0);

  std::vector<int> pos(static_cast<std::size_t>(topo->num_sites()), -1);
  auto step = [&](int prev, int cur, std::vector<int>& out) {
    for (int nb : topo->neighbors(cur))
      if (nb != prev) out.push_back(nb);
  };

  for (long l = 0; l < n_loops; ++l) {
    long attempts = 0;
    for (;;) {
      if (attempts >= options.retry_budget) stall("hardware-planted", attempts);
      ++attempts;
      const int start = qubits[rng.below(qubits.size())];
      std::vector<int> loop = random_loop(start, topo->num_sites(), rng, step, pos);
      if (loop.size() < 3) continue;

      std::vector<int> cells;
      for (int q : loop) cells.push_back(chimera::cell_of(q));
      std::sort(cells.begin(), cells.end());
      if (std::unique(cells.begin(), cells.end()) - cells.begin() < 2) continue;

      bool saturated = false;
      for (std::size_t i = 0; i < loop.size() && !saturated; ++i)
        saturated = abs(inst.coupling(loop[i], loop[(i + 1) % loop.size()])) >= kSaturated;
      if (saturated) continue;

      HamiltonianTerm term;
      term.kind = TermKind::loop;
      term.vertices = loop;
      const std::size_t flip = rng.below(loop.size());
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const Coupler e = Coupler::make(loop[i], loop[(i + 1) % loop.size()]);
        term.couplings.push_back({e.u, e.v, i == flip ? kOne : -kOne});
        if (i == flip) term.flipped_edge = e;
      }
      inst.add_term(std::move(term));
      break;
    }
  }

  std::vector<int> complete;
  for (int c = 0; c < topo->num_cells(); ++c)
    if (topo->cell_complete(c)) complete.push_back(c);
  if (n_gadgets > static_cast<int>(complete.size()))
    throw GenerationError("hardware-planted: " + std::to_string(n_gadgets) + " gadgets requested but only " +
                              std::to_string(complete.size()) + " complete cells",
                          0);
  for (int c : sample_cells(complete, n_gadgets, rng)) inst.add_term(gadget_term(*topo, c));

  inst.set_planted_state(all_up(*topo));
  inst.set_metadata({InstanceClass::hardware, alpha, p, seed});
  return inst;
}

// Strands of a logical loop. Each logical edge is four parallel physical
// couplers, one per in-cell index. Where the loop turns inside a cell, one of
// the four perfect matchings A_k -- B_{(k+d) mod 4} of the cell's K4,4 is
// borrowed from the cell's -3 ferromagnet (at -1 per coupler) to carry the
// four strands across the turn. When the matching shifts cancel mod 4 around
// the loop, every strand closes on itself into a simple cycle that crosses
// the flipped logical edge exactly once.
struct LogicalLoopBuilder {
  const ChimeraTopology& topo;
  int L;
  // Times each intra-cell coupler has been borrowed, keyed by coupler index.
  std::vector<int> borrowed;

  explicit LogicalLoopBuilder(const ChimeraTopology& t)
      : topo(t), L(t.side()), borrowed(t.couplers().size(), 0) {}

  std::array<Coupler, 4> matching(int cell, int d) const {
    std::array<Coupler, 4> out;
    const int base = kQubitsPerCell * cell;
    for (int k = 0; k < 4; ++k) out[static_cast<std::size_t>(k)] = {base + k, base + 4 + (k + d) % 4};
    return out;
  }

  bool matching_available(int cell, int d) const {
    for (const Coupler& c : matching(cell, d)) {
      auto idx = topo.coupler_index(c.u, c.v);
      if (!idx || borrowed[*idx] >= 3) return false;
    }
    return true;
  }

  bool vertical(int a, int b) const { return std::abs(a - b) == L; }

  // Picks a matching for every turn with shifts cancelling mod 4, uniformly
  // among feasible choices step by step. Empty optional if none exists.
  std::optional<std::vector<int>> assign(const std::vector<int>& turn_cells, const std::vector<int>& signs,
                                         Rng& rng) const {
    const std::size_t r = turn_cells.size();
    // feasible[i][m]: turns i.. can contribute residue m.
    std::vector<std::array<bool, 4>> feasible(r + 1, std::array<bool, 4>{});
    feasible[r][0] = true;
    std::vector<std::array<bool, 4>> avail(r);
    for (std::size_t i = r; i-- > 0;) {
      for (int d = 0; d < 4; ++d) avail[i][static_cast<std::size_t>(d)] = matching_available(turn_cells[i], d);
      for (int m = 0; m < 4; ++m)
        for (int d = 0; d < 4; ++d)
          if (avail[i][static_cast<std::size_t>(d)] &&
              feasible[i + 1][static_cast<std::size_t>(((m - signs[i] * d) % 4 + 4) % 4)])
            feasible[i][static_cast<std::size_t>(m)] = true;
    }
    if (!feasible[0][0]) return std::nullopt;
    std::vector<int> choice(r);
    int need = 0;
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<int> ok;
      for (int d = 0; d < 4; ++d)
        if (avail[i][static_cast<std::size_t>(d)] &&
            feasible[i + 1][static_cast<std::size_t>(((need - signs[i] * d) % 4 + 4) % 4)])
          ok.push_back(d);
      choice[i] = ok[rng.below(ok.size())];
      need = ((need - signs[i] * choice[i]) % 4 + 4) % 4;
    }
    return choice;
  }
};

IsingInstance logical_attempt(const std::shared_ptr<const ChimeraTopology>& topo, double alpha, double p,
                              std::uint64_t seed, const GeneratorOptions& options, Rng& rng) {
  const LogicalGraph graph = logical_graph(*topo, options.logical);
  const int L = topo->side();
  const int n_cells = static_cast<int>(graph.cells.size());
  const auto n_loops = static_cast<long>(std::floor(alpha * n_cells));
  const auto n_gadgets = static_cast<int>(std::floor(p * n_cells));

  IsingInstance inst(topo);

  // Logical adjacency with edge indices, and the accumulated logical coupling.
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(static_cast<std::size_t>(topo->num_cells()));
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [a, b] = graph.edges[e];
    adj[static_cast<std::size_t>(a)].push_back({b, e});
    adj[static_cast<std::size_t>(b)].push_back({a, e});
  }
  auto edge_index = [&](int a, int b) {
    for (const auto& [nb, e] : adj[static_cast<std::size_t>(a)])
      if (nb == b) return e;
    throw ParameterError("cells are not joined by a logical edge");
  };
  std::vector<Thirds> logical_J(graph.edges.size());

  // Only edges whose logical coupling is not yet saturated can be walked.
  auto step = [&](int prev, int cur, std::vector<int>& out) {
    for (const auto& [nb, e] : adj[static_cast<std::size_t>(cur)])
      if (nb != prev && abs(logical_J[e]) < kSaturated) out.push_back(nb);
  };

  LogicalLoopBuilder builder(*topo);
  std::vector<int> pos(static_cast<std::size_t>(topo->num_cells()), -1);

  for (long l = 0; l < n_loops; ++l) {
    long attempts = 0;
    for (;;) {
      if (attempts >= options.retry_budget || graph.cells.empty()) stall("logical-planted", attempts);
      ++attempts;
      const int start = graph.cells[rng.below(graph.cells.size())];
      std::vector<int> loop = random_loop(start, topo->num_cells(), rng, step, pos);
      if (loop.size() <= 4) continue;

      const std::size_t m = loop.size();
      std::vector<int> turn_cells, signs;
      for (std::size_t i = 0; i < m; ++i) {
        const int prev = loop[(i + m - 1) % m], cur = loop[i], next = loop[(i + 1) % m];
        const bool in_v = builder.vertical(prev, cur), out_v = builder.vertical(cur, next);
        if (in_v == out_v) continue;
        turn_cells.push_back(cur);
        signs.push_back(in_v ? +1 : -1);
      }
      auto choice = builder.assign(turn_cells, signs, rng);
      if (!choice) continue;

      HamiltonianTerm term;
      term.kind = TermKind::loop;
      term.vertices = loop;
      const std::size_t flip = rng.below(m);
      for (std::size_t i = 0; i < m; ++i) {
        const int a = loop[i], b = loop[(i + 1) % m];
        const Thirds value = i == flip ? kOne : -kOne;
        if (i == flip) term.flipped_edge = Coupler::make(a, b);
        logical_J[edge_index(a, b)] += value;
        for (const Coupler& c : inter_cell_couplers(L, a, b)) term.couplings.push_back({c.u, c.v, value});
      }
      for (std::size_t t = 0; t < turn_cells.size(); ++t) {
        for (const Coupler& c : builder.matching(turn_cells[t], (*choice)[t])) {
          term.couplings.push_back({c.u, c.v, -kOne});
          ++builder.borrowed[*topo->coupler_index(c.u, c.v)];
        }
      }
      inst.add_term(std::move(term));
      break;
    }
  }

  // What remains of each cell's -3 ferromagnet after the loops' borrowing.
  for (int cell : graph.cells) {
    HamiltonianTerm term;
    term.kind = TermKind::ferromagnet;
    term.vertices = {cell};
    const int base = kQubitsPerCell * cell;
    for (int i = 0; i < 4; ++i)
      for (int j = 4; j < 8; ++j) {
        auto idx = topo->coupler_index(base + i, base + j);
        if (!idx) continue;
        const Thirds value = Thirds::whole(builder.borrowed[*idx] - 3);
        if (value != Thirds{}) term.couplings.push_back({base + i, base + j, value});
      }
    if (!term.couplings.empty()) inst.add_term(std::move(term));
  }

  // A cell missing a coupler only hosts a gadget if the truncated gadget still
  // has the planted state among its ground states.
  std::vector<int> eligible;
  for (int cell : graph.cells) {
    if (topo->cell_complete(cell)) {
      eligible.push_back(cell);
      continue;
    }
    const HamiltonianTerm g = gadget_term(*topo, cell);
    if (term_minimum(g) == planted_energy(g)) eligible.push_back(cell);
  }
  if (n_gadgets > static_cast<int>(eligible.size()))
    throw GenerationError("logical-planted: " + std::to_string(n_gadgets) + " gadgets requested but only " +
                              std::to_string(eligible.size()) + " eligible cells",
                          0);
  for (int c : sample_cells(eligible, n_gadgets, rng)) inst.add_term(gadget_term(*topo, c));

  inst.set_planted_state(all_up(*topo));
  inst.set_metadata({InstanceClass::logical, alpha, p, seed});
  return inst;
}

// A stalled build starts over from an empty instance, continuing the same
// random stream, up to options.instance_restarts times.
template <typename Attempt>
IsingInstance with_restarts(const char* what, std::uint64_t seed, const GeneratorOptions& options, Attempt&& attempt) {
  Rng rng(seed);
  long total = 0;
  for (int r = 0;; ++r) {
    try {
      return attempt(rng);
    } catch (const GenerationError& e) {
      // Zero attempts marks a structural shortage, which no restart can fix.
      if (e.attempts() == 0) throw;
      total += e.attempts();
      if (r >= options.instance_restarts)
        throw GenerationError(std::string(what) + ": no acceptable loop in " + std::to_string(r + 1) + " builds", total);
    }
  }
}

}  // namespace

IsingInstance gen_hardware_planted(std::shared_ptr<const ChimeraTopology> topo, double alpha, double p,
                                   std::uint64_t seed, const GeneratorOptions& options) {
  check_params(alpha, p);
  if (!topo) throw ParameterError("instance requires a topology");
  return with_restarts("hardware-planted", seed, options,
                       [&](Rng& rng) { return hardware_attempt(topo, alpha, p, seed, options, rng); });
}

IsingInstance gen_logical_planted(std::shared_ptr<const ChimeraTopology> topo, double alpha, double p,
                                  std::uint64_t seed, const GeneratorOptions& options) {
  check_params(alpha, p);
  if (!topo) throw ParameterError("instance requires a topology");
  return with_restarts("logical-planted", seed, options,
                       [&](Rng& rng) { return logical_attempt(topo, alpha, p, seed, options, rng); });
}

}  // namespace annealbench
