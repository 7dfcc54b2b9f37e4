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
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "annealbench/errors.hpp"
#include "annealbench/instance.hpp"

namespace annealbench {

namespace {

// Ising model on local indices 0..n-1 with integer (thirds) weights.
struct LocalModel {
  std::vector<std::int64_t> h;
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj;  // merged couplings

  int size() const { return static_cast<int>(h.size()); }
};

// Minimum over all 2^n assignments by Gray-code traversal.
std::int64_t enumerate_minimum(const LocalModel& m) {
  const int n = m.size();
  std::vector<std::int8_t> s(static_cast<std::size_t>(n), 1);
  std::int64_t e = 0;
  for (int i = 0; i < n; ++i) {
    e += m.h[static_cast<std::size_t>(i)];
    for (const auto& [j, w] : m.adj[static_cast<std::size_t>(i)])
      if (j > i) e += w;
  }
  std::int64_t best = e;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto i = static_cast<std::size_t>(std::countr_zero(k));
    std::int64_t local = m.h[i];
    for (const auto& [j, w] : m.adj[i]) local += w * s[static_cast<std::size_t>(j)];
    e -= 2 * s[i] * local;
    s[i] = static_cast<std::int8_t>(-s[i]);
    best = std::min(best, e);
  }
  return best;
}

// Exact minimum of a component whose vertices all have degree <= 2 (a simple
// path or cycle), by min-plus transfer along the chain. Empty optional if the
// component has another shape.
std::optional<std::int64_t> chain_minimum(const LocalModel& m) {
  const int n = m.size();
  int start = 0;
  int ends = 0;
  for (int i = 0; i < n; ++i) {
    const auto deg = m.adj[static_cast<std::size_t>(i)].size();
    if (deg > 2) return std::nullopt;
    if (deg < 2) {
      if (ends == 0) start = i;
      ++ends;
    }
  }
  const bool cycle = ends == 0;
  if (!cycle && ends != 2 && n > 1) return std::nullopt;

  // Visiting order.
  std::vector<int> order{start};
  std::vector<std::int64_t> weight;  // weight[t] couples order[t] and order[t+1]
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  seen[static_cast<std::size_t>(start)] = true;
  std::int64_t closing = 0;
  for (;;) {
    const int cur = order.back();
    bool advanced = false;
    for (const auto& [j, w] : m.adj[static_cast<std::size_t>(cur)]) {
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        order.push_back(j);
        weight.push_back(w);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  if (cycle && n > 2) {
    for (const auto& [j, w] : m.adj[static_cast<std::size_t>(order.back())])
      if (j == start) closing = w;
  }

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::int64_t best = kInf;
  const int first_choices = cycle ? 2 : 1;
  for (int f = 0; f < first_choices; ++f) {
    // cost[x]: best energy of the prefix with the current spin = (x ? -1 : +1).
    std::array<std::int64_t, 2> cost{kInf, kInf};
    auto spin = [](int x) { return x ? -1 : 1; };
    const std::int64_t h0 = m.h[static_cast<std::size_t>(order[0])];
    if (cycle) {
      cost[static_cast<std::size_t>(f)] = h0 * spin(f);
    } else {
      cost = {h0, -h0};
    }
    for (std::size_t t = 1; t < order.size(); ++t) {
      const std::int64_t ht = m.h[static_cast<std::size_t>(order[t])];
      std::array<std::int64_t, 2> next{kInf, kInf};
      for (int x = 0; x < 2; ++x) {
        if (cost[static_cast<std::size_t>(x)] >= kInf) continue;
        for (int y = 0; y < 2; ++y) {
          const std::int64_t c =
              cost[static_cast<std::size_t>(x)] + weight[t - 1] * spin(x) * spin(y) + ht * spin(y);
          next[static_cast<std::size_t>(y)] = std::min(next[static_cast<std::size_t>(y)], c);
        }
      }
      cost = next;
    }
    for (int y = 0; y < 2; ++y) {
      if (cost[static_cast<std::size_t>(y)] >= kInf) continue;
      const std::int64_t c = cost[static_cast<std::size_t>(y)] + (cycle ? closing * spin(f) * spin(y) : 0);
      best = std::min(best, c);
    }
  }
  return best;
}

// Splits a set of field/coupling entries into connected local models.
std::vector<LocalModel> components(const std::vector<FieldEntry>& fields,
                                   const std::vector<CouplingEntry>& couplings) {
  std::map<int, int> local;
  auto id = [&](int q) {
    auto [it, inserted] = local.emplace(q, static_cast<int>(local.size()));
    return it->second;
  };
  for (const auto& f : fields) id(f.qubit);
  for (const auto& c : couplings) {
    id(c.u);
    id(c.v);
  }
  const int n = static_cast<int>(local.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  std::vector<std::int64_t> h(static_cast<std::size_t>(n), 0);
  std::map<std::pair<int, int>, std::int64_t> J;
  for (const auto& f : fields) h[static_cast<std::size_t>(local[f.qubit])] += f.value.numerator();
  for (const auto& c : couplings) {
    int a = local[c.u], b = local[c.v];
    if (a == b) throw ParameterError("self-coupling in term");
    if (a > b) std::swap(a, b);
    J[{a, b}] += c.value.numerator();
    parent[static_cast<std::size_t>(find(a))] = find(b);
  }

  std::map<int, int> comp_of_root;
  std::vector<int> index_in_comp(static_cast<std::size_t>(n));
  std::vector<LocalModel> out;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    auto [it, inserted] = comp_of_root.emplace(r, static_cast<int>(out.size()));
    if (inserted) out.emplace_back();
    LocalModel& m = out[static_cast<std::size_t>(it->second)];
    index_in_comp[static_cast<std::size_t>(i)] = m.size();
    m.h.push_back(h[static_cast<std::size_t>(i)]);
    m.adj.emplace_back();
  }
  for (const auto& [edge, w] : J) {
    if (w == 0) continue;
    const auto [a, b] = edge;
    LocalModel& m = out[static_cast<std::size_t>(comp_of_root[find(a)])];
    const int la = index_in_comp[static_cast<std::size_t>(a)], lb = index_in_comp[static_cast<std::size_t>(b)];
    m.adj[static_cast<std::size_t>(la)].push_back({lb, w});
    m.adj[static_cast<std::size_t>(lb)].push_back({la, w});
  }
  return out;
}

// Components this small are always enumerated, even when they are chains.
constexpr int kAlwaysEnumerate = 16;

std::int64_t component_minimum(const LocalModel& m) {
  if (m.size() <= kAlwaysEnumerate) return enumerate_minimum(m);
  if (auto chain = chain_minimum(m)) return *chain;
  if (m.size() <= kMaxEnumeratedSpins) return enumerate_minimum(m);
  throw CapabilityError("term component with " + std::to_string(m.size()) +
                        " spins is neither enumerable nor a simple path or cycle");
}

}  // namespace

Thirds term_minimum(const HamiltonianTerm& term) {
  std::int64_t total = 0;
  for (const LocalModel& m : components(term.fields, term.couplings)) total += component_minimum(m);
  return Thirds::from_numerator(total);
}

Certificate frustration_certificate(const IsingInstance& inst) {
  const auto& terms = inst.decomposition();
  if (terms.empty()) throw DataError("instance has no term decomposition");
  const auto& topo = inst.topology();
  const auto& planted = inst.planted_state();

  Certificate cert;
  cert.certified = true;
  std::vector<Thirds> h(static_cast<std::size_t>(topo.num_sites()));
  std::vector<Thirds> J(topo.couplers().size());
  for (const HamiltonianTerm& term : terms) {
    TermCertificate tc;
    tc.minimum = term_minimum(term);
    tc.planted = term_energy(term, planted);
    if (tc.planted != tc.minimum) cert.certified = false;
    cert.ground_energy += tc.minimum;
    cert.terms.push_back(tc);
    for (const auto& f : term.fields) {
      if (!topo.is_active(f.qubit)) throw DataError("term field on inactive qubit");
      h[static_cast<std::size_t>(f.qubit)] += f.value;
    }
    for (const auto& c : term.couplings) {
      auto idx = topo.coupler_index(c.u, c.v);
      if (!idx) throw DataError("term coupling on inactive coupler");
      J[*idx] += c.value;
    }
  }
  if (h != inst.fields() || J != inst.couplings()) cert.certified = false;
  return cert;
}

Thirds brute_force_ground_energy(const IsingInstance& inst) {
  const auto& topo = inst.topology();
  if (inst.size() > kMaxEnumeratedSpins)
    throw CapabilityError("exhaustive search limited to " + std::to_string(kMaxEnumeratedSpins) + " spins, got " +
                          std::to_string(inst.size()));
  std::vector<FieldEntry> fields;
  std::vector<CouplingEntry> couplings;
  for (int q : topo.qubits()) fields.push_back({q, inst.field(q)});
  for (std::size_t i = 0; i < topo.couplers().size(); ++i)
    couplings.push_back({topo.couplers()[i].u, topo.couplers()[i].v, inst.coupling(i)});
  std::int64_t total = 0;
  for (const LocalModel& m : components(fields, couplings)) total += enumerate_minimum(m);
  return Thirds::from_numerator(total);
}

Thirds reference_ground_energy(const IsingInstance& inst) {
  if (!inst.decomposition().empty()) {
    const Certificate cert = frustration_certificate(inst);
    if (cert.certified) return cert.ground_energy;
  }
  if (inst.size() <= kMaxEnumeratedSpins) return brute_force_ground_energy(inst);
  throw CapabilityError("no certified ground energy and too many spins for exhaustive search");
}

}  // namespace annealbench
