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

#include <cmath>
#include <numbers>

#include "annealbench/rng.hpp"
#include "annealbench/solvers.hpp"
#include "compiled_problem.hpp"

namespace annealbench::reference {

namespace {

double range_of(const IsingInstance& inst) {
  const std::int64_t r = inst.range().numerator();
  return static_cast<double>(r > 0 ? r : 3);
}

std::int64_t local_field(const IsingInstance& inst, const SpinState& s, int q) {
  const auto& topo = inst.topology();
  std::int64_t f = inst.field(q).numerator();
  auto nbrs = topo.neighbors(q);
  auto idx = topo.incident_couplers(q);
  for (std::size_t k = 0; k < nbrs.size(); ++k)
    f += inst.coupling(idx[k]).numerator() * s[static_cast<std::size_t>(nbrs[k])];
  return f;
}

std::vector<std::vector<int>> cells_in_sweep_order(const ChimeraTopology& topo) {
  std::vector<std::vector<int>> cells;
  const int L = topo.side();
  for (int parity = 0; parity < 2; ++parity)
    for (int cell = 0; cell < topo.num_cells(); ++cell) {
      if ((chimera::cell_row(L, cell) + chimera::cell_col(L, cell)) % 2 != parity) continue;
      std::vector<int> members;
      for (int k = 0; k < kQubitsPerCell; ++k)
        if (topo.is_active(kQubitsPerCell * cell + k)) members.push_back(kQubitsPerCell * cell + k);
      if (!members.empty()) cells.push_back(members);
    }
  return cells;
}

template <typename Anneal>
std::vector<AnnealRecord> replicas(const IsingInstance& inst, const SolverConfig& cfg, Anneal&& anneal) {
  validate(cfg);
  const Thirds ground = detail::success_threshold(inst, cfg);
  std::vector<AnnealRecord> out;
  for (int r = 0; r < cfg.replicas; ++r) {
    const std::uint64_t seed = stream_seed(cfg.seed, static_cast<std::uint64_t>(r));
    Rng rng(seed);
    out.push_back(detail::make_record(inst, r, seed, anneal(rng), ground));
  }
  return out;
}

SpinState random_spins(const ChimeraTopology& topo, Rng& rng) {
  SpinState s(static_cast<std::size_t>(topo.num_sites()), 0);
  for (int q : topo.qubits()) s[static_cast<std::size_t>(q)] = (rng.next() >> 63) ? -1 : 1;
  return s;
}

SpinState anneal_sa(const IsingInstance& inst, const SolverConfig& cfg, Rng& rng, bool cell_moves) {
  const auto& topo = inst.topology();
  SpinState s = random_spins(topo, rng);
  const double range = range_of(inst);
  const auto cells = cells_in_sweep_order(topo);
  for (long k = 1; k <= cfg.n_sweeps; ++k) {
    const double beta_eff = cfg.beta * cfg.schedule.B(detail::sweep_s(k, cfg.n_sweeps)) / range;
    for (int q : topo.qubits()) {
      const std::int64_t d = -2 * s[static_cast<std::size_t>(q)] * local_field(inst, s, q);
      if (d <= 0 || rng.uniform() < std::exp(-beta_eff * static_cast<double>(d)))
        s[static_cast<std::size_t>(q)] = static_cast<std::int8_t>(-s[static_cast<std::size_t>(q)]);
    }
    if (!cell_moves) continue;
    for (const auto& members : cells) {
      std::int64_t d = 0;
      for (int q : members) {
        std::int64_t ext = inst.field(q).numerator();
        auto nbrs = topo.neighbors(q);
        auto idx = topo.incident_couplers(q);
        for (std::size_t e = 0; e < nbrs.size(); ++e)
          if (chimera::cell_of(nbrs[e]) != chimera::cell_of(q))
            ext += inst.coupling(idx[e]).numerator() * s[static_cast<std::size_t>(nbrs[e])];
        d += -2 * s[static_cast<std::size_t>(q)] * ext;
      }
      if (d <= 0 || rng.uniform() < std::exp(-beta_eff * static_cast<double>(d)))
        for (int q : members) s[static_cast<std::size_t>(q)] = static_cast<std::int8_t>(-s[static_cast<std::size_t>(q)]);
    }
  }
  return s;
}

SpinState anneal_svmc(const IsingInstance& inst, const SolverConfig& cfg, Rng& rng) {
  const auto& topo = inst.topology();
  const auto sites = static_cast<std::size_t>(topo.num_sites());
  std::vector<double> theta(sites, std::numbers::pi / 2);
  const double range = range_of(inst);
  for (long k = 1; k <= cfg.n_sweeps; ++k) {
    const ScheduleValue ab = cfg.schedule.evaluate(detail::sweep_s(k, cfg.n_sweeps));
    for (int q : topo.qubits()) {
      const auto qi = static_cast<std::size_t>(q);
      const double proposal = 2.0 * std::numbers::pi * (1.0 - rng.uniform());
      double local = static_cast<double>(inst.field(q).numerator());
      auto nbrs = topo.neighbors(q);
      auto idx = topo.incident_couplers(q);
      for (std::size_t e = 0; e < nbrs.size(); ++e)
        local += static_cast<double>(inst.coupling(idx[e]).numerator()) * std::cos(theta[static_cast<std::size_t>(nbrs[e])]);
      const double dv = -ab.A * (std::sin(proposal) - std::sin(theta[qi])) +
                        ab.B * (std::cos(proposal) - std::cos(theta[qi])) * local / range;
      const double x = cfg.beta * dv;
      if (x <= 0.0 || rng.uniform() < std::exp(-x)) theta[qi] = proposal;
    }
  }
  SpinState out(sites, 0);
  for (int q : topo.qubits()) out[static_cast<std::size_t>(q)] = std::cos(theta[static_cast<std::size_t>(q)]) >= 0.0 ? 1 : -1;
  return out;
}

SpinState anneal_sqa(const IsingInstance& inst, const SolverConfig& cfg, Rng& rng) {
  const auto& topo = inst.topology();
  const int M = cfg.sqa_slices;
  const auto sites = static_cast<std::size_t>(topo.num_sites());
  // slices[t][q]
  std::vector<SpinState> slices(static_cast<std::size_t>(M), SpinState(sites, 0));
  for (int q : topo.qubits())
    for (int b = 0; b < detail::sqa_words(M); ++b) {
      const std::uint64_t bits = rng.next() & detail::sqa_word_mask(M, b);
      for (int t = 64 * b; t < std::min(M, 64 * (b + 1)); ++t)
        slices[static_cast<std::size_t>(t)][static_cast<std::size_t>(q)] = ((bits >> (t - 64 * b)) & 1) ? -1 : 1;
    }
  auto at = [&](int t, int q) -> std::int8_t& { return slices[static_cast<std::size_t>(t)][static_cast<std::size_t>(q)]; };
  const double range = range_of(inst);
  for (long k = 1; k <= cfg.n_sweeps; ++k) {
    const ScheduleValue ab = cfg.schedule.evaluate(detail::sweep_s(k, cfg.n_sweeps));
    const double p_add = 1.0 - std::tanh(cfg.beta * ab.A / M);
    const double factor = cfg.beta * ab.B / (M * range);
    for (int q : topo.qubits()) {
      const int t0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(M)));
      const std::int8_t v = at(t0, q);
      // Time-like Wolff cluster: bonds to equal neighbours in imaginary time
      // are accepted with probability p_add, forward first, then backward.
      const int g_fwd = detail::geometric_extent(rng, p_add);
      const int g_bwd = detail::geometric_extent(rng, p_add);
      std::vector<int> cluster{t0};
      for (int t = (t0 + 1) % M, grown = 0; grown < g_fwd && static_cast<int>(cluster.size()) < M && at(t, q) == v;
           t = (t + 1) % M, ++grown)
        cluster.push_back(t);
      for (int t = (t0 + M - 1) % M, grown = 0;
           grown < g_bwd && static_cast<int>(cluster.size()) < M && at(t, q) == v; t = (t + M - 1) % M, ++grown)
        cluster.push_back(t);
      std::int64_t d = 0;
      auto nbrs = topo.neighbors(q);
      auto idx = topo.incident_couplers(q);
      for (int t : cluster) {
        std::int64_t f = inst.field(q).numerator();
        for (std::size_t e = 0; e < nbrs.size(); ++e) f += inst.coupling(idx[e]).numerator() * at(t, nbrs[e]);
        d += -2 * v * f;
      }
      if (d <= 0 || rng.uniform() < std::exp(-factor * static_cast<double>(d)))
        for (int t : cluster) at(t, q) = static_cast<std::int8_t>(-v);
    }
  }
  const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(M)));
  return slices[static_cast<std::size_t>(t)];
}

}  // namespace

std::vector<AnnealRecord> run_sa(const IsingInstance& inst, const SolverConfig& cfg) {
  return replicas(inst, cfg, [&](Rng& rng) { return anneal_sa(inst, cfg, rng, false); });
}

std::vector<AnnealRecord> run_sac(const IsingInstance& inst, const SolverConfig& cfg) {
  return replicas(inst, cfg, [&](Rng& rng) { return anneal_sa(inst, cfg, rng, true); });
}

std::vector<AnnealRecord> run_svmc(const IsingInstance& inst, const SolverConfig& cfg) {
  return replicas(inst, cfg, [&](Rng& rng) { return anneal_svmc(inst, cfg, rng); });
}

std::vector<AnnealRecord> run_sqa(const IsingInstance& inst, const SolverConfig& cfg) {
  return replicas(inst, cfg, [&](Rng& rng) { return anneal_sqa(inst, cfg, rng); });
}

}  // namespace annealbench::reference
