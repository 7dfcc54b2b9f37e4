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

#include <omp.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "annealbench/rng.hpp"
#include "annealbench/solvers.hpp"
#include "compiled_problem.hpp"

namespace annealbench {

namespace {

using detail::CompiledProblem;

// Local fields are kept incrementally; the reference recomputes them.
class SpinSystem {
 public:
  SpinSystem(const CompiledProblem& p, Rng& rng) : p_(p), s_(static_cast<std::size_t>(p.n)), field_(s_.size()) {
    for (auto& x : s_) x = (rng.next() >> 63) ? -1 : 1;
    for (int i = 0; i < p.n; ++i) {
      std::int64_t f = p.h[static_cast<std::size_t>(i)];
      for (std::size_t k = p.offset[static_cast<std::size_t>(i)]; k < p.offset[static_cast<std::size_t>(i) + 1]; ++k)
        f += p.J[k] * s_[static_cast<std::size_t>(p.nbr[k])];
      field_[static_cast<std::size_t>(i)] = f;
    }
  }

  std::int64_t flip_cost(int i) const { return -2 * s_[static_cast<std::size_t>(i)] * field_[static_cast<std::size_t>(i)]; }

  void flip(int i) {
    const auto ii = static_cast<std::size_t>(i);
    s_[ii] = static_cast<std::int8_t>(-s_[ii]);
    for (std::size_t k = p_.offset[ii]; k < p_.offset[ii + 1]; ++k)
      field_[static_cast<std::size_t>(p_.nbr[k])] += 2 * p_.J[k] * s_[ii];
  }

  // Energy change of flipping every member of a cell; intra-cell couplings
  // are unchanged by the move.
  std::int64_t cell_flip_cost(const std::vector<int>& members, const std::vector<int>& cell_of) const {
    std::int64_t d = 0;
    for (int i : members) {
      const auto ii = static_cast<std::size_t>(i);
      std::int64_t ext = field_[ii];
      for (std::size_t k = p_.offset[ii]; k < p_.offset[ii + 1]; ++k) {
        const auto j = static_cast<std::size_t>(p_.nbr[k]);
        if (cell_of[j] == cell_of[ii]) ext -= p_.J[k] * s_[j];
      }
      d += -2 * s_[ii] * ext;
    }
    return d;
  }

  SpinState state(const ChimeraTopology& topo) const {
    SpinState out(static_cast<std::size_t>(topo.num_sites()), 0);
    for (int i = 0; i < p_.n; ++i)
      out[static_cast<std::size_t>(p_.site[static_cast<std::size_t>(i)])] = s_[static_cast<std::size_t>(i)];
    return out;
  }

 private:
  const CompiledProblem& p_;
  std::vector<std::int8_t> s_;
  std::vector<std::int64_t> field_;
};

bool metropolis(Rng& rng, double beta_delta) { return beta_delta <= 0.0 || rng.uniform() < std::exp(-beta_delta); }

template <typename Kernel>
std::vector<AnnealRecord> run_replicas(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt,
                                       Kernel&& kernel) {
  validate(cfg);
  const Thirds ground = detail::success_threshold(inst, cfg);
  const CompiledProblem problem(inst);
  std::vector<AnnealRecord> out(static_cast<std::size_t>(cfg.replicas));
  const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int r = 0; r < cfg.replicas; ++r) {
    const std::uint64_t seed = stream_seed(cfg.seed, static_cast<std::uint64_t>(r));
    Rng rng(seed);
    out[static_cast<std::size_t>(r)] = detail::make_record(inst, r, seed, kernel(problem, rng), ground);
  }
  return out;
}

SpinState anneal_sa(const IsingInstance& inst, const SolverConfig& cfg, const CompiledProblem& p, Rng& rng,
                    bool cell_moves) {
  SpinSystem sys(p, rng);
  std::vector<int> cell_of(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) cell_of[static_cast<std::size_t>(i)] = chimera::cell_of(p.site[static_cast<std::size_t>(i)]);
  const double range = static_cast<double>(p.range);
  for (long k = 1; k <= cfg.n_sweeps; ++k) {
    const double beta_eff = cfg.beta * cfg.schedule.B(detail::sweep_s(k, cfg.n_sweeps)) / range;
    for (int i = 0; i < p.n; ++i) {
      const std::int64_t d = sys.flip_cost(i);
      if (d <= 0 || rng.uniform() < std::exp(-beta_eff * static_cast<double>(d))) sys.flip(i);
    }
    if (!cell_moves) continue;
    for (const auto& members : p.cell_members) {
      const std::int64_t d = sys.cell_flip_cost(members, cell_of);
      if (d <= 0 || rng.uniform() < std::exp(-beta_eff * static_cast<double>(d)))
        for (int i : members) sys.flip(i);
    }
  }
  return sys.state(inst.topology());
}

SpinState anneal_svmc(const IsingInstance& inst, const SolverConfig& cfg, const CompiledProblem& p, Rng& rng) {
  const auto n = static_cast<std::size_t>(p.n);
  std::vector<double> c(n, std::cos(std::numbers::pi / 2)), sn(n, std::sin(std::numbers::pi / 2));
  std::vector<double> theta(n, std::numbers::pi / 2);
  const double range = static_cast<double>(p.range);
  for (long k = 1; k <= cfg.n_sweeps; ++k) {
    const auto [A, B] = cfg.schedule.evaluate(detail::sweep_s(k, cfg.n_sweeps));
    for (std::size_t i = 0; i < n; ++i) {
      const double proposal = 2.0 * std::numbers::pi * (1.0 - rng.uniform());
      const double cp = std::cos(proposal), sp = std::sin(proposal);
      double local = static_cast<double>(p.h[i]);
      for (std::size_t e = p.offset[i]; e < p.offset[i + 1]; ++e) local += p.Jd[e] * c[static_cast<std::size_t>(p.nbr[e])];
      const double dv = -A * (sp - sn[i]) + B * (cp - c[i]) * local / range;
      if (metropolis(rng, cfg.beta * dv)) {
        theta[i] = proposal;
        c[i] = cp;
        sn[i] = sp;
      }
    }
  }
  SpinState out(static_cast<std::size_t>(inst.topology().num_sites()), 0);
  for (std::size_t i = 0; i < n; ++i) out[static_cast<std::size_t>(p.site[i])] = c[i] >= 0.0 ? 1 : -1;
  return out;
}

SpinState anneal_sqa(const IsingInstance& inst, const SolverConfig& cfg, const CompiledProblem& p, Rng& rng) {
  const int M = cfg.sqa_slices;
  const int W = detail::sqa_words(M);
  const auto n = static_cast<std::size_t>(p.n);
  // Bit t of qubit i's words is 1 when slice t holds spin -1.
  std::vector<std::uint64_t> w(n * static_cast<std::size_t>(W));
  for (std::size_t i = 0; i < n; ++i)
    for (int b = 0; b < W; ++b) w[i * W + static_cast<std::size_t>(b)] = rng.next() & detail::sqa_word_mask(M, b);
  auto bit = [&](std::size_t i, int t) -> int { return (w[i * W + static_cast<std::size_t>(t >> 6)] >> (t & 63)) & 1; };

  std::vector<std::uint64_t> mask(static_cast<std::size_t>(W));
  const double range = static_cast<double>(p.range);
  for (long k = 1; k <= cfg.n_sweeps; ++k) {
    const auto [A, B] = cfg.schedule.evaluate(detail::sweep_s(k, cfg.n_sweeps));
    const double p_add = 1.0 - std::tanh(cfg.beta * A / M);
    const double factor = cfg.beta * B / (M * range);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(mask.begin(), mask.end(), 0);
      auto set = [&](int t) { mask[static_cast<std::size_t>(t >> 6)] |= std::uint64_t{1} << (t & 63); };
      const int t0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(M)));
      const int v0 = bit(i, t0);
      set(t0);
      const int g_fwd = detail::geometric_extent(rng, p_add);
      const int g_bwd = detail::geometric_extent(rng, p_add);
      int fwd = 0, bwd = 0;
      for (int t = t0; fwd < g_fwd && fwd < M - 1;) {
        t = t + 1 == M ? 0 : t + 1;
        if (bit(i, t) != v0) break;
        set(t);
        ++fwd;
      }
      for (int t = t0; bwd < g_bwd && fwd + bwd < M - 1;) {
        t = t == 0 ? M - 1 : t - 1;
        if (bit(i, t) != v0) break;
        set(t);
        ++bwd;
      }
      const int count = 1 + fwd + bwd;
      std::int64_t local = p.h[i] * count;
      for (std::size_t e = p.offset[i]; e < p.offset[i + 1]; ++e) {
        const auto j = static_cast<std::size_t>(p.nbr[e]);
        int down = 0;
        for (int b = 0; b < W; ++b) down += std::popcount(w[j * W + static_cast<std::size_t>(b)] & mask[static_cast<std::size_t>(b)]);
        local += p.J[e] * (count - 2 * down);
      }
      const std::int64_t spin = v0 ? -1 : 1;
      const std::int64_t d = -2 * spin * local;
      if (d <= 0 || rng.uniform() < std::exp(-factor * static_cast<double>(d)))
        for (int b = 0; b < W; ++b) w[i * W + static_cast<std::size_t>(b)] ^= mask[static_cast<std::size_t>(b)];
    }
  }
  const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(M)));
  SpinState out(static_cast<std::size_t>(inst.topology().num_sites()), 0);
  for (std::size_t i = 0; i < n; ++i) out[static_cast<std::size_t>(p.site[i])] = bit(i, t) ? -1 : 1;
  return out;
}

}  // namespace

std::vector<AnnealRecord> run_sa(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt) {
  return run_replicas(inst, cfg, opt,
                      [&](const CompiledProblem& p, Rng& rng) { return anneal_sa(inst, cfg, p, rng, false); });
}

std::vector<AnnealRecord> run_sac(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt) {
  return run_replicas(inst, cfg, opt,
                      [&](const CompiledProblem& p, Rng& rng) { return anneal_sa(inst, cfg, p, rng, true); });
}

std::vector<AnnealRecord> run_svmc(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt) {
  return run_replicas(inst, cfg, opt,
                      [&](const CompiledProblem& p, Rng& rng) { return anneal_svmc(inst, cfg, p, rng); });
}

std::vector<AnnealRecord> run_sqa(const IsingInstance& inst, const SolverConfig& cfg, RunOptions opt) {
  return run_replicas(inst, cfg, opt,
                      [&](const CompiledProblem& p, Rng& rng) { return anneal_sqa(inst, cfg, p, rng); });
}

}  // namespace annealbench
