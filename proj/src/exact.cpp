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

#include "annealbench/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annealbench/errors.hpp"

namespace annealbench {

DenseOperatorContext::DenseOperatorContext(const IsingInstance& inst, Schedule schedule, int cap)
    : schedule_(std::move(schedule)) {
  if (cap < 1 || cap > kMaxDenseCap)
    throw ParameterError("dense cap must lie in [1, " + std::to_string(kMaxDenseCap) + "]");
  const auto& topo = inst.topology();
  qubits_ = topo.qubits();
  n_ = static_cast<int>(qubits_.size());
  if (n_ > cap)
    throw CapabilityError("dense analysis of " + std::to_string(n_) + " qubits exceeds the cap of " +
                          std::to_string(cap));
  if (n_ == 0) throw ParameterError("instance has no active qubits");

  std::vector<int> position(static_cast<std::size_t>(topo.num_sites()), -1);
  for (int i = 0; i < n_; ++i) position[static_cast<std::size_t>(qubits_[static_cast<std::size_t>(i)])] = i;
  for (int q : qubits_) h_.push_back(inst.field(q).to_double());
  const auto& couplers = topo.couplers();
  for (std::size_t c = 0; c < couplers.size(); ++c) {
    const double J = inst.coupling(c).to_double();
    if (J == 0.0) continue;
    edges_.push_back({position[static_cast<std::size_t>(couplers[c].u)],
                      position[static_cast<std::size_t>(couplers[c].v)], J});
  }

  diag_.resize(dimension());
  for (std::uint64_t x = 0; x < dimension(); ++x) {
    auto spin = [x](int i) { return (x >> i) & 1U ? -1.0 : 1.0; };
    double e = 0.0;
    for (int i = 0; i < n_; ++i) e += h_[static_cast<std::size_t>(i)] * spin(i);
    for (const auto& edge : edges_) e += edge.J * spin(edge.i) * spin(edge.j);
    diag_[x] = e;
  }
  planted_ = inst.planted_state();
}

std::vector<std::uint64_t> DenseOperatorContext::planted_indices() const {
  if (planted_.empty()) return {};
  std::uint64_t x = 0;
  for (int i = 0; i < n_; ++i)
    if (planted_[static_cast<std::size_t>(qubits_[static_cast<std::size_t>(i)])] < 0) x |= std::uint64_t{1} << i;
  return {x};
}

std::vector<std::uint64_t> DenseOperatorContext::classical_ground_indices() const {
  const double lo = *std::min_element(diag_.begin(), diag_.end());
  const double tol = 1e-9 * std::max(1.0, std::abs(lo));
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < diag_.size(); ++x)
    if (diag_[x] <= lo + tol) out.push_back(x);
  return out;
}

namespace {

template <typename T>
void apply_impl(const DenseOperatorContext& ctx, double s, std::span<const T> in, std::span<T> out) {
  const std::size_t dim = ctx.dimension();
  if (in.size() != dim || out.size() != dim) throw ParameterError("vector length does not match 2^n");
  const auto ab = ctx.schedule().evaluate(s);
  const auto& diag = ctx.problem_diagonal();
  const int n = ctx.n();
  for (std::size_t x = 0; x < dim; ++x) {
    T flip{};
    for (int i = 0; i < n; ++i) flip += in[x ^ (std::size_t{1} << i)];
    out[x] = ab.B * diag[x] * in[x] - ab.A * flip;
  }
}

}  // namespace

void DenseOperatorContext::apply(double s, std::span<const double> in, std::span<double> out) const {
  apply_impl<double>(*this, s, in, out);
}

void DenseOperatorContext::apply(double s, std::span<const std::complex<double>> in,
                                 std::span<std::complex<double>> out) const {
  apply_impl<std::complex<double>>(*this, s, in, out);
}

Eigen::MatrixXd DenseOperatorContext::dense(double s) const {
  const auto ab = schedule_.evaluate(s);
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    H(x, x) = ab.B * diag_[static_cast<std::size_t>(x)];
    for (int i = 0; i < n_; ++i) H(x ^ (Eigen::Index{1} << i), x) -= ab.A;
  }
  return H;
}

namespace {

double cluster_tolerance(std::span<const double> values) {
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  return 1e-9 * scale;
}

// Replace each HW entry by the average over its cluster of near-equal values.
void average_clusters(std::span<const double> values, std::vector<double>& hw) {
  const double tol = cluster_tolerance(values);
  std::size_t start = 0;
  while (start < values.size()) {
    std::size_t end = start + 1;
    while (end < values.size() && values[end] - values[end - 1] <= tol) ++end;
    const double avg = std::accumulate(hw.begin() + static_cast<std::ptrdiff_t>(start),
                                       hw.begin() + static_cast<std::ptrdiff_t>(end), 0.0) /
                       static_cast<double>(end - start);
    std::fill(hw.begin() + static_cast<std::ptrdiff_t>(start), hw.begin() + static_cast<std::ptrdiff_t>(end), avg);
    start = end;
  }
}

double hw_expectation(const Eigen::Ref<const Eigen::VectorXd>& v) {
  double hw = 0.0;
  for (Eigen::Index x = 0; x < v.size(); ++x) hw += v(x) * v(x) * hamming_weight(static_cast<std::uint64_t>(x));
  return hw / v.squaredNorm();
}

}  // namespace

SpectrumSlice spectrum(const DenseOperatorContext& ctx, double s, int k) {
  if (!(s >= 0.0 && s <= 1.0)) throw ParameterError("s must lie in [0, 1]");
  const std::size_t dim = ctx.dimension();
  if (k < 1 || static_cast<std::size_t>(k) > dim) throw ParameterError("level count must lie in [1, 2^n]");
  const auto ab = ctx.schedule().evaluate(s);

  std::vector<double> values, hw;
  if (ab.A == 0.0) {
    // Diagonal: basis states are eigenvectors and HW is exact.
    const auto& diag = ctx.problem_diagonal();
    std::vector<std::uint64_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return diag[a] < diag[b]; });
    for (auto x : order) {
      values.push_back(ab.B * diag[x]);
      hw.push_back(hamming_weight(x));
    }
  } else if (dim <= kDenseDiagonalizationLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ctx.dense(s));
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c) {
      values.push_back(es.eigenvalues()(c));
      hw.push_back(hw_expectation(es.eigenvectors().col(c)));
    }
  } else {
    const int extra = static_cast<int>(std::min<std::size_t>(dim, static_cast<std::size_t>(k) + 4));
    auto res = detail::lanczos_lowest(
        [&](std::span<const double> in, std::span<double> out) { ctx.apply(s, in, out); }, dim, extra, 0x5eed);
    values = res.values;
    for (Eigen::Index c = 0; c < res.vectors.cols(); ++c) hw.push_back(hw_expectation(res.vectors.col(c)));
  }
  average_clusters(values, hw);

  SpectrumSlice slice;
  slice.s = s;
  slice.eigenvalues.assign(values.begin(), values.begin() + k);
  slice.hw_expectations.assign(hw.begin(), hw.begin() + k);
  return slice;
}

MinGapResult min_gap(const DenseOperatorContext& ctx, std::span<const double> s_grid) {
  if (s_grid.size() < 100) throw ParameterError("min_gap needs at least 100 grid points");
  if (ctx.dimension() < 2) throw ParameterError("min_gap needs at least two levels");
  MinGapResult r;
  r.grid.assign(s_grid.begin(), s_grid.end());
  std::sort(r.grid.begin(), r.grid.end());
  r.grid.erase(std::unique(r.grid.begin(), r.grid.end()), r.grid.end());
  if (r.grid.front() < 0.0 || r.grid.back() > 1.0) throw ParameterError("grid points must lie in [0, 1]");

  auto gap_at = [&](double s) {
    const auto sl = spectrum(ctx, s, 2);
    return sl.eigenvalues[1] - sl.eigenvalues[0];
  };
  bool all_degenerate = true;
  for (double s : r.grid) {
    const auto sl = spectrum(ctx, s, 2);
    const double g = sl.eigenvalues[1] - sl.eigenvalues[0];
    r.grid_gaps.push_back(g);
    if (g > cluster_tolerance(sl.eigenvalues)) all_degenerate = false;
  }
  r.degenerate = all_degenerate;
  const auto best = static_cast<std::size_t>(
      std::min_element(r.grid_gaps.begin(), r.grid_gaps.end()) - r.grid_gaps.begin());
  r.s_star = r.grid[best];
  r.gap = r.grid_gaps[best];
  if (r.degenerate) return r;

  double lo = r.grid[best == 0 ? 0 : best - 1];
  double hi = r.grid[std::min(best + 1, r.grid.size() - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = gap_at(x1), f2 = gap_at(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = gap_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = gap_at(x2);
    }
  }
  const double xm = f1 < f2 ? x1 : x2;
  const double fm = std::min(f1, f2);
  if (fm < r.gap) {
    r.gap = fm;
    r.s_star = xm;
  }
  return r;
}

EvolveResult evolve(const DenseOperatorContext& ctx, double t_f_us, int steps, int max_doublings) {
  if (!(t_f_us >= 0.0) || !std::isfinite(t_f_us)) throw ParameterError("t_f must be finite and non-negative");
  if (steps < 1000) throw ParameterError("evolve needs at least 1000 steps");
  if (max_doublings < 0) throw ParameterError("max_doublings must be non-negative");
  const std::size_t dim = ctx.dimension();
  const double T = 1000.0 * t_f_us;  // ns
  using cvec = Eigen::VectorXcd;
  const std::complex<double> minus_i_T(0.0, -T);

  auto rhs = [&](double s, const cvec& psi, cvec& out) {
    ctx.apply(s, std::span<const std::complex<double>>(psi.data(), dim),
              std::span<std::complex<double>>(out.data(), dim));
    out *= minus_i_T;
  };

  long n_steps = steps;
  for (int attempt = 0; attempt <= max_doublings; ++attempt, n_steps *= 2) {
    cvec psi = cvec::Constant(static_cast<Eigen::Index>(dim), 1.0 / std::sqrt(static_cast<double>(dim)));
    cvec k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());
    const double h = 1.0 / static_cast<double>(n_steps);
    double drift = 0.0;
    bool ok = true;
    for (long step = 0; step < n_steps; ++step) {
      const double s = static_cast<double>(step) * h;
      const double s_mid = std::min(1.0, s + 0.5 * h);
      const double s_end = std::min(1.0, s + h);
      rhs(s, psi, k1);
      tmp = psi + (0.5 * h) * k1;
      rhs(s_mid, tmp, k2);
      tmp = psi + (0.5 * h) * k2;
      rhs(s_mid, tmp, k3);
      tmp = psi + h * k3;
      rhs(s_end, tmp, k4);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      drift = std::max(drift, std::abs(psi.norm() - 1.0));
      if (drift > kNormTolerance || !std::isfinite(drift)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    EvolveResult r;
    r.max_norm_drift = drift;
    r.steps_used = static_cast<int>(n_steps);
    auto targets = ctx.planted_indices();
    const auto ground = ctx.classical_ground_indices();
    if (targets.empty() || std::find(ground.begin(), ground.end(), targets.front()) == ground.end()) targets = ground;
    for (auto x : targets) r.p_s += std::norm(psi(static_cast<Eigen::Index>(x)));
    r.state = std::move(psi);
    return r;
  }
  throw NumericalError("norm drift exceeded " + std::to_string(kNormTolerance) + " after " +
                       std::to_string(max_doublings) + " step doublings");
}

double semiclassical_potential(const DenseOperatorContext& ctx, double s, std::span<const double> theta,
                               std::span<const double> phi) {
  const auto n = static_cast<std::size_t>(ctx.n());
  if (theta.size() != n || phi.size() != n) throw ParameterError("angle vectors must have one entry per qubit");
  const auto ab = ctx.schedule().evaluate(s);
  double transverse = 0.0, problem = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    transverse += std::sin(theta[i]) * std::cos(phi[i]);
    problem += ctx.field(static_cast<int>(i)) * std::cos(theta[i]);
  }
  for (const auto& e : ctx.edges())
    problem += e.J * std::cos(theta[static_cast<std::size_t>(e.i)]) * std::cos(theta[static_cast<std::size_t>(e.j)]);
  return -ab.A * transverse + ab.B * problem;
}

}  // namespace annealbench
