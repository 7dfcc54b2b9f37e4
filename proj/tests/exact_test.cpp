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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "annealbench/errors.hpp"
#include "annealbench/exact.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {
namespace {

using Mat = Eigen::MatrixXd;

// H(s) from Kronecker products; bit i of the basis index is qubit i.
Mat kron_hamiltonian(const IsingInstance& inst, double A, double B) {
  const auto& q = inst.topology().qubits();
  const int n = static_cast<int>(q.size());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat X(2, 2), Z(2, 2), I = Mat::Identity(2, 2);
  X << 0, 1, 1, 0;
  Z << 1, 0, 0, -1;
  auto embed = [&](std::vector<std::pair<int, const Mat*>> ops) {
    Mat out = Mat::Ones(1, 1);
    for (int i = n - 1; i >= 0; --i) {
      const Mat* m = &I;
      for (auto& [k, op] : ops)
        if (k == i) m = op;
      Mat next(out.rows() * 2, out.cols() * 2);
      for (Eigen::Index r = 0; r < out.rows(); ++r)
        for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * *m;
      out = next;
    }
    return out;
  };
  Mat H = Mat::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    H -= A * embed({{i, &X}});
    H += B * inst.field(q[static_cast<std::size_t>(i)]).to_double() * embed({{i, &Z}});
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double J = inst.coupling(q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)]).to_double();
      if (J != 0.0) H += B * J * embed({{i, &Z}, {j, &Z}});
    }
  return H;
}

// `active` qubits of one cell, filling partition A first.
IsingInstance random_small(int active, std::uint64_t seed) {
  std::vector<int> fq;
  for (int k = 0; k < 8; ++k) {
    const bool keep = k < 4 ? k < active : k - 4 < active - 4;
    if (!keep) fq.push_back(k);
  }
  auto topo = std::make_shared<const ChimeraTopology>(ChimeraTopology::build(1, fq));
  IsingInstance inst(topo);
  Rng rng(seed);
  for (int q : topo->qubits()) inst.add_field(q, Thirds::from_numerator(static_cast<int>(rng.below(7)) - 3));
  for (const auto& c : topo->couplers()) inst.add_coupling(c.u, c.v, Thirds::from_numerator(static_cast<int>(rng.below(7)) - 3));
  return inst;
}

TEST(DenseOperator, MatchesKroneckerConstruction) {
  const auto g = gadget_hamiltonian();
  const DenseOperatorContext ctx(g, builtin_schedule("dw2kq-like"));
  for (double s : {0.0, 0.2894, 0.6, 1.0}) {
    const auto ab = ctx.schedule().evaluate(s);
    EXPECT_LT((ctx.dense(s) - kron_hamiltonian(g, ab.A, ab.B)).cwiseAbs().maxCoeff(), 1e-12) << s;
  }
}

TEST(DenseOperator, ApplyAgreesWithDense) {
  const auto inst = random_small(6, 2);
  const DenseOperatorContext ctx(inst, builtin_schedule("dw2x-like"));
  Rng rng(1);
  std::vector<double> v(ctx.dimension()), out(ctx.dimension());
  for (auto& x : v) x = rng.normal();
  ctx.apply(0.4, v, out);
  const Eigen::VectorXd ref = ctx.dense(0.4) * Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(out[i], ref(static_cast<Eigen::Index>(i)), 1e-12);
}

TEST(DenseOperator, CapsAndIndices) {
  const auto g = gadget_hamiltonian();
  EXPECT_THROW(DenseOperatorContext(g, builtin_schedule("linear"), 7), CapabilityError);
  EXPECT_THROW(DenseOperatorContext(g, builtin_schedule("linear"), 0), ParameterError);
  EXPECT_THROW(DenseOperatorContext(g, builtin_schedule("linear"), kMaxDenseCap + 1), ParameterError);
  const DenseOperatorContext ctx(g, builtin_schedule("linear"));
  EXPECT_EQ(ctx.classical_ground_indices(), std::vector<std::uint64_t>{0});
  EXPECT_DOUBLE_EQ(ctx.problem_diagonal()[0], -38.0 / 3.0);
}

TEST(Spectrum, GadgetAtEndOfAnneal) {
  const DenseOperatorContext ctx(gadget_hamiltonian(), builtin_schedule("dw2kq-like"));
  const auto sl = spectrum(ctx, 1.0, 3);
  const double B = ctx.schedule().B(1.0);
  EXPECT_NEAR(sl.eigenvalues[0], -38.0 / 3.0 * B, 1e-9);
  EXPECT_NEAR(sl.eigenvalues[1], sl.eigenvalues[2], 1e-9);
  EXPECT_NEAR(sl.hw_expectations[0], 0.0, 1e-9);
  EXPECT_NEAR(sl.hw_expectations[1], 7.0, 1e-9);
  EXPECT_NEAR(sl.hw_expectations[2], 7.0, 1e-9);
}

TEST(Spectrum, EigenvaluesMatchDirectDiagonalization) {
  const auto inst = random_small(8, 5);
  const DenseOperatorContext ctx(inst, builtin_schedule("dw2x-like"));
  for (double s : {0.1, 0.5, 0.9}) {
    const auto ab = ctx.schedule().evaluate(s);
    Eigen::SelfAdjointEigenSolver<Mat> es(kron_hamiltonian(inst, ab.A, ab.B));
    const auto sl = spectrum(ctx, s, 5);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(sl.eigenvalues[static_cast<std::size_t>(k)], es.eigenvalues()(k), 1e-9);
  }
  EXPECT_THROW(spectrum(ctx, 1.2, 2), ParameterError);
  EXPECT_THROW(spectrum(ctx, 0.5, 0), ParameterError);
  EXPECT_THROW(spectrum(ctx, 0.5, 257), ParameterError);
}

// Eleven qubits exceed the dense limit, so this exercises Lanczos.
TEST(Spectrum, LanczosPathMatchesDense) {
  // Cell 0 plus three horizontally coupled qubits of cell 1.
  std::vector<int> fq;
  for (int q = 8; q < 32; ++q)
    if (q < 12 || q > 14) fq.push_back(q);
  auto topo = std::make_shared<const ChimeraTopology>(ChimeraTopology::build(2, fq));
  IsingInstance inst(topo);
  Rng rng(3);
  for (int q : topo->qubits()) inst.add_field(q, Thirds::from_numerator(static_cast<int>(rng.below(7)) - 3));
  for (const auto& c : topo->couplers()) inst.add_coupling(c.u, c.v, Thirds::from_numerator(static_cast<int>(rng.below(7)) - 3));
  const DenseOperatorContext ctx(inst, builtin_schedule("dw2kq-like"), 14);
  ASSERT_EQ(ctx.n(), 11);
  ASSERT_GT(ctx.dimension(), kDenseDiagonalizationLimit);
  Eigen::SelfAdjointEigenSolver<Mat> es(ctx.dense(0.35));
  const auto sl = spectrum(ctx, 0.35, 4);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(sl.eigenvalues[static_cast<std::size_t>(k)], es.eigenvalues()(k), 1e-7);
}

TEST(Lanczos, ResolvesMultiplicity) {
  // diag(0, 0, 0, 1, 2, ...): a threefold ground level.
  const std::size_t dim = 40;
  auto mv = [&](std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < dim; ++i) out[i] = (i < 3 ? 0.0 : static_cast<double>(i - 2)) * in[i];
  };
  const auto r = detail::lanczos_lowest(mv, dim, 4, 1);
  ASSERT_EQ(r.values.size(), 4u);
  EXPECT_NEAR(r.values[0], 0.0, 1e-9);
  EXPECT_NEAR(r.values[1], 0.0, 1e-9);
  EXPECT_NEAR(r.values[2], 0.0, 1e-9);
  EXPECT_NEAR(r.values[3], 1.0, 1e-9);
}

TEST(MinGap, GadgetGapAndLocation) {
  const DenseOperatorContext ctx(gadget_hamiltonian(), builtin_schedule("dw2kq-like"));
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(i / 200.0);
  const auto mg = min_gap(ctx, grid);
  EXPECT_FALSE(mg.degenerate);
  EXPECT_EQ(mg.grid_gaps.size(), grid.size());
  EXPECT_LE(mg.gap, *std::min_element(mg.grid_gaps.begin(), mg.grid_gaps.end()) + 1e-12);
  const auto sl = spectrum(ctx, mg.s_star, 2);
  EXPECT_NEAR(sl.eigenvalues[1] - sl.eigenvalues[0], mg.gap, 1e-9);
  EXPECT_GT(mg.s_star, 0.1);
  EXPECT_LT(mg.s_star, 0.5);
  const std::vector<double> coarse{0.0, 0.5, 1.0};
  EXPECT_THROW(min_gap(ctx, coarse), ParameterError);
}

// Reference propagator: midpoint-frozen H with exact exponentials per step.
double propagate_oracle(const DenseOperatorContext& ctx, double t_f_us, int steps, std::uint64_t target) {
  const Eigen::Index dim = static_cast<Eigen::Index>(ctx.dimension());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  const double T = 1000.0 * t_f_us, dt = T / steps;
  for (int k = 0; k < steps; ++k) {
    Eigen::SelfAdjointEigenSolver<Mat> es(ctx.dense((k + 0.5) / steps));
    const Eigen::MatrixXcd V = es.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd phase(dim);
    for (Eigen::Index i = 0; i < dim; ++i) phase(i) = std::exp(std::complex<double>(0.0, -es.eigenvalues()(i) * dt));
    psi = V * phase.asDiagonal() * (V.adjoint() * psi);
  }
  return std::norm(psi(static_cast<Eigen::Index>(target)));
}

TEST(Evolve, MatchesExponentialPropagator) {
  const auto inst = random_small(3, 9);
  const DenseOperatorContext ctx(inst, builtin_schedule("linear"));
  const auto ground = ctx.classical_ground_indices();
  ASSERT_EQ(ground.size(), 1u);
  for (double tf : {0.0005, 0.002}) {
    const auto r = evolve(ctx, tf, 4000);
    EXPECT_NEAR(r.p_s, propagate_oracle(ctx, tf, 4000, ground[0]), 1e-5) << tf;
    EXPECT_LT(r.max_norm_drift, kNormTolerance);
  }
}

TEST(Evolve, LimitsOfAnnealTime) {
  const auto inst = random_small(3, 9);
  const DenseOperatorContext ctx(inst, builtin_schedule("linear"));
  EXPECT_NEAR(evolve(ctx, 0.0, 1000).p_s, 1.0 / 8.0, 1e-12);
  EXPECT_GT(evolve(ctx, 0.5, 200000).p_s, 0.99);
  EXPECT_THROW(evolve(ctx, -1.0, 1000), ParameterError);
  EXPECT_THROW(evolve(ctx, 1.0, 10), ParameterError);
}

TEST(Semiclassical, PotentialAtPoles) {
  const auto g = gadget_hamiltonian();
  const DenseOperatorContext ctx(g, builtin_schedule("dw2kq-like"));
  const std::vector<double> up(8, 0.0), phi(8, 0.0), x(8, M_PI / 2);
  const auto ab = ctx.schedule().evaluate(0.7);
  EXPECT_NEAR(semiclassical_potential(ctx, 0.7, up, phi), ab.B * (-38.0 / 3.0), 1e-12);
  EXPECT_NEAR(semiclassical_potential(ctx, 0.7, x, phi), -8.0 * ab.A, 1e-12);
  const std::vector<double> short_theta(3, 0.0);
  EXPECT_THROW(semiclassical_potential(ctx, 0.7, short_theta, phi), ParameterError);
}

}  // namespace
}  // namespace annealbench
