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

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <cstdint>
#include <span>
#include <vector>

#include "annealbench/instance.hpp"
#include "annealbench/schedule.hpp"

namespace annealbench {

inline constexpr int kDefaultDenseCap = 14;
// Largest cap a context accepts at all.
inline constexpr int kMaxDenseCap = 20;
// Dimensions up to this are diagonalized densely; larger ones use Lanczos.
inline constexpr std::size_t kDenseDiagonalizationLimit = 1024;

// H(s) = A(s) H_X + B(s) H_P on the active qubits of an instance.
// H_X = -sum sigma^x, H_P = sum h sigma^z + sum J sigma^z sigma^z.
// Basis index bit i is qubit qubits()[i]; bit value 0 is spin +1.
class DenseOperatorContext {
 public:
  // Throws CapabilityError when the instance has more than `cap` qubits and
  // ParameterError for cap outside [1, kMaxDenseCap].
  DenseOperatorContext(const IsingInstance& inst, Schedule schedule, int cap = kDefaultDenseCap);

  int n() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_; }
  const std::vector<int>& qubits() const noexcept { return qubits_; }
  const Schedule& schedule() const noexcept { return schedule_; }

  // Diagonal of H_P in the computational basis (dimensionless).
  const std::vector<double>& problem_diagonal() const noexcept { return diag_; }
  double field(int i) const { return h_[static_cast<std::size_t>(i)]; }
  // Couplings between basis positions (i, j), i < j.
  struct Edge {
    int i = 0;
    int j = 0;
    double J = 0.0;
  };
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Basis states whose spins form the planted state (empty if none is set)
  // and the classical ground states of H_P.
  std::vector<std::uint64_t> planted_indices() const;
  std::vector<std::uint64_t> classical_ground_indices() const;

  // out = H(s) in, real and complex variants.
  void apply(double s, std::span<const double> in, std::span<double> out) const;
  void apply(double s, std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  Eigen::MatrixXd dense(double s) const;

 private:
  int n_ = 0;
  std::vector<int> qubits_;
  std::vector<double> h_;
  std::vector<Edge> edges_;
  std::vector<double> diag_;
  SpinState planted_;
  Schedule schedule_;
};

// Number of qubits with spin -1 in basis state x.
inline int hamming_weight(std::uint64_t x) { return __builtin_popcountll(x); }

struct SpectrumSlice {
  double s = 0.0;
  std::vector<double> eigenvalues;      // GHz, non-decreasing
  std::vector<double> hw_expectations;  // per eigenvalue, cluster-averaged
};

// Lowest k levels of H(s). Eigenvalues closer than 1e-9 max(1, |E|max) form
// one cluster whose members all report the cluster's average <HW>. Throws
// ParameterError for s outside [0, 1] or k outside [1, 2^n].
SpectrumSlice spectrum(const DenseOperatorContext& ctx, double s, int k);

struct MinGapResult {
  double s_star = 0.0;
  double gap = 0.0;  // GHz
  // The two lowest levels coincide at every grid point.
  bool degenerate = false;
  std::vector<double> grid;
  std::vector<double> grid_gaps;
};

// Grid minimum of E1 - E0 followed by golden-section refinement on the
// bracketing interval. Throws ParameterError for fewer than 100 grid points
// or points outside [0, 1].
MinGapResult min_gap(const DenseOperatorContext& ctx, std::span<const double> s_grid);

struct EvolveResult {
  Eigen::VectorXcd state;
  double p_s = 0.0;
  double max_norm_drift = 0.0;
  int steps_used = 0;
};

inline constexpr double kNormTolerance = 1e-8;

// Integrates i dpsi/dt = H(t / t_f) psi from the uniform superposition with
// fixed-step RK4, time in ns (t_f given in microseconds, H in GHz, hbar = 1).
// The step count is doubled and the integration restarted while the norm
// drifts by more than kNormTolerance; NumericalError once max_doublings is
// exhausted. p_S is the weight on the planted state, or on all classical
// ground states when the planted state is not one of them. Throws ParameterError for
// t_f < 0 or steps < 1000.
EvolveResult evolve(const DenseOperatorContext& ctx, double t_f_us, int steps, int max_doublings = 8);

// -A(s) sum sin(theta) cos(phi) + B(s) (sum h cos(theta) + sum J cos cos),
// angles in qubits() order. Throws ParameterError on length mismatch.
double semiclassical_potential(const DenseOperatorContext& ctx, double s, std::span<const double> theta,
                               std::span<const double> phi);

namespace detail {

struct LanczosResult {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // columns
};

// Lowest k eigenpairs of a real symmetric operator given as a mat-vec, with
// full reorthogonalization and deflated restarts to expose multiplicities.
LanczosResult lanczos_lowest(const std::function<void(std::span<const double>, std::span<double>)>& matvec,
                             std::size_t dim, int k, std::uint64_t seed);

}  // namespace detail

}  // namespace annealbench
