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
#include <cmath>
#include <numeric>

#include "annealbench/errors.hpp"
#include "annealbench/exact.hpp"
#include "annealbench/rng.hpp"

namespace annealbench::detail {

namespace {

using Matvec = std::function<void(std::span<const double>, std::span<double>)>;

void orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& basis, Eigen::Index cols) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass)
    if (cols > 0) v -= basis.leftCols(cols) * (basis.leftCols(cols).transpose() * v);
}

// One Lanczos run restricted to the complement of `locked`; returns the
// lowest `want` Ritz pairs, growing the Krylov space until they converge.
LanczosResult krylov_pass(const Matvec& matvec, std::size_t dim, int want, const Eigen::MatrixXd& locked,
                          Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  const Eigen::Index free_dim = n - locked.cols();
  if (free_dim <= 0 || want <= 0) return {};
  want = static_cast<int>(std::min<Eigen::Index>(want, free_dim));

  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = rng.normal();
  orthogonalize(start, locked, locked.cols());
  if (start.norm() < 1e-12) return {};
  start.normalize();

  Eigen::Index m = std::min<Eigen::Index>(free_dim, std::max<Eigen::Index>(2 * want + 40, 80));
  for (;;) {
    Eigen::MatrixXd Q(n, m);
    std::vector<double> alpha, beta;
    Q.col(0) = start;
    Eigen::VectorXd w(n);
    Eigen::Index built = 0;
    double last_beta = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      built = j + 1;
      matvec(std::span<const double>(Q.col(j).data(), dim), std::span<double>(w.data(), dim));
      const double a = Q.col(j).dot(w);
      alpha.push_back(a);
      orthogonalize(w, locked, locked.cols());
      orthogonalize(w, Q, j + 1);
      last_beta = w.norm();
      if (j + 1 == m) break;
      if (last_beta < 1e-12) break;  // invariant subspace
      beta.push_back(last_beta);
      Q.col(j + 1) = w / last_beta;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
    for (Eigen::Index i = 0; i < built; ++i) T(i, i) = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < built; ++i) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");

    const int got = static_cast<int>(std::min<Eigen::Index>(want, built));
    double scale = 1.0;
    for (Eigen::Index i = 0; i < built; ++i) scale = std::max(scale, std::abs(es.eigenvalues()(i)));
    bool converged = true;
    for (int c = 0; c < got; ++c)
      if (std::abs(last_beta * es.eigenvectors()(built - 1, c)) > 1e-10 * scale) converged = false;
    const bool exhausted = built < m || m == free_dim;
    if (converged || exhausted) {
      LanczosResult r;
      r.vectors = Q.leftCols(built) * es.eigenvectors().leftCols(got);
      for (int c = 0; c < got; ++c) {
        r.values.push_back(es.eigenvalues()(c));
        r.vectors.col(c).normalize();
      }
      return r;
    }
    m = std::min<Eigen::Index>(free_dim, 2 * m);
  }
}

}  // namespace

LanczosResult lanczos_lowest(const Matvec& matvec, std::size_t dim, int k, std::uint64_t seed) {
  if (k < 1 || static_cast<std::size_t>(k) > dim) throw ParameterError("Lanczos level count must lie in [1, dim]");
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<double> values;
  Eigen::MatrixXd vectors(n, 0);

  // Each pass works in the complement of everything found so far, so a
  // repeated eigenvalue that a single Krylov space cannot resolve shows up in
  // the next pass. Stop once a pass finds nothing below the current k-th level.
  for (int pass = 0; pass <= k; ++pass) {
    auto res = krylov_pass(matvec, dim, k, vectors, rng);
    if (res.values.empty()) break;
    const double ceiling =
        static_cast<int>(values.size()) >= k ? values[static_cast<std::size_t>(k - 1)] : INFINITY;
    double tol = 1e-9;
    for (double v : values) tol = std::max(tol, 1e-9 * std::abs(v));
    std::vector<Eigen::Index> keep;
    for (std::size_t c = 0; c < res.values.size(); ++c)
      if (res.values[c] <= ceiling + tol) keep.push_back(static_cast<Eigen::Index>(c));
    if (keep.empty()) break;
    const Eigen::Index old = vectors.cols();
    vectors.conservativeResize(n, old + static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
      vectors.col(old + static_cast<Eigen::Index>(i)) = res.vectors.col(keep[i]);
      values.push_back(res.values[static_cast<std::size_t>(keep[i])]);
    }
    if (vectors.cols() >= n) break;
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  const std::size_t take = std::min<std::size_t>(order.size(), static_cast<std::size_t>(k));
  LanczosResult out;
  out.vectors.resize(n, static_cast<Eigen::Index>(take));
  for (std::size_t i = 0; i < take; ++i) {
    out.values.push_back(values[order[i]]);
    out.vectors.col(static_cast<Eigen::Index>(i)) = vectors.col(static_cast<Eigen::Index>(order[i]));
  }
  if (static_cast<int>(take) < k) throw NumericalError("Lanczos did not resolve the requested levels");
  return out;
}

}  // namespace annealbench::detail
