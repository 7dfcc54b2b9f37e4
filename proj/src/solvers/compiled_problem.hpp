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

#include <climits>
#include <cmath>
#include <cstdint>
#include <vector>

#include "annealbench/instance.hpp"
#include "annealbench/rng.hpp"
#include "annealbench/solvers.hpp"

namespace annealbench::detail {

// Flat view of an instance over active qubits, renumbered 0..n-1 in
// ascending qubit id (cell-major, partition A before B within a cell).
struct CompiledProblem {
  int n = 0;
  std::vector<int> site;                 // local -> qubit id
  std::vector<std::int64_t> h;           // thirds
  std::vector<std::size_t> offset;       // CSR, size n + 1
  std::vector<int> nbr;
  std::vector<std::int64_t> J;           // thirds
  std::vector<double> Jd;                // J as double
  std::int64_t range = 3;                // max |J| in thirds; 3 (unit) if all zero
  std::int64_t max_delta = 0;            // bound on single-flip |dE| in thirds

  // Cells with at least one active qubit, in sweep order: (row + col) even
  // first, then odd, ascending within each class.
  std::vector<std::vector<int>> cell_members;

  explicit CompiledProblem(const IsingInstance& inst);
};

// Shared by the kernels and the reference path.
Thirds success_threshold(const IsingInstance& inst, const SolverConfig& cfg);
AnnealRecord make_record(const IsingInstance& inst, int replica, std::uint64_t seed_used, SpinState state,
                         Thirds ground);

inline double sweep_s(long k, long n_sweeps) { return static_cast<double>(k) / static_cast<double>(n_sweeps); }

inline int sqa_words(int slices) { return (slices + 63) / 64; }

// Bit mask of the low `slices` bits of word w.
inline std::uint64_t sqa_word_mask(int slices, int w) {
  const int bits = slices - 64 * w;
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

// Number of consecutive accepted bonds before the first rejection when each
// bond is accepted with probability p. One uniform draw.
inline int geometric_extent(Rng& rng, double p) {
  const double u = 1.0 - rng.uniform();  // (0, 1]
  if (p >= 1.0) return INT_MAX;
  if (p <= 0.0) return 0;
  const double g = std::floor(std::log(u) / std::log(p));
  return g >= static_cast<double>(INT_MAX) ? INT_MAX : static_cast<int>(g);
}

}  // namespace annealbench::detail
