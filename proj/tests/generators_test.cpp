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

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include "annealbench/errors.hpp"
#include "annealbench/instance.hpp"
#include "annealbench/io.hpp"

namespace annealbench {
namespace {

std::shared_ptr<const ChimeraTopology> ideal(int L) {
  return std::make_shared<const ChimeraTopology>(ChimeraTopology::build(L));
}

int count_kind(const IsingInstance& inst, TermKind k) {
  return static_cast<int>(std::count_if(inst.decomposition().begin(), inst.decomposition().end(),
                                        [k](const auto& t) { return t.kind == k; }));
}

// Each term's minimum, recomputed here by enumeration when small enough.
Thirds enumerate_min(const HamiltonianTerm& t) {
  std::set<int> spins;
  for (const auto& f : t.fields) spins.insert(f.qubit);
  for (const auto& c : t.couplings) spins.insert(c.u), spins.insert(c.v);
  std::vector<int> ids(spins.begin(), spins.end());
  const int n = static_cast<int>(ids.size());
  if (n > 20) return term_minimum(t);
  std::int64_t best = INT64_MAX;
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    auto s = [&](int q) {
      const auto i = std::lower_bound(ids.begin(), ids.end(), q) - ids.begin();
      return (x >> i) & 1u ? -1 : 1;
    };
    std::int64_t e = 0;
    for (const auto& f : t.fields) e += f.value.numerator() * s(f.qubit);
    for (const auto& c : t.couplings) e += c.value.numerator() * s(c.u) * s(c.v);
    best = std::min(best, e);
  }
  return Thirds::from_numerator(best);
}

void expect_certified(const IsingInstance& inst) {
  Thirds sum;
  for (const auto& t : inst.decomposition()) {
    const Thirds m = enumerate_min(t);
    EXPECT_EQ(term_energy(t, inst.planted_state()), m);
    sum += m;
  }
  EXPECT_EQ(energy(inst, inst.planted_state()), sum);
  const auto cert = frustration_certificate(inst);
  EXPECT_TRUE(cert.certified);
  EXPECT_EQ(cert.ground_energy, sum);
}

TEST(HardwarePlanted, CountsAndStructure) {
  for (int L : {2, 4}) {
    const auto inst = gen_hardware_planted(ideal(L), kHardwareAlpha, kGadgetFraction, 7);
    EXPECT_EQ(count_kind(inst, TermKind::loop), static_cast<int>(std::floor(kHardwareAlpha * 8 * L * L)));
    EXPECT_EQ(count_kind(inst, TermKind::gadget), static_cast<int>(std::floor(kGadgetFraction * L * L)));
    for (const auto& t : inst.decomposition()) {
      if (t.kind != TermKind::loop) continue;
      ASSERT_TRUE(t.flipped_edge.has_value());
      std::set<int> cells;
      for (int q : t.vertices) cells.insert(chimera::cell_of(q));
      EXPECT_GE(cells.size(), 2u);
      int positive = 0;
      for (const auto& c : t.couplings) positive += c.value > Thirds();
      EXPECT_EQ(positive, 1);
      EXPECT_EQ(t.couplings.size(), t.vertices.size());
    }
    for (Thirds j : inst.couplings()) EXPECT_LE(std::abs(j.numerator()), 9);
    expect_certified(inst);
  }
}

TEST(HardwarePlanted, DeterministicPerSeed) {
  const auto a = gen_hardware_planted(ideal(3), kHardwareAlpha, kGadgetFraction, 5);
  const auto b = gen_hardware_planted(ideal(3), kHardwareAlpha, kGadgetFraction, 5);
  const auto c = gen_hardware_planted(ideal(3), kHardwareAlpha, kGadgetFraction, 6);
  EXPECT_EQ(instance_to_json(a), instance_to_json(b));
  EXPECT_NE(instance_to_json(a), instance_to_json(c));
}

TEST(HardwarePlanted, GadgetsOnlyInCompleteCells) {
  const auto topo = load_fault_mask(std::string(ANNEALBENCH_DATA_DIR) + "/topologies/dw2kq_like_faults.json");
  const auto inst = gen_hardware_planted(std::make_shared<const ChimeraTopology>(topo), kHardwareAlpha, 0.3, 2);
  for (const auto& t : inst.decomposition())
    if (t.kind == TermKind::gadget) EXPECT_TRUE(inst.topology().cell_complete(t.vertices.front()));
  EXPECT_TRUE(frustration_certificate(inst).certified);
}

TEST(HardwarePlanted, InvalidParameters) {
  EXPECT_THROW(gen_hardware_planted(ideal(2), -0.1, 0.1, 0), ParameterError);
  EXPECT_THROW(gen_hardware_planted(ideal(2), 0.3, 1.5, 0), ParameterError);
  EXPECT_THROW(gen_hardware_planted(nullptr, 0.3, 0.1, 0), ParameterError);
}

TEST(HardwarePlanted, ExhaustedBudgetReportsAttempts) {
  GeneratorOptions opt;
  opt.retry_budget = 1;
  opt.instance_restarts = 2;
  try {
    // Far more loops than a 2 x 2 graph can host without saturating.
    gen_hardware_planted(ideal(2), 50.0, 0.0, 1, opt);
    FAIL() << "expected GenerationError";
  } catch (const GenerationError& e) {
    EXPECT_GE(e.attempts(), 3);
    EXPECT_LE(e.attempts(), 3);
  }
}

TEST(LogicalPlanted, CountsAndStructure) {
  for (int L : {3, 4}) {
    const auto inst = gen_logical_planted(ideal(L), kLogicalAlpha, kGadgetFraction, 3);
    EXPECT_EQ(count_kind(inst, TermKind::loop), static_cast<int>(std::floor(kLogicalAlpha * L * L)));
    EXPECT_EQ(count_kind(inst, TermKind::gadget), static_cast<int>(std::floor(kGadgetFraction * L * L)));
    EXPECT_EQ(count_kind(inst, TermKind::ferromagnet), L * L);
    for (const auto& t : inst.decomposition())
      if (t.kind == TermKind::loop) EXPECT_GT(t.vertices.size(), 4u);
    expect_certified(inst);
  }
}

// A 2 x 2 logical grid has only 4-cycles, which the generator rejects.
TEST(LogicalPlanted, TwoByTwoHasNoAdmissibleLoop) {
  EXPECT_THROW(gen_logical_planted(ideal(2), kLogicalAlpha, kGadgetFraction, 0), GenerationError);
}

TEST(LogicalPlanted, SucceedsAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = gen_logical_planted(ideal(6), kLogicalAlpha, kGadgetFraction, seed);
    EXPECT_TRUE(frustration_certificate(inst).certified) << seed;
  }
}

TEST(LogicalPlanted, OnFaultyDevice) {
  const auto topo = load_fault_mask(std::string(ANNEALBENCH_DATA_DIR) + "/topologies/dw2kq_like_faults.json");
  const auto shared = std::make_shared<const ChimeraTopology>(topo);
  // The faulty logical graph has fewer edges per cell than the grid; at the
  // nominal density the saturated edges leave no admissible loops.
  const double alpha = 0.5;
  const auto inst = gen_logical_planted(shared, alpha, kGadgetFraction, 1);
  const auto g = logical_graph(topo);
  EXPECT_EQ(count_kind(inst, TermKind::loop), static_cast<int>(std::floor(alpha * static_cast<double>(g.cells.size()))));
  EXPECT_TRUE(frustration_certificate(inst).certified);
  GeneratorOptions quick;
  quick.instance_restarts = 2;
  EXPECT_THROW(gen_logical_planted(shared, kLogicalAlpha, kGadgetFraction, 1, quick), GenerationError);
}

}  // namespace
}  // namespace annealbench
