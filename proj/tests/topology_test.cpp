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
#include <set>
#include <vector>

#include "annealbench/errors.hpp"
#include "annealbench/io.hpp"
#include "annealbench/topology.hpp"

namespace annealbench {
namespace {

// Edge test from coordinates alone, independent of the library's helpers.
bool oracle_edge(int L, int a, int b) {
  const int ca = a / 8, cb = b / 8, ka = a % 8, kb = b % 8;
  const int ra = ca / L, cola = ca % L, rb = cb / L, colb = cb % L;
  if (ca == cb) return (ka < 4) != (kb < 4);
  if (ka != kb) return false;
  if (ka < 4) return cola == colb && std::abs(ra - rb) == 1;
  return ra == rb && std::abs(cola - colb) == 1;
}

TEST(Chimera, EdgeCountMatchesClosedForm) {
  for (int L = 1; L <= kMaxChimeraSide; ++L) {
    const auto edges = chimera::ideal_couplers(L);
    EXPECT_EQ(static_cast<int>(edges.size()), 16 * L * L + 8 * L * (L - 1)) << "L=" << L;
    EXPECT_TRUE(std::is_sorted(edges.begin(), edges.end()));
  }
}

TEST(Chimera, IsEdgeAgreesWithCoordinateOracle) {
  for (int L : {1, 2, 3}) {
    const int n = 8 * L * L;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) EXPECT_EQ(chimera::is_edge(L, a, b), a != b && oracle_edge(L, a, b));
  }
}

TEST(Chimera, DegreeAtMostSix) {
  const auto topo = ChimeraTopology::build(5);
  for (int q : topo.qubits()) {
    EXPECT_LE(topo.neighbors(q).size(), 6u);
    EXPECT_GE(topo.neighbors(q).size(), 5u);
  }
}

TEST(Chimera, NeighborsAndIncidentCouplersAreParallel) {
  const std::vector<int> fq{3, 17};
  const std::vector<Coupler> fc{Coupler::make(8, 12)};
  const auto topo = ChimeraTopology::build(3, fq, fc);
  for (int q : topo.qubits()) {
    const auto nb = topo.neighbors(q);
    const auto inc = topo.incident_couplers(q);
    ASSERT_EQ(nb.size(), inc.size());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      EXPECT_TRUE(topo.is_active(nb[i]));
      EXPECT_EQ(topo.couplers()[inc[i]], Coupler::make(q, nb[i]));
    }
  }
  EXPECT_FALSE(topo.is_active(3));
  EXPECT_FALSE(topo.coupler_index(8, 12).has_value());
  EXPECT_FALSE(topo.coupler_index(3, 4).has_value());
  EXPECT_TRUE(topo.coupler_index(0, 4).has_value());
  EXPECT_THROW(topo.neighbors(3), ParameterError);
}

TEST(Chimera, FaultsRemoveIncidentCouplers) {
  const std::vector<int> fq{0};
  const auto topo = ChimeraTopology::build(2, fq);
  EXPECT_EQ(topo.qubits().size(), 31u);
  // Qubit 0 has four intra-cell and one vertical neighbour at L = 2.
  EXPECT_EQ(topo.couplers().size(), chimera::ideal_couplers(2).size() - 5);
  EXPECT_FALSE(topo.cell_complete(0));
  EXPECT_TRUE(topo.cell_complete(1));
  EXPECT_EQ(topo.intra_coupler_count(0), 12);
}

TEST(Chimera, RejectsInvalidArguments) {
  EXPECT_THROW(ChimeraTopology::build(0), ParameterError);
  EXPECT_THROW(ChimeraTopology::build(17), ParameterError);
  const std::vector<int> bad_q{32};
  EXPECT_THROW(ChimeraTopology::build(2, bad_q), ParameterError);
  const std::vector<Coupler> bad_c{Coupler::make(0, 1)};
  EXPECT_THROW(ChimeraTopology::build(2, {}, bad_c), ParameterError);
}

TEST(LogicalGraph, IdealIsSquareGrid) {
  for (int L : {1, 2, 4, 7}) {
    const auto g = logical_graph(ChimeraTopology::build(L));
    EXPECT_EQ(static_cast<int>(g.cells.size()), L * L);
    EXPECT_EQ(static_cast<int>(g.edges.size()), 2 * L * (L - 1));
  }
}

TEST(LogicalGraph, BrokenCellAndBrokenLinkDropOut) {
  // Qubit 8 * 4 + 1 sits in the centre cell of a 3 x 3 grid.
  const std::vector<int> fq{33};
  const auto g = logical_graph(ChimeraTopology::build(3, fq));
  EXPECT_EQ(g.cells.size(), 8u);
  EXPECT_FALSE(g.contains(4));
  EXPECT_EQ(g.edges.size(), 8u);

  // One inter-cell coupler between cells 0 and 1 removes that logical edge.
  const std::vector<Coupler> fc{Coupler::make(4, 12)};
  const auto h = logical_graph(ChimeraTopology::build(2, {}, fc));
  EXPECT_EQ(h.cells.size(), 4u);
  EXPECT_EQ(h.edges.size(), 3u);
  const auto nb = h.neighbors(0);
  EXPECT_EQ(std::set<int>(nb.begin(), nb.end()), std::set<int>{2});
}

TEST(LogicalGraph, OneMissingIntraCouplerOption) {
  const std::vector<Coupler> fc{Coupler::make(0, 4)};
  const auto topo = ChimeraTopology::build(2, {}, fc);
  EXPECT_EQ(logical_graph(topo).cells.size(), 3u);
  EXPECT_EQ(logical_graph(topo, {.allow_one_missing_intra = true}).cells.size(), 4u);
}

TEST(LogicalGraph, InterCellCouplersAreEdges) {
  const int L = 4;
  for (int a = 0; a < L * L; ++a)
    for (int b : {a + 1, a + L}) {
      if (b >= L * L || (b == a + 1 && b % L == 0)) continue;
      const auto cs = inter_cell_couplers(L, a, b);
      ASSERT_EQ(cs.size(), 4u);
      for (const auto& c : cs) EXPECT_TRUE(chimera::is_edge(L, c.u, c.v));
    }
}

TEST(FaultMask, BundledDeviceMask) {
  const auto topo = load_fault_mask(std::string(ANNEALBENCH_DATA_DIR) + "/topologies/dw2kq_like_faults.json");
  EXPECT_EQ(topo.side(), 16);
  EXPECT_EQ(topo.qubits().size(), 2048u - 21u);
  EXPECT_EQ(topo.couplers().size(), 5874u);
  for (const auto& c : topo.couplers()) {
    EXPECT_TRUE(topo.is_active(c.u));
    EXPECT_TRUE(topo.is_active(c.v));
  }
}

}  // namespace
}  // namespace annealbench
