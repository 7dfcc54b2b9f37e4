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

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annealbench/topology.hpp"

namespace annealbench {

// Exact rational with denominator 3. Every field and coupling produced by the
// generators is a multiple of 1/3, so energies are exact integers of thirds.
class Thirds {
 public:
  constexpr Thirds() = default;
  static constexpr Thirds from_numerator(std::int64_t n) { return Thirds(n); }
  static constexpr Thirds whole(std::int64_t v) { return Thirds(3 * v); }

  constexpr std::int64_t numerator() const { return n_; }
  constexpr double to_double() const { return static_cast<double>(n_) / 3.0; }
  std::string to_string() const;  // "-38/3", "4", "2/3"

  constexpr Thirds operator-() const { return Thirds(-n_); }
  constexpr Thirds& operator+=(Thirds o) { n_ += o.n_; return *this; }
  constexpr Thirds& operator-=(Thirds o) { n_ -= o.n_; return *this; }
  friend constexpr Thirds operator+(Thirds a, Thirds b) { return a += b; }
  friend constexpr Thirds operator-(Thirds a, Thirds b) { return a -= b; }
  friend constexpr Thirds operator*(Thirds a, std::int64_t k) { return Thirds(a.n_ * k); }
  friend constexpr Thirds operator*(std::int64_t k, Thirds a) { return Thirds(a.n_ * k); }
  constexpr auto operator<=>(const Thirds&) const = default;

 private:
  explicit constexpr Thirds(std::int64_t n) : n_(n) {}
  std::int64_t n_ = 0;
};

// +1 for |0>, -1 for |1>. Indexed by site id (size 8L^2); 0 marks "unset".
using SpinState = std::vector<std::int8_t>;

enum class TermKind { loop, gadget, ferromagnet };

struct FieldEntry {
  int qubit = 0;
  Thirds value;
};

struct CouplingEntry {
  int u = 0;
  int v = 0;
  Thirds value;
};

// One summand of a planted Hamiltonian. The planted state minimizes every
// term separately, which certifies it as a global minimum of their sum.
struct HamiltonianTerm {
  TermKind kind = TermKind::loop;
  // Loop terms: the cycle in visiting order (physical qubits for hardware
  // loops, cell ids for logical loops). Gadget/ferromagnet terms: the cell.
  std::vector<int> vertices;
  // Loop terms: the edge whose coupling was flipped antiferromagnetic.
  std::optional<Coupler> flipped_edge;
  std::vector<FieldEntry> fields;
  std::vector<CouplingEntry> couplings;
};

enum class InstanceClass { custom, gadget, hardware, logical };

std::string to_string(InstanceClass c);
InstanceClass instance_class_from_string(const std::string& s);

struct InstanceMetadata {
  InstanceClass cls = InstanceClass::custom;
  double alpha = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;
};

// Local fields h and couplings J on a Chimera topology, with the planted state
// and the term decomposition that certifies it.
class IsingInstance {
 public:
  IsingInstance() = default;
  explicit IsingInstance(std::shared_ptr<const ChimeraTopology> topo);

  const ChimeraTopology& topology() const { return *topo_; }
  const std::shared_ptr<const ChimeraTopology>& topology_ptr() const { return topo_; }

  Thirds field(int qubit) const { return h_.at(static_cast<std::size_t>(qubit)); }
  Thirds coupling(std::size_t coupler_idx) const { return J_.at(coupler_idx); }
  // Zero for absent couplers.
  Thirds coupling(int a, int b) const;
  const std::vector<Thirds>& fields() const { return h_; }
  const std::vector<Thirds>& couplings() const { return J_; }

  // Throws ParameterError for inactive qubits / couplers.
  void add_field(int qubit, Thirds value);
  void add_coupling(int a, int b, Thirds value);

  // Adds the term's fields and couplings and records it in the decomposition.
  void add_term(HamiltonianTerm term);

  const SpinState& planted_state() const { return planted_; }
  void set_planted_state(SpinState state);
  const std::vector<HamiltonianTerm>& decomposition() const { return terms_; }

  const InstanceMetadata& metadata() const { return meta_; }
  void set_metadata(InstanceMetadata meta) { meta_ = meta; }

  // max |J| over couplers.
  Thirds range() const;
  // Number of active qubits.
  int size() const { return static_cast<int>(topo_->qubits().size()); }

  bool operator==(const IsingInstance& o) const;

 private:
  std::shared_ptr<const ChimeraTopology> topo_;
  std::vector<Thirds> h_;
  std::vector<Thirds> J_;
  SpinState planted_;
  std::vector<HamiltonianTerm> terms_;
  InstanceMetadata meta_;
};

// sum h_i s_i + sum J_ij s_i s_j over active qubits/couplers. Throws
// ParameterError if any active qubit is unset.
Thirds energy(const IsingInstance& inst, std::span<const std::int8_t> state);

// Energy of a single term restricted to `state`.
Thirds term_energy(const HamiltonianTerm& term, std::span<const std::int8_t> state);

// Spin-reversal transform, one sign per active qubit in topology().qubits() order.
struct GaugeVector {
  std::vector<std::int8_t> signs;

  static GaugeVector identity(const ChimeraTopology& topo);
  static GaugeVector all_flipped(const ChimeraTopology& topo);
  static GaugeVector random(const ChimeraTopology& topo, std::uint64_t seed);
};

// h'_i = g_i h_i, J'_ij = g_i g_j J_ij; planted state and terms transformed
// accordingly. Throws ParameterError on size mismatch.
IsingInstance apply_gauge(const IsingInstance& inst, const GaugeVector& g);
SpinState apply_gauge(std::span<const std::int8_t> state, const ChimeraTopology& topo, const GaugeVector& g);

// ---------------------------------------------------------------------------
// Construction

// The fixed 8-qubit K4,4 tunneling gadget on a single fault-free cell.
IsingInstance gadget_hamiltonian();

// Gadget term placed in `cell`; entries touching inactive qubits or couplers
// are dropped.
HamiltonianTerm gadget_term(const ChimeraTopology& topo, int cell);

struct GeneratorOptions {
  // Rejected walks allowed per accepted loop before giving up.
  long retry_budget = 100000;
  // Fresh builds of the whole instance after a stalled loop.
  int instance_restarts = 50;
  LogicalOptions logical;
};

inline constexpr double kHardwareAlpha = 0.35;
inline constexpr double kLogicalAlpha = 0.65;
inline constexpr double kGadgetFraction = 0.1;

// floor(alpha * 8L^2) frustrated loops on the hardware graph, then gadgets in
// floor(p * L^2) distinct complete cells.
IsingInstance gen_hardware_planted(std::shared_ptr<const ChimeraTopology> topo, double alpha, double p,
                                   std::uint64_t seed, const GeneratorOptions& options = {});

// floor(alpha * cells) frustrated loops on the logical graph embedded with
// -3 intra-cell ferromagnets, then gadgets in floor(p * cells) logical cells.
IsingInstance gen_logical_planted(std::shared_ptr<const ChimeraTopology> topo, double alpha, double p,
                                  std::uint64_t seed, const GeneratorOptions& options = {});

// ---------------------------------------------------------------------------
// Certification

inline constexpr int kMaxEnumeratedSpins = 24;

struct TermCertificate {
  Thirds minimum;
  Thirds planted;
};

struct Certificate {
  bool certified = false;
  Thirds ground_energy;
  std::vector<TermCertificate> terms;
};

// Exact minimum of a term over all assignments of its spins. Connected
// components are minimized independently; components up to 24 spins are
// enumerated, larger ones must be simple paths or cycles (solved exactly by
// transfer matrices). Throws CapabilityError otherwise.
Thirds term_minimum(const HamiltonianTerm& term);

// Certified iff the planted state attains every term's minimum and the terms
// sum to the instance's (h, J). Throws DataError without a decomposition.
Certificate frustration_certificate(const IsingInstance& inst);

// Exhaustive ground energy over the active qubits (at most 24).
Thirds brute_force_ground_energy(const IsingInstance& inst);

// Ground energy used to score solver runs: the certificate's bound when it
// certifies, else exhaustive enumeration for small instances. Throws
// CapabilityError if neither applies.
Thirds reference_ground_energy(const IsingInstance& inst);

}  // namespace annealbench
