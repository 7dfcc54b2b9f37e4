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

#include "annealbench/instance.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "annealbench/errors.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {

std::string Thirds::to_string() const {
  if (n_ % 3 == 0) return std::to_string(n_ / 3);
  return std::to_string(n_) + "/3";
}

std::string to_string(InstanceClass c) {
  switch (c) {
    case InstanceClass::custom: return "custom";
    case InstanceClass::gadget: return "gadget";
    case InstanceClass::hardware: return "hardware";
    case InstanceClass::logical: return "logical";
  }
  return "custom";
}

InstanceClass instance_class_from_string(const std::string& s) {
  if (s == "custom") return InstanceClass::custom;
  if (s == "gadget") return InstanceClass::gadget;
  if (s == "hardware") return InstanceClass::hardware;
  if (s == "logical") return InstanceClass::logical;
  throw ParameterError("unknown instance class: " + s);
}

IsingInstance::IsingInstance(std::shared_ptr<const ChimeraTopology> topo) : topo_(std::move(topo)) {
  if (!topo_) throw ParameterError("instance requires a topology");
  h_.assign(static_cast<std::size_t>(topo_->num_sites()), Thirds{});
  J_.assign(topo_->couplers().size(), Thirds{});
  planted_.assign(static_cast<std::size_t>(topo_->num_sites()), 0);
  for (int q : topo_->qubits()) planted_[static_cast<std::size_t>(q)] = 1;
}

Thirds IsingInstance::coupling(int a, int b) const {
  auto idx = topo_->coupler_index(a, b);
  return idx ? J_[*idx] : Thirds{};
}

void IsingInstance::add_field(int qubit, Thirds value) {
  if (!topo_->is_active(qubit)) throw ParameterError("field on inactive qubit " + std::to_string(qubit));
  h_[static_cast<std::size_t>(qubit)] += value;
}

void IsingInstance::add_coupling(int a, int b, Thirds value) {
  auto idx = topo_->coupler_index(a, b);
  if (!idx)
    throw ParameterError("coupling on inactive coupler (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  J_[*idx] += value;
}

void IsingInstance::add_term(HamiltonianTerm term) {
  for (const auto& f : term.fields) add_field(f.qubit, f.value);
  for (const auto& c : term.couplings) add_coupling(c.u, c.v, c.value);
  terms_.push_back(std::move(term));
}

void IsingInstance::set_planted_state(SpinState state) {
  if (state.size() != planted_.size()) throw ParameterError("planted state has wrong size");
  for (int q : topo_->qubits())
    if (state[static_cast<std::size_t>(q)] != 1 && state[static_cast<std::size_t>(q)] != -1)
      throw ParameterError("planted state missing spin " + std::to_string(q));
  planted_ = std::move(state);
}

Thirds IsingInstance::range() const {
  Thirds best{};
  for (Thirds j : J_) best = std::max(best, j < Thirds{} ? -j : j);
  return best;
}

bool IsingInstance::operator==(const IsingInstance& o) const {
  if (!topo_ || !o.topo_) return topo_ == o.topo_;
  if (!(*topo_ == *o.topo_) || h_ != o.h_ || J_ != o.J_ || planted_ != o.planted_) return false;
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& a = terms_[t];
    const auto& b = o.terms_[t];
    if (a.kind != b.kind || a.vertices != b.vertices || a.flipped_edge != b.flipped_edge) return false;
    if (a.fields.size() != b.fields.size() || a.couplings.size() != b.couplings.size()) return false;
    for (std::size_t i = 0; i < a.fields.size(); ++i)
      if (a.fields[i].qubit != b.fields[i].qubit || a.fields[i].value != b.fields[i].value) return false;
    for (std::size_t i = 0; i < a.couplings.size(); ++i)
      if (a.couplings[i].u != b.couplings[i].u || a.couplings[i].v != b.couplings[i].v ||
          a.couplings[i].value != b.couplings[i].value)
        return false;
  }
  return meta_.cls == o.meta_.cls && meta_.alpha == o.meta_.alpha && meta_.p == o.meta_.p &&
         meta_.seed == o.meta_.seed;
}

Thirds energy(const IsingInstance& inst, std::span<const std::int8_t> state) {
  const auto& topo = inst.topology();
  if (state.size() != static_cast<std::size_t>(topo.num_sites()))
    throw ParameterError("state size does not match topology");
  std::int64_t total = 0;
  for (int q : topo.qubits()) {
    const int s = state[static_cast<std::size_t>(q)];
    if (s != 1 && s != -1) throw ParameterError("missing spin for qubit " + std::to_string(q));
    total += inst.field(q).numerator() * s;
  }
  const auto& couplers = topo.couplers();
  for (std::size_t i = 0; i < couplers.size(); ++i) {
    const auto& c = couplers[i];
    total += inst.coupling(i).numerator() * state[static_cast<std::size_t>(c.u)] *
             state[static_cast<std::size_t>(c.v)];
  }
  return Thirds::from_numerator(total);
}

Thirds term_energy(const HamiltonianTerm& term, std::span<const std::int8_t> state) {
  std::int64_t total = 0;
  for (const auto& f : term.fields) total += f.value.numerator() * state[static_cast<std::size_t>(f.qubit)];
  for (const auto& c : term.couplings)
    total += c.value.numerator() * state[static_cast<std::size_t>(c.u)] * state[static_cast<std::size_t>(c.v)];
  return Thirds::from_numerator(total);
}

GaugeVector GaugeVector::identity(const ChimeraTopology& topo) {
  return {std::vector<std::int8_t>(topo.qubits().size(), 1)};
}

GaugeVector GaugeVector::all_flipped(const ChimeraTopology& topo) {
  return {std::vector<std::int8_t>(topo.qubits().size(), -1)};
}

GaugeVector GaugeVector::random(const ChimeraTopology& topo, std::uint64_t seed) {
  Rng rng(seed);
  GaugeVector g;
  g.signs.reserve(topo.qubits().size());
  for (std::size_t i = 0; i < topo.qubits().size(); ++i) g.signs.push_back((rng.next() >> 63) ? -1 : 1);
  return g;
}

namespace {

std::vector<std::int8_t> site_signs(const ChimeraTopology& topo, const GaugeVector& g) {
  if (g.signs.size() != topo.qubits().size())
    throw ParameterError("gauge vector has " + std::to_string(g.signs.size()) + " entries, expected " +
                         std::to_string(topo.qubits().size()));
  std::vector<std::int8_t> sign(static_cast<std::size_t>(topo.num_sites()), 1);
  for (std::size_t i = 0; i < g.signs.size(); ++i) {
    if (g.signs[i] != 1 && g.signs[i] != -1) throw ParameterError("gauge entries must be +1 or -1");
    sign[static_cast<std::size_t>(topo.qubits()[i])] = g.signs[i];
  }
  return sign;
}

}  // namespace

SpinState apply_gauge(std::span<const std::int8_t> state, const ChimeraTopology& topo, const GaugeVector& g) {
  const auto sign = site_signs(topo, g);
  if (state.size() != sign.size()) throw ParameterError("state size does not match topology");
  SpinState out(state.begin(), state.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::int8_t>(out[i] * sign[i]);
  return out;
}

IsingInstance apply_gauge(const IsingInstance& inst, const GaugeVector& g) {
  const auto& topo = inst.topology();
  const auto sign = site_signs(topo, g);
  auto at = [&](int q) { return static_cast<std::int64_t>(sign[static_cast<std::size_t>(q)]); };

  IsingInstance out(inst.topology_ptr());
  out.set_metadata(inst.metadata());
  for (const HamiltonianTerm& term : inst.decomposition()) {
    HamiltonianTerm t = term;
    for (auto& f : t.fields) f.value = f.value * at(f.qubit);
    for (auto& c : t.couplings) c.value = c.value * (at(c.u) * at(c.v));
    out.add_term(std::move(t));
  }
  // Whatever (h, J) is not covered by the decomposition carries over directly.
  for (int q : topo.qubits()) {
    Thirds rest = inst.field(q) * at(q) - out.field(q);
    if (rest != Thirds{}) out.add_field(q, rest);
  }
  for (std::size_t i = 0; i < topo.couplers().size(); ++i) {
    const auto& c = topo.couplers()[i];
    Thirds rest = inst.coupling(i) * (at(c.u) * at(c.v)) - out.coupling(i);
    if (rest != Thirds{}) out.add_coupling(c.u, c.v, rest);
  }
  out.set_planted_state(apply_gauge(inst.planted_state(), topo, g));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Gadget parameters; qubits 1..4 of the published list are partition A
// (k = 0..3), qubits 5..8 are partition B (k = 4..7). Values in thirds.
constexpr std::array<int, 8> kGadgetFieldThirds = {-3, -2, 2, -3, 1, 3, -3, 3};
constexpr std::array<std::array<int, 4>, 4> kGadgetCouplings = {{
    {+1, -1, -1, -1},
    {-1, -1, +1, -1},
    {-1, -1, -1, -1},
    {-1, -1, -1, -1},
}};

}  // namespace

HamiltonianTerm gadget_term(const ChimeraTopology& topo, int cell) {
  if (cell < 0 || cell >= topo.num_cells()) throw ParameterError("gadget cell out of range");
  HamiltonianTerm term;
  term.kind = TermKind::gadget;
  term.vertices = {cell};
  const int base = kQubitsPerCell * cell;
  for (int k = 0; k < kQubitsPerCell; ++k)
    if (topo.is_active(base + k))
      term.fields.push_back({base + k, Thirds::from_numerator(kGadgetFieldThirds[static_cast<std::size_t>(k)])});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (topo.coupler_index(base + i, base + 4 + j))
        term.couplings.push_back(
            {base + i, base + 4 + j,
             Thirds::whole(kGadgetCouplings[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])});
  return term;
}

IsingInstance gadget_hamiltonian() {
  auto topo = std::make_shared<const ChimeraTopology>(ChimeraTopology::build(1));
  IsingInstance inst(topo);
  inst.add_term(gadget_term(*topo, 0));
  inst.set_metadata({InstanceClass::gadget, 0.0, 1.0, 0});
  return inst;
}

}  // namespace annealbench
