// Copyright 2026 The qcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcausal/gate_equiv.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace qcausal {

namespace {

std::vector<Index> layout_tail_dims(const SpaceLayout &layout) {
  std::vector<Index> dims(layout.alphabets.begin(), layout.alphabets.end());
  for (int l = 0; l < layout.parties; ++l) dims.push_back(layout.flag_dim);
  return dims;
}

COperator lab_matrix(const ProtocolSpec &spec, int party, int setting) {
  return kron(spec.measurement(party, setting), flag_shift(spec.layout.flag_dim));
}

SparseState apply_gates(const std::vector<LocalGate> &gates, const FactorSpace &space, SparseState s) {
  for (const auto &g : gates) s = apply(g, space, s);
  return s;
}

// Re-indexes a sparse state from one space into another by a digit map.
template <typename Map>
SparseState reindex(const SparseState &s, Map map) {
  SparseState out;
  for (const auto &[i, v] : s) out.emplace(map(i), v);
  return out;
}

double sparse_deviation(const SparseState &a, const SparseState &b) {
  double dev = 0.0;
  for (const auto &[i, v] : a) {
    auto it = b.find(i);
    dev = std::max(dev, std::abs(v - (it == b.end() ? cplx(0.0) : it->second)));
  }
  for (const auto &[i, v] : b) {
    if (!a.count(i)) dev = std::max(dev, std::abs(v));
  }
  return dev;
}

COperator dense_from_gates(const std::vector<LocalGate> &gates, const FactorSpace &space, const char *what) {
  check_dense_capacity(space.total(), space.total(), what);
  COperator m = COperator::Identity(space.total(), space.total());
  for (const auto &g : gates) apply(g, space, m);
  return m;
}

}  // namespace

FactorSpace individual_space(const SpaceLayout &layout) {
  std::vector<Index> dims{2, layout.system_dim};
  for (Index d : layout_tail_dims(layout)) dims.push_back(d);
  return FactorSpace(dims);
}

COperator control_prep(const SpaceLayout &layout, int party) {
  if (party < 1 || party > layout.parties) throw std::out_of_range("party out of range");
  std::vector<int> perm(layout.control_dim());
  for (int c = 0; c < layout.control_dim(); ++c) perm[c] = c;
  std::swap(perm[0], perm[party]);
  COperator w = COperator::Zero(layout.control_dim(), layout.control_dim());
  for (int c = 0; c < layout.control_dim(); ++c) w(perm[c], c) = 1.0;
  return w;
}

LocalGate individual_gate_local(const ProtocolSpec &spec, int party, int setting) {
  const int n = spec.parties();
  return LocalGate{{1, 1 + party, 1 + n + party}, lab_matrix(spec, party, setting), {{0, 1}}};
}

COperator individual_gate(const ProtocolSpec &spec, int party, int setting) {
  return dense_from_gates({individual_gate_local(spec, party, setting)}, individual_space(spec.layout),
                          "individual_gate");
}

FactorSpace individual_from_V_space(const SpaceLayout &layout) {
  std::vector<Index> dims{2, layout.system_dim, layout.control_dim()};
  for (Index d : layout_tail_dims(layout)) dims.push_back(d);
  return FactorSpace(dims);
}

std::vector<LocalGate> individual_from_V_gates(const ProtocolSpec &spec, int party, const SettingVector &x) {
  const COperator w = control_prep(spec.layout, party);
  std::vector<LocalGate> gates{LocalGate{{2}, w, {{0, 1}}}};
  for (LocalGate g : lab_activation_gates(spec, x)) {
    for (int &f : g.targets) ++f;
    for (auto &c : g.controls) ++c.first;
    gates.push_back(std::move(g));
  }
  gates.push_back(LocalGate{{2}, w.adjoint(), {{0, 1}}});
  return gates;
}

COperator individual_from_V(const ProtocolSpec &spec, int party, const SettingVector &x) {
  return dense_from_gates(individual_from_V_gates(spec, party, x), individual_from_V_space(spec.layout),
                          "individual_from_V");
}

FactorSpace V_from_individuals_space(const SpaceLayout &layout) {
  std::vector<Index> dims = layout.space().dims();
  for (int l = 0; l < layout.parties; ++l) dims.push_back(2);
  return FactorSpace(dims);
}

std::vector<LocalGate> V_from_individuals_gates(const ProtocolSpec &spec, const SettingVector &x) {
  spec.check_settings(x);
  const auto &layout = spec.layout;
  const int n = spec.parties();
  auto ancilla = [n](int l) { return 2 * n + 1 + l; };
  std::vector<LocalGate> gates;
  for (int l = 1; l <= n; ++l) {
    gates.push_back(LocalGate{{ancilla(l)}, gate_x(), {{SpaceLayout::control_factor(), l}}});
  }
  for (int l = 1; l <= n; ++l) {
    gates.push_back(LocalGate{{SpaceLayout::system_factor(), layout.result_factor(l), layout.flag_factor(l)},
                              lab_matrix(spec, l, x[l]),
                              {{ancilla(l), 1}}});
  }
  for (int l = n; l >= 1; --l) {
    gates.push_back(LocalGate{{ancilla(l)}, gate_x(), {{SpaceLayout::control_factor(), l}}});
  }
  return gates;
}

COperator V_from_individuals(const ProtocolSpec &spec, const SettingVector &x) {
  return dense_from_gates(V_from_individuals_gates(spec, x), V_from_individuals_space(spec.layout),
                          "V_from_individuals");
}

double individual_from_V_deviation(const ProtocolSpec &spec, int party, const SettingVector &x) {
  spec.check_settings(x);
  const FactorSpace small = individual_space(spec.layout);
  const FactorSpace big = individual_from_V_space(spec.layout);
  const auto composite = individual_from_V_gates(spec, party, x);
  const LocalGate single = individual_gate_local(spec, party, x[party]);
  // Inserting control digit 0 after (c_l, s).
  const Index inner = small.stride(1);
  const Index dc = spec.layout.control_dim();
  auto lift = [inner, dc](Index i) { return (i / inner) * (inner * dc) + i % inner; };
  double dev = 0.0;
  for (Index j = 0; j < small.total(); ++j) {
    const SparseState basis{{j, cplx(1.0)}};
    const SparseState expected = reindex(apply(single, small, basis), lift);
    const SparseState got = apply_gates(composite, big, SparseState{{lift(j), cplx(1.0)}});
    dev = std::max(dev, sparse_deviation(got, expected));
  }
  return dev;
}

double V_from_individuals_deviation(const ProtocolSpec &spec, const SettingVector &x) {
  const FactorSpace space = spec.layout.space();
  const FactorSpace big = V_from_individuals_space(spec.layout);
  const auto ladder = V_from_individuals_gates(spec, x);
  const auto v = lab_activation_gates(spec, x);
  const Index anc = Index{1} << spec.parties();
  auto lift = [anc](Index i) { return i * anc; };
  double dev = 0.0;
  for (Index j = 0; j < space.total(); ++j) {
    const SparseState expected = reindex(apply_gates(v, space, SparseState{{j, cplx(1.0)}}), lift);
    const SparseState got = apply_gates(ladder, big, SparseState{{lift(j), cplx(1.0)}});
    dev = std::max(dev, sparse_deviation(got, expected));
  }
  return dev;
}

Index IndividualGateCircuit::system_dim() const {
  Index d = 1;
  for (Index w : wire_dims) d *= w;
  return d;
}

int IndividualGateCircuit::lab_gate_count() const {
  return static_cast<int>(std::count_if(elements.begin(), elements.end(),
                                        [](const Element &e) { return e.kind == Element::Kind::kLabGate; }));
}

void IndividualGateCircuit::add_unitary(std::vector<int> wires, COperator matrix) {
  elements.push_back(Element{Element::Kind::kUnitary, std::move(wires), std::move(matrix), 0});
}

void IndividualGateCircuit::add_lab_gate(int party, int control_wire) {
  elements.push_back(Element{Element::Kind::kLabGate, {control_wire}, COperator(), party});
}

void check_circuit(const IndividualGateCircuit &c) {
  const int nw = static_cast<int>(c.wire_dims.size());
  const int n = c.parties();
  if (nw == 0) throw StructuralError("circuit declares no wires");
  if (n == 0) throw StructuralError("circuit declares no parties");
  for (Index d : c.wire_dims) {
    if (d < 1) throw StructuralError("wire dimensions must be positive");
  }
  if (static_cast<int>(c.settings.size()) != n || static_cast<int>(c.lab_wires.size()) != n ||
      static_cast<int>(c.measurements.size()) != n) {
    throw StructuralError("settings, lab wires and measurements must be given for every party");
  }
  const FactorSpace wires(c.wire_dims);
  auto check_wires = [&](const std::vector<int> &ws, const std::string &what) {
    try {
      wires.check_factors(ws);
    } catch (const std::exception &e) {
      throw StructuralError(what + ": " + e.what());
    }
  };
  for (int l = 1; l <= n; ++l) {
    check_wires(c.lab_wires[l - 1], "lab wires of party " + std::to_string(l));
    if (c.settings[l - 1].empty()) throw StructuralError("party " + std::to_string(l) + " has no settings");
    if (c.measurements[l - 1].size() != c.settings[l - 1].size()) {
      throw StructuralError("party " + std::to_string(l) + " needs one measurement per setting");
    }
    const Index dim = wires.subspace_dim(c.lab_wires[l - 1]) * c.alphabets[l - 1];
    for (const auto &m : c.measurements[l - 1]) {
      if (m.rows() != dim || m.cols() != dim || !is_unitary(m)) {
        throw StructuralError("measurement of party " + std::to_string(l) + " must be a " + std::to_string(dim) +
                              "x" + std::to_string(dim) + " unitary");
      }
    }
  }
  for (std::size_t k = 0; k < c.elements.size(); ++k) {
    const auto &e = c.elements[k];
    const std::string where = "element " + std::to_string(k);
    check_wires(e.wires, where);
    if (e.kind == IndividualGateCircuit::Element::Kind::kUnitary) {
      const Index dim = wires.subspace_dim(e.wires);
      if (e.matrix.rows() != dim || e.matrix.cols() != dim || !is_unitary(e.matrix)) {
        throw StructuralError(where + " must be a " + std::to_string(dim) + "x" + std::to_string(dim) + " unitary");
      }
    } else {
      if (e.party < 1 || e.party > n) throw StructuralError(where + " names undeclared party " + std::to_string(e.party));
      if (e.wires.size() != 1 || c.wire_dims[e.wires[0]] != 2) {
        throw StructuralError(where + " must be controlled by a single qubit wire");
      }
      const auto &lw = c.lab_wires[e.party - 1];
      if (std::find(lw.begin(), lw.end(), e.wires[0]) != lw.end()) {
        throw StructuralError(where + ": party " + std::to_string(e.party) + " acts on its own control wire");
      }
    }
  }
}

std::vector<SettingVector> all_settings(const IndividualGateCircuit &c) {
  std::vector<SettingVector> out{SettingVector{}};
  for (const auto &dom : c.settings) {
    std::vector<SettingVector> next;
    for (const auto &x : out) {
      for (int v : dom) {
        SettingVector y = x;
        y.values.push_back(v);
        next.push_back(std::move(y));
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace {

int setting_position(const IndividualGateCircuit &c, int party, int value) {
  const auto &dom = c.settings.at(party - 1);
  auto it = std::find(dom.begin(), dom.end(), value);
  if (it == dom.end()) {
    throw std::out_of_range("setting " + std::to_string(value) + " is not in the domain of party " +
                            std::to_string(party));
  }
  return static_cast<int>(it - dom.begin());
}

// Measurement of party l extended to every wire (x) r_l.
COperator full_measurement(const IndividualGateCircuit &c, int party, const COperator &m) {
  std::vector<Index> dims = c.wire_dims;
  dims.push_back(c.alphabets[party - 1]);
  std::vector<int> factors = c.lab_wires[party - 1];
  factors.push_back(static_cast<int>(c.wire_dims.size()));
  return embed(m, FactorSpace(dims), factors);
}

}  // namespace

RewriteResult rewrite_circuit(const IndividualGateCircuit &c) {
  check_circuit(c);
  const int n = c.parties();
  std::vector<bool> used(n, false);
  for (const auto &e : c.elements) {
    if (e.kind == IndividualGateCircuit::Element::Kind::kLabGate) used[e.party - 1] = true;
  }
  for (int l = 1; l <= n; ++l) {
    if (!used[l - 1]) throw StructuralError("party " + std::to_string(l) + " has no lab gate in the circuit");
  }
  const int steps = c.lab_gate_count();
  const Index d = c.system_dim();
  const FactorSpace wires(c.wire_dims);
  RewriteResult out;
  ProtocolSpec &spec = out.spec;
  spec.layout = SpaceLayout::make(d, c.alphabets, steps + 1);
  spec.steps = steps;
  spec.settings = c.settings;
  spec.measurements.resize(n);
  for (int l = 1; l <= n; ++l) {
    for (const auto &m : c.measurements[l - 1]) spec.measurements[l - 1].push_back(full_measurement(c, l, m));
  }
  const Index dc = spec.layout.control_dim();
  const COperator ic = COperator::Identity(dc, dc);
  COperator pending = COperator::Identity(d * dc, d * dc);
  for (const auto &e : c.elements) {
    if (e.kind == IndividualGateCircuit::Element::Kind::kUnitary) {
      pending = kron(embed(e.matrix, wires, e.wires), ic) * pending;
      continue;
    }
    COperator on(d, d), off(d, d);
    on.setZero();
    off.setZero();
    for (Index s = 0; s < d; ++s) {
      if (wires.digit(s, e.wires[0]) == 1) on(s, s) = 1.0;
      else off(s, s) = 1.0;
    }
    const COperator w = control_prep(spec.layout, e.party);
    const COperator cw = kron(on, w) + kron(off, ic);
    spec.step_unitaries.push_back(cw * pending);
    pending = cw.adjoint();
  }
  const ValidityReport report = validate_protocol(spec);
  out.fires_once = report.valid;
  out.max_leak = report.max_leak;
  return out;
}

OutcomeDistribution simulate_circuit(const IndividualGateCircuit &c, const SettingVector &x) {
  check_circuit(c);
  const int n = c.parties();
  const int nw = static_cast<int>(c.wire_dims.size());
  if (static_cast<int>(x.values.size()) != n) throw std::invalid_argument("setting vector has the wrong length");
  const Index flag_dim = c.lab_gate_count() + 1;
  std::vector<Index> dims = c.wire_dims;
  for (Index a : c.alphabets) dims.push_back(a);
  for (int l = 0; l < n; ++l) dims.push_back(flag_dim);
  const FactorSpace space(dims);
  const COperator shift = flag_shift(flag_dim);
  CState state = basis_state(space.total(), 0);
  for (const auto &e : c.elements) {
    if (e.kind == IndividualGateCircuit::Element::Kind::kUnitary) {
      apply(LocalGate{e.wires, e.matrix, {}}, space, state);
      continue;
    }
    const int l = e.party;
    std::vector<int> targets = c.lab_wires[l - 1];
    targets.push_back(nw + l - 1);
    targets.push_back(nw + n + l - 1);
    const COperator &m = c.measurements[l - 1][setting_position(c, l, x[l])];
    apply(LocalGate{targets, kron(m, shift), {{e.wires[0], 1}}}, space, state);
  }
  OutcomeDistribution d;
  d.alphabets = c.alphabets;
  d.x = x;
  Index size = 1;
  for (Index a : c.alphabets) size *= a;
  d.probs.assign(size, 0.0);
  std::vector<Index> outcomes(n);
  for (Index i = 0; i < space.total(); ++i) {
    const double p = std::norm(state[i]);
    if (p == 0.0) continue;
    for (int l = 0; l < n; ++l) outcomes[l] = space.digit(i, nw + l);
    d.probs[d.index_of(outcomes)] += p;
  }
  return d;
}

COperator gate_x() {
  COperator m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

COperator gate_h() {
  COperator m(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return m;
}

COperator gate_cnot() {
  COperator m = COperator::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

COperator gate_swap() {
  COperator m = COperator::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  return m;
}

}  // namespace qcausal
