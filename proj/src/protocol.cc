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

#include "qcausal/protocol.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcausal {

SpaceLayout SpaceLayout::make(Index system_dim, std::vector<Index> alphabets, Index flag_dim) {
  SpaceLayout layout;
  layout.system_dim = system_dim;
  layout.parties = static_cast<int>(alphabets.size());
  layout.alphabets = std::move(alphabets);
  layout.flag_dim = flag_dim;
  layout.check();
  return layout;
}

Index SpaceLayout::results_dim() const {
  Index d = 1;
  for (Index a : alphabets) d *= a;
  return d;
}

Index SpaceLayout::flags_dim() const {
  Index d = 1;
  for (int i = 0; i < parties; ++i) d *= flag_dim;
  return d;
}

FactorSpace SpaceLayout::space() const {
  std::vector<Index> dims{system_dim, control_dim()};
  for (Index a : alphabets) dims.push_back(a);
  for (int i = 0; i < parties; ++i) dims.push_back(flag_dim);
  return FactorSpace(std::move(dims));
}

void SpaceLayout::check() const {
  if (system_dim < 1) throw StructuralError("system dimension must be >= 1");
  if (parties < 1) throw StructuralError("at least one party is required");
  if (static_cast<int>(alphabets.size()) != parties) {
    throw StructuralError("expected " + std::to_string(parties) + " alphabets, got " +
                          std::to_string(alphabets.size()));
  }
  for (Index a : alphabets) {
    if (a < 1) throw StructuralError("every outcome alphabet must have at least one element");
  }
  if (flag_dim < 2) throw StructuralError("flag dimension must be >= 2");
  try {
    (void)space();
  } catch (const CapacityError &e) {
    throw StructuralError(std::string("layout too large: ") + e.what());
  }
}

std::string to_string(const SettingVector &x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.values.size(); ++i) os << (i ? "," : "") << x.values[i];
  os << ')';
  return os.str();
}

int ProtocolSpec::setting_index(int party, int value) const {
  const auto &dom = settings.at(party - 1);
  auto it = std::find(dom.begin(), dom.end(), value);
  if (it == dom.end()) {
    throw std::out_of_range("setting " + std::to_string(value) + " not in the domain of party " +
                            std::to_string(party));
  }
  return static_cast<int>(it - dom.begin());
}

void ProtocolSpec::check_settings(const SettingVector &x) const {
  if (static_cast<int>(x.values.size()) != parties()) {
    throw std::out_of_range("setting vector has " + std::to_string(x.values.size()) + " entries for " +
                            std::to_string(parties()) + " parties");
  }
  for (int l = 1; l <= parties(); ++l) (void)setting_index(l, x[l]);
}

void check_structure(const ProtocolSpec &spec) {
  spec.layout.check();
  const int n = spec.parties();
  if (spec.steps < n) {
    throw StructuralError("protocol has T=" + std::to_string(spec.steps) + " steps but N=" + std::to_string(n) +
                          " parties; an N party protocol requires T >= N");
  }
  if (static_cast<int>(spec.step_unitaries.size()) != spec.steps) {
    throw StructuralError("expected " + std::to_string(spec.steps) + " step unitaries, got " +
                          std::to_string(spec.step_unitaries.size()));
  }
  const Index sc = spec.layout.system_dim * spec.layout.control_dim();
  for (int t = 0; t < spec.steps; ++t) {
    const auto &u = spec.step_unitaries[t];
    if (u.rows() != sc || u.cols() != sc) {
      throw StructuralError("U_" + std::to_string(t + 1) + " must be " + std::to_string(sc) + "x" +
                            std::to_string(sc));
    }
    if (!is_unitary(u)) {
      throw StructuralError("U_" + std::to_string(t + 1) + " is not unitary (defect " +
                            std::to_string(unitarity_defect(u)) + ")");
    }
  }
  if (static_cast<int>(spec.settings.size()) != n || static_cast<int>(spec.measurements.size()) != n) {
    throw StructuralError("settings and measurements must be given for every party");
  }
  for (int l = 1; l <= n; ++l) {
    const auto &dom = spec.settings[l - 1];
    if (dom.empty()) throw StructuralError("party " + std::to_string(l) + " has an empty settings domain");
    auto sorted = dom;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw StructuralError("party " + std::to_string(l) + " has repeated setting values");
    }
    if (spec.measurements[l - 1].size() != dom.size()) {
      throw StructuralError("party " + std::to_string(l) + " needs one measurement unitary per setting");
    }
    const Index sr = spec.layout.system_dim * spec.layout.alphabet(l);
    for (std::size_t k = 0; k < dom.size(); ++k) {
      const auto &m = spec.measurements[l - 1][k];
      if (m.rows() != sr || m.cols() != sr) {
        throw StructuralError("measurement of party " + std::to_string(l) + " for setting " +
                              std::to_string(dom[k]) + " must be " + std::to_string(sr) + "x" + std::to_string(sr));
      }
      if (!is_unitary(m)) {
        throw StructuralError("measurement of party " + std::to_string(l) + " for setting " +
                              std::to_string(dom[k]) + " is not unitary");
      }
    }
  }
}

Index settings_count(const ProtocolSpec &spec) {
  Index count = 1;
  for (const auto &dom : spec.settings) count *= static_cast<Index>(dom.size());
  return count;
}

std::vector<SettingVector> all_settings(const ProtocolSpec &spec) {
  std::vector<SettingVector> out;
  const Index count = settings_count(spec);
  out.reserve(count);
  for (Index k = 0; k < count; ++k) {
    SettingVector x;
    x.values.resize(spec.settings.size());
    Index rem = k;
    for (int l = static_cast<int>(spec.settings.size()) - 1; l >= 0; --l) {
      const Index d = static_cast<Index>(spec.settings[l].size());
      x.values[l] = spec.settings[l][rem % d];
      rem /= d;
    }
    out.push_back(std::move(x));
  }
  return out;
}

COperator flag_shift(Index flag_dim) {
  COperator g = COperator::Zero(flag_dim, flag_dim);
  for (Index n = 0; n < flag_dim; ++n) g((n + 1) % flag_dim, n) = 1.0;
  return g;
}

std::vector<LocalGate> lab_activation_gates(const ProtocolSpec &spec, const SettingVector &x) {
  spec.check_settings(x);
  const auto &layout = spec.layout;
  const COperator shift = flag_shift(layout.flag_dim);
  std::vector<LocalGate> gates;
  for (int l = 1; l <= spec.parties(); ++l) {
    const COperator &m = spec.measurement(l, x[l]);
    const Index sr = layout.system_dim * layout.alphabet(l);
    if (m.rows() != sr || m.cols() != sr) {
      throw DimensionError("measurement unitary of party " + std::to_string(l) + " has the wrong dimension");
    }
    gates.push_back(LocalGate{{SpaceLayout::system_factor(), layout.result_factor(l), layout.flag_factor(l)},
                              kron(m, shift),
                              {{SpaceLayout::control_factor(), l}}});
  }
  return gates;
}

COperator build_V(const ProtocolSpec &spec, const SettingVector &x) {
  const FactorSpace space = spec.layout.space();
  check_dense_capacity(space.total(), space.total(), "build_V");
  COperator v = COperator::Identity(space.total(), space.total());
  for (const auto &g : lab_activation_gates(spec, x)) apply(g, space, v);
  return v;
}

void apply_V(const ProtocolSpec &spec, const SettingVector &x, CState &state) {
  apply_all(lab_activation_gates(spec, x), spec.layout.space(), state);
}

void apply_step_unitary(const ProtocolSpec &spec, int t, CState &state) {
  const LocalGate g{{SpaceLayout::system_factor(), SpaceLayout::control_factor()}, spec.step_unitaries.at(t - 1), {}};
  apply(g, spec.layout.space(), state);
}

CState initial_state(const SpaceLayout &layout) {
  layout.check();
  return basis_state(layout.total_dim(), 0);
}

CState run_protocol(const ProtocolSpec &spec, const SettingVector &x) {
  CState state = initial_state(spec.layout);
  const auto gates = lab_activation_gates(spec, x);
  const FactorSpace space = spec.layout.space();
  for (int t = 1; t <= spec.steps; ++t) {
    apply_step_unitary(spec, t, state);
    apply_all(gates, space, state);
  }
  return state;
}

namespace {

// Weight sitting on control |l> with flag f_l = F-1, i.e. what the next V
// would cyclically wrap back to flag 0.
double wrap_weight(const SpaceLayout &layout, const FactorSpace &space, const CState &state) {
  double w = 0.0;
  for (Index i = 0; i < state.size(); ++i) {
    const Index c = space.digit(i, SpaceLayout::control_factor());
    if (c == 0) continue;
    if (space.digit(i, layout.flag_factor(static_cast<int>(c))) == layout.flag_dim - 1) w += std::norm(state[i]);
  }
  return w;
}

double all_flags_raised_weight(const SpaceLayout &layout, const FactorSpace &space, const CState &state) {
  double w = 0.0;
  for (Index i = 0; i < state.size(); ++i) {
    bool raised = true;
    for (int l = 1; l <= layout.parties && raised; ++l) raised = space.digit(i, layout.flag_factor(l)) == 1;
    if (raised) w += std::norm(state[i]);
  }
  return w;
}

}  // namespace

ValidityReport::Entry protocol_leak(const ProtocolSpec &spec, const SettingVector &x) {
  const auto &layout = spec.layout;
  const FactorSpace space = layout.space();
  const auto gates = lab_activation_gates(spec, x);
  CState state = initial_state(layout);
  double wrap = 0.0;
  for (int t = 1; t <= spec.steps; ++t) {
    apply_step_unitary(spec, t, state);
    wrap = std::max(wrap, std::sqrt(wrap_weight(layout, space, state)));
    apply_all(gates, space, state);
  }
  ValidityReport::Entry e;
  e.x = x;
  e.leak = std::max(0.0, 1.0 - all_flags_raised_weight(layout, space, state));
  e.wrap_amplitude = wrap;
  return e;
}

ValidityReport validate_protocol(const ProtocolSpec &spec) {
  check_structure(spec);
  ValidityReport report;
  for (const auto &x : all_settings(spec)) {
    auto e = protocol_leak(spec, x);
    report.max_leak = std::max(report.max_leak, e.leak);
    report.max_wrap_amplitude = std::max(report.max_wrap_amplitude, e.wrap_amplitude);
    report.entries.push_back(std::move(e));
  }
  report.valid = report.max_leak <= kLeakTol;
  return report;
}

COperator control_permutation(const SpaceLayout &layout, const std::vector<int> &perm) {
  const Index dc = layout.control_dim();
  if (static_cast<Index>(perm.size()) != dc) throw DimensionError("control permutation has the wrong length");
  std::vector<bool> hit(dc, false);
  for (int p : perm) {
    if (p < 0 || p >= dc || hit[p]) throw DimensionError("control permutation is not a permutation");
    hit[p] = true;
  }
  const Index ds = layout.system_dim;
  COperator u = COperator::Zero(ds * dc, ds * dc);
  for (Index s = 0; s < ds; ++s) {
    for (Index c = 0; c < dc; ++c) u(s * dc + perm[c], s * dc + c) = 1.0;
  }
  return u;
}

COperator control_conditioned(const SpaceLayout &layout, const std::vector<COperator> &blocks) {
  const Index dc = layout.control_dim();
  const Index ds = layout.system_dim;
  if (static_cast<Index>(blocks.size()) > dc) throw DimensionError("more blocks than control levels");
  COperator u = COperator::Zero(ds * dc, ds * dc);
  for (Index c = 0; c < dc; ++c) {
    const bool given = c < static_cast<Index>(blocks.size()) && blocks[c].size() > 0;
    if (given && (blocks[c].rows() != ds || blocks[c].cols() != ds)) {
      throw DimensionError("control block " + std::to_string(c) + " must act on the system");
    }
    for (Index i = 0; i < ds; ++i) {
      for (Index j = 0; j < ds; ++j) {
        u(i * dc + c, j * dc + c) = given ? blocks[c](i, j) : cplx(i == j ? 1.0 : 0.0);
      }
    }
  }
  return u;
}

}  // namespace qcausal
