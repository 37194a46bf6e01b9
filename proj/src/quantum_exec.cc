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

#include "qcausal/quantum_exec.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcausal {

History::History(std::vector<HistoryEntry> entries) {
  for (auto &e : entries) *this = extended(e);
}

bool History::contains(int party) const {
  return party >= 1 && party <= 64 && ((mask_ >> (party - 1)) & 1u) != 0;
}

History History::extended(HistoryEntry e) const {
  if (e.party < 1 || e.party > 64) throw std::out_of_range("history party label out of range");
  if (contains(e.party)) {
    throw std::invalid_argument("party " + std::to_string(e.party) + " already appears in history " +
                                to_string(*this));
  }
  History h = *this;
  h.entries_.push_back(e);
  h.mask_ |= std::uint64_t{1} << (e.party - 1);
  return h;
}

History History::without_last() const {
  if (entries_.empty()) throw std::logic_error("without_last on the empty history");
  History h = *this;
  h.mask_ &= ~(std::uint64_t{1} << (entries_.back().party - 1));
  h.entries_.pop_back();
  return h;
}

std::string to_string(const History &h) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < h.entries().size(); ++i) {
    const auto &e = h.entries()[i];
    os << (i ? "," : "") << '(' << e.party << ',' << e.outcome << ',' << e.setting << ')';
  }
  os << ')';
  return os.str();
}

void check_history(const SpaceLayout &layout, const History &h) {
  for (const auto &e : h.entries()) {
    if (e.party < 1 || e.party > layout.parties) {
      throw std::out_of_range("history names party " + std::to_string(e.party) + " outside 1.." +
                              std::to_string(layout.parties));
    }
    if (e.outcome < 0 || e.outcome >= layout.alphabet(e.party)) {
      throw std::out_of_range("outcome " + std::to_string(e.outcome) + " outside the alphabet of party " +
                              std::to_string(e.party));
    }
  }
}

std::vector<History> enumerate_histories(const ProtocolSpec &spec, const SettingVector &x) {
  spec.check_settings(x);
  std::vector<History> out;
  const int n = spec.parties();
  auto visit = [&](auto &&self, const History &h) -> void {
    out.push_back(h);
    if (h.size() == n) return;
    for (int l = 1; l <= n; ++l) {
      if (h.contains(l)) continue;
      for (Index a = 0; a < spec.layout.alphabet(l); ++a) self(self, h.extended({l, a, x[l]}));
    }
  };
  visit(visit, History{});
  return out;
}

Index OutcomeDistribution::index_of(const std::vector<Index> &outcomes) const {
  if (outcomes.size() != alphabets.size()) throw std::out_of_range("outcome tuple has the wrong length");
  Index flat = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] < 0 || outcomes[i] >= alphabets[i]) throw std::out_of_range("outcome out of alphabet");
    flat = flat * alphabets[i] + outcomes[i];
  }
  return flat;
}

std::vector<Index> OutcomeDistribution::outcomes_of(Index flat) const {
  std::vector<Index> out(alphabets.size());
  for (int i = static_cast<int>(alphabets.size()) - 1; i >= 0; --i) {
    out[i] = flat % alphabets[i];
    flat /= alphabets[i];
  }
  return out;
}

double OutcomeDistribution::total() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

double max_abs_difference(const OutcomeDistribution &a, const OutcomeDistribution &b) {
  if (a.alphabets != b.alphabets) throw DimensionError("distributions over different alphabets");
  double m = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i) m = std::max(m, std::abs(a.probs[i] - b.probs[i]));
  return m;
}

COperator total_unitary(const ProtocolSpec &spec, const SettingVector &x) {
  const FactorSpace space = spec.layout.space();
  check_dense_capacity(space.total(), space.total(), "total_unitary");
  const auto gates = lab_activation_gates(spec, x);
  COperator u = COperator::Identity(space.total(), space.total());
  for (int t = 1; t <= spec.steps; ++t) {
    apply(LocalGate{{SpaceLayout::system_factor(), SpaceLayout::control_factor()}, spec.step_unitaries[t - 1], {}},
          space, u);
    for (const auto &g : gates) apply(g, space, u);
  }
  return u;
}

OutcomeDistribution result_marginal(const SpaceLayout &layout, const SettingVector &x, const CState &state) {
  const FactorSpace space = layout.space();
  if (state.size() != space.total()) throw DimensionError("result_marginal: state dimension mismatch");
  OutcomeDistribution d;
  d.alphabets = layout.alphabets;
  d.x = x;
  d.probs.assign(layout.results_dim(), 0.0);
  for (Index i = 0; i < state.size(); ++i) {
    const double w = std::norm(state[i]);
    if (w == 0.0) continue;
    Index flat = 0;
    for (int l = 1; l <= layout.parties; ++l) flat = flat * layout.alphabet(l) + space.digit(i, layout.result_factor(l));
    d.probs[flat] += w;
  }
  return d;
}

OutcomeDistribution quantum_distribution(const ProtocolSpec &spec, const SettingVector &x) {
  check_structure(spec);
  const auto leak = protocol_leak(spec, x);
  if (leak.leak > kLeakTol) {
    throw InvalidProtocolError("protocol is not valid at x=" + to_string(x) + ": flag leakage " +
                               std::to_string(leak.leak) + " exceeds 1e-9");
  }
  return result_marginal(spec.layout, x, run_protocol(spec, x));
}

COperator history_projector(const SpaceLayout &layout, const History &h) {
  check_history(layout, h);
  const Index dim = layout.results_dim() * layout.flags_dim();
  check_dense_capacity(dim, dim, "history_projector");
  std::vector<Index> dims(layout.alphabets.begin(), layout.alphabets.end());
  for (int l = 1; l <= layout.parties; ++l) dims.push_back(layout.flag_dim);
  const FactorSpace rf(dims);
  std::vector<Index> want_outcome(layout.parties + 1, -1);
  for (const auto &e : h.entries()) want_outcome[e.party] = e.outcome;
  COperator p = COperator::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    bool keep = true;
    for (int l = 1; l <= layout.parties && keep; ++l) {
      const Index r = rf.digit(i, l - 1);
      const Index f = rf.digit(i, layout.parties + l - 1);
      keep = want_outcome[l] >= 0 ? (r == want_outcome[l] && f == 1) : f == 0;
    }
    if (keep) p(i, i) = 1.0;
  }
  return p;
}

namespace {

// Offsets (within one system slice) of the basis states with control |party>
// and results/flags in the history sector. Full index = s * slice + key.
std::vector<Index> sector_keys(const SpaceLayout &layout, const FactorSpace &space, int party, const History &h) {
  Index base = party * space.stride(SpaceLayout::control_factor());
  for (const auto &e : h.entries()) {
    base += e.outcome * space.stride(layout.result_factor(e.party)) + space.stride(layout.flag_factor(e.party));
  }
  std::vector<int> free;
  for (int l = 1; l <= layout.parties; ++l) {
    if (!h.contains(l)) free.push_back(layout.result_factor(l));
  }
  auto keys = local_offsets(space, free);
  for (Index &k : keys) k += base;
  return keys;
}

CState project_onto(const SpaceLayout &layout, const FactorSpace &space, const CState &state, int party,
                    const History &h) {
  CState out = CState::Zero(state.size());
  const Index slice = space.stride(SpaceLayout::system_factor());
  const auto keys = sector_keys(layout, space, party, h);
  for (Index s = 0; s < layout.system_dim; ++s) {
    for (Index k : keys) out[s * slice + k] = state[s * slice + k];
  }
  return out;
}

std::vector<double> slice_table(const FactorSpace &space, const CState &state) {
  const Index slice = space.stride(SpaceLayout::system_factor());
  std::vector<double> table(slice, 0.0);
  for (Index i = 0; i < state.size(); ++i) table[i % slice] += std::norm(state[i]);
  return table;
}

void check_party(const SpaceLayout &layout, int party) {
  if (party < 0 || party > layout.parties) {
    throw std::out_of_range("party " + std::to_string(party) + " outside 0.." + std::to_string(layout.parties));
  }
}

void check_step(const ProtocolSpec &spec, int t) {
  if (t < 1 || t > spec.steps) {
    throw std::out_of_range("step " + std::to_string(t) + " outside 1.." + std::to_string(spec.steps));
  }
}

void check_psi_args(const ProtocolSpec &spec, int party, int t, const History &h) {
  check_party(spec.layout, party);
  check_step(spec, t);
  check_history(spec.layout, h);
  if (party != 0 && h.contains(party)) {
    throw std::invalid_argument("party " + std::to_string(party) + " has already acted in history " + to_string(h));
  }
}

void check_history_settings(const History &h, const SettingVector &x) {
  for (const auto &e : h.entries()) {
    if (e.setting != x[e.party]) {
      throw std::invalid_argument("history " + to_string(h) + " records setting " + std::to_string(e.setting) +
                                  " for party " + std::to_string(e.party) + " but x has " +
                                  std::to_string(x[e.party]));
    }
  }
}

void check_phi_history(const SpaceLayout &layout, int party, const History &h) {
  check_party(layout, party);
  check_history(layout, h);
  if (party != 0 && (h.empty() || h.back().party != party)) {
    throw std::invalid_argument("the last entry of history " + to_string(h) + " does not name party " +
                                std::to_string(party));
  }
}

}  // namespace

ProjectedState psi_state(const ProtocolSpec &spec, const SettingVector &x, int party, int t, const History &h) {
  check_psi_args(spec, party, t, h);
  check_history_settings(h, x);
  const FactorSpace space = spec.layout.space();
  const auto gates = lab_activation_gates(spec, x);
  CState state = initial_state(spec.layout);
  for (int k = 1; k <= t; ++k) {
    if (k > 1) apply_all(gates, space, state);
    apply_step_unitary(spec, k, state);
  }
  return {project_onto(spec.layout, space, state, party, h), party, t, h, StateKind::kPsi};
}

ProjectedState phi_state(const ProtocolSpec &spec, const SettingVector &x, int party, int t, const History &h) {
  check_phi_history(spec.layout, party, h);
  check_step(spec, t);
  const FactorSpace space = spec.layout.space();
  if (party == 0) {
    ProjectedState ps = psi_state(spec, x, 0, t, h);
    apply_V(spec, x, ps.state);
    ps.kind = StateKind::kPhi;
    return ps;
  }
  check_history_settings(h, x);
  ProjectedState ps = psi_state(spec, x, party, t, h.without_last());
  apply_V(spec, x, ps.state);
  const int rf = spec.layout.result_factor(party);
  const Index outcome = h.back().outcome;
  for (Index i = 0; i < ps.state.size(); ++i) {
    if (space.digit(i, rf) != outcome) ps.state[i] = 0.0;
  }
  ps.history = h;
  ps.kind = StateKind::kPhi;
  return ps;
}

ProjectedState evolve_to_end(const ProtocolSpec &spec, const SettingVector &x, const ProjectedState &ps) {
  check_step(spec, ps.step);
  if (ps.kind == StateKind::kPsiBar || ps.kind == StateKind::kPhiBar) {
    throw std::invalid_argument("state is already evolved to the end of the protocol");
  }
  const FactorSpace space = spec.layout.space();
  const auto gates = lab_activation_gates(spec, x);
  ProjectedState out = ps;
  if (ps.kind == StateKind::kPsi) apply_all(gates, space, out.state);
  for (int k = ps.step + 1; k <= spec.steps; ++k) {
    apply_step_unitary(spec, k, out.state);
    apply_all(gates, space, out.state);
  }
  out.kind = ps.kind == StateKind::kPsi ? StateKind::kPsiBar : StateKind::kPhiBar;
  return out;
}

ForwardSweep::ForwardSweep(const ProtocolSpec &spec, const SettingVector &x)
    : spec_(spec), x_(x), space_(spec.layout.space()), v_gates_(lab_activation_gates(spec, x)) {
  CState state = initial_state(spec_.layout);
  for (int t = 1; t <= spec_.steps; ++t) {
    apply_step_unitary(spec_, t, state);
    pre_.push_back(state);
    pre_table_.push_back(slice_table(space_, state));
    apply_all(v_gates_, space_, state);
    post_.push_back(state);
    post_table_.push_back(slice_table(space_, state));
  }
}

CState ForwardSweep::project(const CState &state, int party, const History &h) const {
  return project_onto(spec_.layout, space_, state, party, h);
}

double ForwardSweep::sector_weight(const std::vector<double> &table, int party, const History &h) const {
  double w = 0.0;
  for (Index k : sector_keys(spec_.layout, space_, party, h)) w += table[k];
  return w;
}

void ForwardSweep::check_phi_args(int party, const History &h) const {
  check_phi_history(spec_.layout, party, h);
  check_history_settings(h, x_);
}

CState ForwardSweep::psi(int party, int t, const History &h) const {
  check_psi_args(spec_, party, t, h);
  check_history_settings(h, x_);
  return project(pre(t), party, h);
}

// V maps the (control l, H without l) sector of pre(t) onto the (control l,
// flag l raised) sector, so projecting post(t) onto the H sector equals
// projecting r_l after V.
CState ForwardSweep::phi(int party, int t, const History &h) const {
  check_phi_args(party, h);
  check_step(spec_, t);
  return project(post(t), party, h);
}

double ForwardSweep::psi_norm2(int party, int t, const History &h) const {
  check_psi_args(spec_, party, t, h);
  check_history_settings(h, x_);
  return sector_weight(pre_table_[t - 1], party, h);
}

double ForwardSweep::phi_norm2(int party, int t, const History &h) const {
  check_phi_args(party, h);
  check_step(spec_, t);
  return sector_weight(post_table_[t - 1], party, h);
}

double ForwardSweep::psi_weight(int party, const History &h) const {
  double w = 0.0;
  for (int t = 1; t <= steps(); ++t) w += psi_norm2(party, t, h);
  return w;
}

double ForwardSweep::phi_weight(int party, const History &h) const {
  double w = 0.0;
  for (int t = 1; t <= steps(); ++t) w += phi_norm2(party, t, h);
  return w;
}

void ForwardSweep::evolve_psi_to_end(int t, COperator &states) const {
  check_step(spec_, t);
  for (const auto &g : v_gates_) apply(g, space_, states);
  evolve_phi_to_end(t, states);
}

void ForwardSweep::evolve_phi_to_end(int t, COperator &states) const {
  check_step(spec_, t);
  for (int k = t + 1; k <= steps(); ++k) {
    apply(LocalGate{{SpaceLayout::system_factor(), SpaceLayout::control_factor()}, spec_.step_unitaries[k - 1], {}},
          space_, states);
    for (const auto &g : v_gates_) apply(g, space_, states);
  }
}

}  // namespace qcausal
