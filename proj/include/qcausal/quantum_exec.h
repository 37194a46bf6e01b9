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

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcausal/protocol.h"

namespace qcausal {

struct HistoryEntry {
  int party = 0;
  Index outcome = 0;
  int setting = 0;

  auto operator<=>(const HistoryEntry &) const = default;
};

/// Ordered (party, outcome, setting) triples of the parties that have acted.
class History {
 public:
  History() = default;
  explicit History(std::vector<HistoryEntry> entries);

  const std::vector<HistoryEntry> &entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  bool contains(int party) const;
  /// Bit l-1 set for every party l in the history.
  std::uint64_t acted_mask() const { return mask_; }
  const HistoryEntry &back() const { return entries_.back(); }

  History extended(HistoryEntry e) const;
  History without_last() const;

  auto operator<=>(const History &o) const { return entries_ <=> o.entries_; }
  bool operator==(const History &o) const { return entries_ == o.entries_; }

 private:
  std::vector<HistoryEntry> entries_;
  std::uint64_t mask_ = 0;
};

std::string to_string(const History &h);

/// Throws if parties repeat, are out of range, or outcomes leave their alphabet.
void check_history(const SpaceLayout &layout, const History &h);

/// Histories of length 0..N consistent with x, depth first: stages in order,
/// parties ascending, outcomes ascending.
std::vector<History> enumerate_histories(const ProtocolSpec &spec, const SettingVector &x);

/// p(a|x) over outcome tuples a, flattened mixed-radix with party 1 most
/// significant.
struct OutcomeDistribution {
  std::vector<Index> alphabets;
  SettingVector x;
  std::vector<double> probs;

  Index index_of(const std::vector<Index> &outcomes) const;
  std::vector<Index> outcomes_of(Index flat) const;
  double operator()(const std::vector<Index> &outcomes) const { return probs.at(index_of(outcomes)); }
  double total() const;
  Index size() const { return static_cast<Index>(probs.size()); }
};

double max_abs_difference(const OutcomeDistribution &a, const OutcomeDistribution &b);

/// V U_T ... V U_1 (small layouts only).
COperator total_unitary(const ProtocolSpec &spec, const SettingVector &x);

/// Outcome distribution read off the result registers of a final state.
OutcomeDistribution result_marginal(const SpaceLayout &layout, const SettingVector &x, const CState &state);

/// p(a|x) = |(|a><a|_r (x) I) U|0>|^2. Throws InvalidProtocolError when the
/// flag leakage at x exceeds 1e-9.
OutcomeDistribution quantum_distribution(const ProtocolSpec &spec, const SettingVector &x);

/// The history projector on results (x) flags.
COperator history_projector(const SpaceLayout &layout, const History &h);

enum class StateKind { kPsi, kPhi, kPsiBar, kPhiBar };

struct ProjectedState {
  CState state;
  int party = 0;  // 0 is the "do nothing" branch
  int step = 0;
  History history;
  StateKind kind = StateKind::kPsi;
};

/// (|l><l|_c (x) pi^H_rf (x) I_s) U_t V ... V U_1 |0>.
ProjectedState psi_state(const ProtocolSpec &spec, const SettingVector &x, int party, int t, const History &h);
/// For l != 0: (|a_l><a_l|_{r_l} (x) I) V psi_(l,t,H without last); for l = 0: V psi_(0,t,H).
ProjectedState phi_state(const ProtocolSpec &spec, const SettingVector &x, int party, int t, const History &h);
/// psi -> V U_T ... U_{t+1} V psi; phi -> V U_T ... V U_{t+1} phi.
ProjectedState evolve_to_end(const ProtocolSpec &spec, const SettingVector &x, const ProjectedState &ps);

/// One forward pass of the protocol for a fixed x, caching U_t V ... U_1|0>
/// (pre) and V of it (post) for every step. Projected states and their norms
/// are read from the cache; norms go through per-step marginal tables over
/// the system factor.
class ForwardSweep {
 public:
  ForwardSweep(const ProtocolSpec &spec, const SettingVector &x);

  const ProtocolSpec &spec() const { return spec_; }
  const SettingVector &settings() const { return x_; }
  const FactorSpace &space() const { return space_; }
  int steps() const { return spec_.steps; }

  const CState &pre(int t) const { return pre_.at(t - 1); }
  const CState &post(int t) const { return post_.at(t - 1); }
  const CState &final_state() const { return post_.back(); }

  CState psi(int party, int t, const History &h) const;
  CState phi(int party, int t, const History &h) const;
  double psi_norm2(int party, int t, const History &h) const;
  double phi_norm2(int party, int t, const History &h) const;

  /// Sum over t of |psi_(l,t,H)|^2 and |phi_(l,t,H)|^2.
  double psi_weight(int party, const History &h) const;
  double phi_weight(int party, const History &h) const;

  /// Applies the tail V U_T ... after step t (see evolve_to_end) to every column.
  void evolve_psi_to_end(int t, COperator &states) const;
  void evolve_phi_to_end(int t, COperator &states) const;

 private:
  void check_phi_args(int party, const History &h) const;
  // Projection of `state` onto control |party> and the history sector.
  CState project(const CState &state, int party, const History &h) const;
  double sector_weight(const std::vector<double> &table, int party, const History &h) const;

  ProtocolSpec spec_;
  SettingVector x_;
  FactorSpace space_;
  std::vector<LocalGate> v_gates_;
  std::vector<CState> pre_;
  std::vector<CState> post_;
  std::vector<std::vector<double>> pre_table_;
  std::vector<std::vector<double>> post_table_;
};

}  // namespace qcausal
