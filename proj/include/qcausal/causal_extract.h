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

// Extraction of a classical causal model from a quantum protocol, and the
// end-to-end comparison of the two outcome distributions.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcausal/quantum_exec.h"

namespace qcausal {

/// Denominators at or below this are treated as 0/0 (unreachable branch).
inline constexpr double kReachEps = 1e-12;
inline constexpr double kTableTol = 1e-10;

/// Probability that `party` acts next after history h; nullopt when h is
/// unreachable.
std::optional<double> prob_next(const ForwardSweep &sweep, const History &h, int party);
std::optional<double> prob_next(const ProtocolSpec &spec, const SettingVector &x, const History &h, int party);

/// Probability that `party`, acting after h with its own setting from x,
/// records `outcome`; nullopt when the branch is unreachable.
std::optional<double> prob_result(const ForwardSweep &sweep, const History &h, int party, Index outcome);
std::optional<double> prob_result(const ProtocolSpec &spec, const SettingVector &x, const History &h, int party,
                                  Index outcome);

struct NextTable {
  /// probs[l-1] for candidate parties; acted parties hold 0.
  std::vector<double> probs;
  bool placeholder = false;
};

struct ResultTable {
  std::vector<double> probs;
  bool placeholder = false;
};

struct CausalModel {
  int parties = 0;
  std::vector<Index> alphabets;
  SettingVector x;
  /// Keyed by H_{k-1}.
  std::map<History, NextTable> next_tables;
  /// Keyed by (H_{k-1}, l_k); the setting is x[l_k].
  std::map<std::pair<History, int>, ResultTable> result_tables;
  /// Histories whose next-party denominator is above the reachability threshold.
  std::vector<History> reachable;
  /// Largest amount any raw probability was moved by clamping to [0,1].
  double max_clamp = 0.0;

  const NextTable &next(const History &h) const;
  const ResultTable &result(const History &h, int party) const;
};

/// Tables for every history prefix of length < N. Unreachable prefixes get
/// uniform placeholder rows. Throws InvalidProtocolError for an invalid protocol.
CausalModel extract_causal_model(const ProtocolSpec &spec, const SettingVector &x);
CausalModel extract_causal_model(const ForwardSweep &sweep);

/// Sum over orderings of the product of next/result probabilities.
OutcomeDistribution causal_distribution(const CausalModel &model);

/// Largest deviation of any table row from normalization.
double max_row_normalization_error(const CausalModel &model);

struct VerificationReport {
  struct Entry {
    SettingVector x;
    double max_deviation = 0.0;
    double quantum_total = 0.0;
    double causal_total = 0.0;
    double max_clamp = 0.0;
  };
  bool pass = false;
  double max_deviation = 0.0;
  double tolerance = kEndToEndTol;
  std::vector<Entry> entries;
};

inline constexpr Index kMaxVerifySettings = 4096;

/// Compares quantum and extracted causal distributions at every x in the
/// settings domain. Domains over 4096 settings need allow_large.
VerificationReport verify_theorem1(const ProtocolSpec &spec, bool allow_large = false);
VerificationReport::Entry verify_at(const ProtocolSpec &spec, const SettingVector &x);

/// Max over candidate parties of the change in prob_next, and over the next
/// party's outcomes of the change in prob_result, between x and x2. x and x2
/// must agree on every party in h.
double check_history_locality(const ProtocolSpec &spec, const SettingVector &x, const SettingVector &x2,
                              const History &h);
double check_history_locality(const ForwardSweep &a, const ForwardSweep &b, const History &h);

/// Outcome distribution with the control fully dephased after every U_t.
OutcomeDistribution naive_mixture_distribution(const ProtocolSpec &spec, const SettingVector &x);

}  // namespace qcausal
