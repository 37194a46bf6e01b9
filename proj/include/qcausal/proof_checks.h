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

// Numerical checks of the orthogonality lemmas for barred states and the
// four cancellation identities behind the extraction theorem.

#include <cstdint>

#include "qcausal/causal_extract.h"

namespace qcausal {

inline constexpr double kOverlapTol = 1e-10;
inline constexpr Index kMaxCheckedHistories = 10000;

struct ProofCheckReport {
  SettingVector x;
  /// Largest |<bar psi_(l',t',H)|bar psi_(l,t,H)>| over (l,t) != (l',t').
  double lemma1_max_overlap = 0.0;
  /// Same for bar phi.
  double lemma2_max_overlap = 0.0;
  /// Per (t, H, l): | |psi|^2 - sum_a |phi|^2 |.
  double result1_max_deviation = 0.0;
  /// | sum_l sum_t |psi_(l,t,H_0)|^2 - 1 |.
  double result2_deviation = 0.0;
  /// Per full history: | sum_l sum_t |phi_(l,t,H_N)|^2 - p(a|x) |.
  double result3_max_deviation = 0.0;
  /// Per H_k, 1 <= k < N: phi mass after stage k against the psi mass before stage k+1.
  double result4_max_deviation = 0.0;

  Index histories_total = 0;
  Index histories_checked = 0;
  bool sampled = false;
  std::uint64_t sample_seed = 0;

  bool pass() const;
};

/// Runs every check at one setting vector. When more than max_histories
/// histories exist, a seeded uniform sample of that many is used for the
/// barred-state overlaps.
ProofCheckReport run_proof_checks(const ProtocolSpec &spec, const SettingVector &x, std::uint64_t seed = 0,
                                  Index max_histories = kMaxCheckedHistories);
ProofCheckReport run_proof_checks(const ForwardSweep &sweep, std::uint64_t seed = 0,
                                  Index max_histories = kMaxCheckedHistories);

/// The same history with `party`'s entry moved to the end.
History move_to_back(const History &h, int party);

/// sum_{l in H} sum_t |phi_(l,t,H)|^2.
double phi_mass(const ForwardSweep &sweep, const History &h);

}  // namespace qcausal
