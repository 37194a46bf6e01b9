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

// Coherently controlled protocols: the composite space
//   system (x) control (x) results r_1..r_N (x) flags f_1..f_N,
// the lab-activation unitary, and validity checking.

#include <string>
#include <vector>

#include "qcausal/tensor.h"

namespace qcausal {

/// Hard failure: wrong shapes, non-unitary inputs, too few steps.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A protocol that leaks amplitude out of the all-flags-raised sector.
class InvalidProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimensions of the composite space. Parties are labelled 1..N; control
/// level 0 is the "do nothing" command.
///
/// Factor order: 0 system, 1 control, 2..N+1 results, N+2..2N+1 flags.
struct SpaceLayout {
  Index system_dim = 1;
  int parties = 1;
  std::vector<Index> alphabets;
  Index flag_dim = 2;

  static SpaceLayout make(Index system_dim, std::vector<Index> alphabets, Index flag_dim);

  Index control_dim() const { return parties + 1; }
  Index results_dim() const;
  Index flags_dim() const;
  Index total_dim() const { return system_dim * control_dim() * results_dim() * flags_dim(); }
  Index alphabet(int party) const { return alphabets.at(party - 1); }

  static constexpr int system_factor() { return 0; }
  static constexpr int control_factor() { return 1; }
  int result_factor(int party) const { return 1 + party; }
  int flag_factor(int party) const { return 1 + parties + party; }

  FactorSpace space() const;
  /// Throws StructuralError on a malformed layout.
  void check() const;
};

using Settings = std::vector<int>;

/// One setting value per party, party 1 first.
struct SettingVector {
  std::vector<int> values;

  int operator[](int party) const { return values.at(party - 1); }
  auto operator<=>(const SettingVector &) const = default;
};

std::string to_string(const SettingVector &x);

struct ProtocolSpec {
  SpaceLayout layout;
  int steps = 0;
  /// U_1..U_T, each on system (x) control.
  std::vector<COperator> step_unitaries;
  /// Setting values per party.
  std::vector<Settings> settings;
  /// measurements[party-1][setting index]: unitary on system (x) r_party.
  std::vector<std::vector<COperator>> measurements;

  int parties() const { return layout.parties; }
  /// Position of `value` in the party's settings domain; throws if absent.
  int setting_index(int party, int value) const;
  const COperator &measurement(int party, int value) const {
    return measurements.at(party - 1).at(setting_index(party, value));
  }
  /// Throws if any party's setting lies outside its domain.
  void check_settings(const SettingVector &x) const;
};

/// Throws StructuralError describing the first structural defect.
void check_structure(const ProtocolSpec &spec);

/// Every setting vector in the domain, party 1 most significant.
std::vector<SettingVector> all_settings(const ProtocolSpec &spec);
Index settings_count(const ProtocolSpec &spec);

/// Cyclic shift sum_n |n+1 mod F><n|.
COperator flag_shift(Index flag_dim);

/// V as one controlled gate per party: on control |l>, apply
/// V_{s,r_l}(x_l) (x) shift on f_l. The gates commute.
std::vector<LocalGate> lab_activation_gates(const ProtocolSpec &spec, const SettingVector &x);

/// Dense V on the full space (small layouts only).
COperator build_V(const ProtocolSpec &spec, const SettingVector &x);

void apply_V(const ProtocolSpec &spec, const SettingVector &x, CState &state);
/// U_t (1-based) on the full space.
void apply_step_unitary(const ProtocolSpec &spec, int t, CState &state);

/// |0>_s |0>_c |0..0>_r |0..0>_f
CState initial_state(const SpaceLayout &layout);

/// Full run: V U_T ... V U_1 |0>.
CState run_protocol(const ProtocolSpec &spec, const SettingVector &x);

struct ValidityReport {
  struct Entry {
    SettingVector x;
    double leak = 0.0;
    double wrap_amplitude = 0.0;
  };
  bool valid = false;
  double max_leak = 0.0;
  double max_wrap_amplitude = 0.0;
  std::vector<Entry> entries;
};

inline constexpr double kLeakTol = 1e-9;

/// leak(x) = 1 - |P_{all flags 1} U|0>|^2 for every x; valid iff max leak <= 1e-9.
/// Also reports the amplitude that the cyclic flag shift would wrap around.
/// Structural defects throw StructuralError.
ValidityReport validate_protocol(const ProtocolSpec &spec);
ValidityReport::Entry protocol_leak(const ProtocolSpec &spec, const SettingVector &x);

// Named-gate helpers for building step unitaries on system (x) control.

/// Permutes control levels: |c> -> |perm[c]>, identity on the system.
COperator control_permutation(const SpaceLayout &layout, const std::vector<int> &perm);
/// sum_c |c><c| (x) blocks[c]; a missing block is the identity.
COperator control_conditioned(const SpaceLayout &layout, const std::vector<COperator> &blocks);

}  // namespace qcausal
