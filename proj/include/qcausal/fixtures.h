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

// Reference protocols: the three-party quantum switch, and seeded random
// valid protocols and circuits.

#include <cstdint>

#include "qcausal/gate_equiv.h"

namespace qcausal {

/// Alice and Bob in coherently controlled order on s1, then Charlie on the
/// which-order record. System s1 (x) s2, T = 3, flag dimension 4.
/// Setting 0 copies s1 into r; setting 1 does the same in the +/- basis.
ProtocolSpec build_switch_protocol();

/// The same experiment as a circuit of individual gates on wires
/// s1, s2, cA, cB, cC.
IndividualGateCircuit build_switch_circuit();

/// Measurement unitaries of the switch on a qubit (x) r.
COperator switch_measurement(int setting);

struct RandomProtocolOptions {
  int parties = 2;
  Index system_dim = 2;
  int steps = 2;
  Index alphabet = 2;
  int settings = 2;
  /// Probability that an attempt is a fully Haar U_t candidate (almost
  /// always invalid), exercising the rejection path.
  double haar_candidate_rate = 0.0;
};

struct RandomProtocol {
  ProtocolSpec spec;
  RandomProtocolOptions options;
  std::uint64_t seed = 0;
  int attempts = 0;
  int rejected = 0;
};

/// A valid protocol drawn from a random branch schedule: each branch fires
/// every party once at its own steps, with Haar system unitaries between and
/// Haar mixing across branches that have fired the same parties. Candidates
/// are kept only if validate_protocol accepts them.
RandomProtocol random_protocol(const RandomProtocolOptions &options, std::uint64_t seed, int max_attempts = 1000);

/// Options of the i-th suite protocol: N in {2,3}, d_s in {2,3}, T in N..N+2.
RandomProtocolOptions suite_options(std::uint64_t index);
RandomProtocol suite_protocol(std::uint64_t index);

/// Two parties on wires s, c1, c2: Haar on (s, c1), a coherent choice of
/// order, two gate slots separated by a control swap, and random system and
/// control-diagonal unitaries in between.
IndividualGateCircuit random_circuit(std::uint64_t seed);

}  // namespace qcausal
