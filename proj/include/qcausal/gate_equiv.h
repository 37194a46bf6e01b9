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

// Individual controlled lab gates versus the combined lab-activation unitary,
// and rewriting circuits of individual gates into single-control protocols.

#include <string>
#include <vector>

#include "qcausal/quantum_exec.h"

namespace qcausal {

/// Layout of one individual controlled lab gate:
///   0 c_l (qubit), 1 system, 2..N+1 results, N+2..2N+1 flags.
FactorSpace individual_space(const SpaceLayout &layout);

/// W_l: the two-level permutation exchanging |0> and |l> on the control.
COperator control_prep(const SpaceLayout &layout, int party);

/// |0><0|_{c_l} (x) I + |1><1|_{c_l} (x) V_{s,r_l}(x_l) (x) shift_{f_l}.
LocalGate individual_gate_local(const ProtocolSpec &spec, int party, int setting);
COperator individual_gate(const ProtocolSpec &spec, int party, int setting);

/// The composite (controlled-W_l^dagger) V (controlled-W_l) on
///   0 c_l, 1 system, 2 control, 3..N+2 results, N+3..2N+2 flags.
std::vector<LocalGate> individual_from_V_gates(const ProtocolSpec &spec, int party, const SettingVector &x);
FactorSpace individual_from_V_space(const SpaceLayout &layout);
COperator individual_from_V(const ProtocolSpec &spec, int party, const SettingVector &x);

/// V rebuilt as a ladder of individual gates, one ancilla control qubit per
/// party after the protocol factors.
std::vector<LocalGate> V_from_individuals_gates(const ProtocolSpec &spec, const SettingVector &x);
FactorSpace V_from_individuals_space(const SpaceLayout &layout);
COperator V_from_individuals(const ProtocolSpec &spec, const SettingVector &x);

/// Max entrywise deviation between the composite on the |0>_c sector
/// and the individual gate, including any amplitude leaving the sector.
/// Works column by column on sparse vectors, so it scales past dense limits.
double individual_from_V_deviation(const ProtocolSpec &spec, int party, const SettingVector &x);
/// Same for the ladder on the all-ancillas-|0> sector against V.
double V_from_individuals_deviation(const ProtocolSpec &spec, const SettingVector &x);

/// A circuit of plain unitaries and individual controlled lab gates on a
/// list of wires. Party l's measurement acts on lab_wires[l-1] (x) r_l.
struct IndividualGateCircuit {
  struct Element {
    enum class Kind { kUnitary, kLabGate };
    Kind kind = Kind::kUnitary;
    /// kUnitary: wires acted on, in matrix order. kLabGate: the single control wire.
    std::vector<int> wires;
    COperator matrix;
    int party = 0;
  };

  std::vector<Index> wire_dims;
  std::vector<std::string> wire_names;
  std::vector<Index> alphabets;
  std::vector<Settings> settings;
  std::vector<std::vector<int>> lab_wires;
  /// measurements[l-1][setting index] on lab_wires[l-1] (x) r_l.
  std::vector<std::vector<COperator>> measurements;
  std::vector<Element> elements;

  int parties() const { return static_cast<int>(alphabets.size()); }
  Index system_dim() const;
  int lab_gate_count() const;

  void add_unitary(std::vector<int> wires, COperator matrix);
  void add_lab_gate(int party, int control_wire);
};

/// Throws StructuralError on undeclared wires or parties, non-unitary
/// elements, controls that are not qubits, or lab gates that act on their
/// own control wire.
void check_circuit(const IndividualGateCircuit &circuit);

/// Settings domain of a circuit, party 1 most significant.
std::vector<SettingVector> all_settings(const IndividualGateCircuit &circuit);

struct RewriteResult {
  ProtocolSpec spec;
  /// False when some branch fires a party other than exactly once; the protocol
  /// then fails validate_protocol.
  bool fires_once = true;
  double max_leak = 0.0;
};

/// One protocol step per lab gate: the unitaries since the previous lab gate,
/// the inverse preparation of that gate and the controlled-W_l of this one
/// merge into U_t. The system is every circuit wire. Flag dimension is T+1.
RewriteResult rewrite_circuit(const IndividualGateCircuit &circuit);

/// Outcome distribution by simulating the circuit directly on
/// wires (x) r_1..r_N (x) f_1..f_N.
OutcomeDistribution simulate_circuit(const IndividualGateCircuit &circuit, const SettingVector &x);

// Standard named gates.
COperator gate_x();
COperator gate_h();
COperator gate_cnot();
COperator gate_swap();

}  // namespace qcausal
