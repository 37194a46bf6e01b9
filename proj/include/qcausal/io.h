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

// JSON documents: protocols, circuits, causal models, distributions,
// certificates and reports. Complex entries are [re, im] pairs. Doubles are
// written with 17 significant digits, so write-then-read is bit-exact.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qcausal/gate_equiv.h"
#include "qcausal/polytope.h"
#include "qcausal/proof_checks.h"

namespace qcausal {

using json = nlohmann::json;

inline constexpr const char *kProtocolFormat = "qcausal-protocol/1";
inline constexpr const char *kCircuitFormat = "qcausal-circuit/1";
inline constexpr const char *kCausalModelFormat = "qcausal-causal-model/1";
inline constexpr const char *kDistributionFormat = "qcausal-distribution/1";
inline constexpr const char *kCertificateFormat = "qcausal-certificate/1";
/// Decimal entries are read as the nearest double; dyadic rationals are exact.
inline constexpr const char *kParseMode = "nearest-double";

/// Malformed document; the message starts with a JSON pointer to the fault.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(const std::string &where, const std::string &what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string &where() const { return where_; }

 private:
  std::string where_;
};

json parse_json_text(const std::string &text);
json read_json_file(const std::string &path);

json matrix_to_json(const COperator &m);
/// A raw matrix of [re, im] pairs, square of size `dim`.
COperator matrix_from_json(const json &j, Index dim, const std::string &where);

/// "description" is optional free text carried through unchanged.
json protocol_to_json(const ProtocolSpec &spec, const std::string &description = "");
/// Accepts raw matrices or named gates ({"gate": "identity" | "control_permutation" | "controlled", ...}).
/// Runs check_structure, so StructuralError propagates for well-formed but
/// inconsistent protocols.
ProtocolSpec protocol_from_json(const json &j);

json circuit_to_json(const IndividualGateCircuit &c, const std::string &description = "");
/// Elements: {"op": "unitary", "wires": [...], "matrix": ...},
/// {"op": "gate", "name": "X"|"H"|"CNOT"|"SWAP", "wires": [...]},
/// {"op": "lab", "party": l, "control": wire}. Wires are named.
IndividualGateCircuit circuit_from_json(const json &j);

json history_to_json(const History &h);
History history_from_json(const json &j, const std::string &where);
json settings_to_json(const SettingVector &x);
SettingVector settings_from_json(const json &j, const std::string &where);
/// Parses "0,1,1" or "011".
SettingVector parse_setting_tuple(const std::string &text);

json causal_model_to_json(const CausalModel &m);
CausalModel causal_model_from_json(const json &j);

json distribution_to_json(const OutcomeDistribution &d);

struct DistributionFamily {
  Scenario scenario;
  std::vector<Settings> settings;
  Behaviour behaviour;
};

json family_to_json(const Scenario &scenario, const std::vector<Settings> &settings, const Behaviour &p);
DistributionFamily family_from_json(const json &j);

json certificate_to_json(const PolytopeCertificate &c);

json verification_to_json(const VerificationReport &r);
json proof_checks_to_json(const ProofCheckReport &r);
json validity_to_json(const ValidityReport &r);

}  // namespace qcausal
