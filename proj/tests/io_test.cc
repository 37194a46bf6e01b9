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

#include "qcausal/io.h"

#include <gtest/gtest.h>

#include "qcausal/fixtures.h"
#include "test_support.h"

using namespace qcausal;

namespace {

void expect_same_spec(const ProtocolSpec &a, const ProtocolSpec &b) {
  EXPECT_EQ(a.layout.system_dim, b.layout.system_dim);
  EXPECT_EQ(a.layout.alphabets, b.layout.alphabets);
  EXPECT_EQ(a.layout.flag_dim, b.layout.flag_dim);
  EXPECT_EQ(a.steps, b.steps);
  EXPECT_EQ(a.settings, b.settings);
  for (int t = 0; t < a.steps; ++t) EXPECT_TRUE(a.step_unitaries[t] == b.step_unitaries[t]) << "U_" << t + 1;
  for (std::size_t l = 0; l < a.measurements.size(); ++l) {
    for (std::size_t k = 0; k < a.measurements[l].size(); ++k) EXPECT_TRUE(a.measurements[l][k] == b.measurements[l][k]);
  }
}

std::string where_of(const json &doc) {
  try {
    protocol_from_json(doc);
  } catch (const DocumentError &e) {
    return e.where();
  }
  return "";
}

}  // namespace

TEST(Io, ProtocolRoundTripIsBitExact) {
  for (const auto &spec : {build_switch_protocol(), suite_protocol(4).spec, suite_protocol(9).spec}) {
    const json doc = protocol_to_json(spec, "round trip");
    expect_same_spec(spec, protocol_from_json(parse_json_text(doc.dump())));
  }
}

TEST(Io, UnknownFieldIsRejectedWithItsLocation) {
  json doc = protocol_to_json(build_switch_protocol());
  doc["colour"] = "blue";
  EXPECT_EQ(where_of(doc), "/colour");
}

TEST(Io, WrongFormatAndMissingField) {
  json doc = protocol_to_json(build_switch_protocol());
  doc["format"] = "qcausal-protocol/9";
  EXPECT_EQ(where_of(doc), "/format");
  doc = protocol_to_json(build_switch_protocol());
  doc.erase("steps");
  EXPECT_EQ(where_of(doc), "/");
}

TEST(Io, BadMatrixEntryIsLocated) {
  json doc = protocol_to_json(fixtures::fixed_order_protocol());
  doc["step_unitaries"][1][0][0] = "one";
  EXPECT_EQ(where_of(doc).rfind("/step_unitaries/1/0/0", 0), 0u) << where_of(doc);
}

TEST(Io, FewerStepsThanPartiesIsStructural) {
  json doc = protocol_to_json(fixtures::fixed_order_protocol());
  doc["steps"] = 1;
  doc["step_unitaries"].erase(1);
  EXPECT_THROW(protocol_from_json(doc), StructuralError);
}

TEST(Io, NamedStepGates) {
  const auto spec = fixtures::fixed_order_protocol();
  json doc = protocol_to_json(spec);
  doc["step_unitaries"] = json::array({json{{"gate", "control_permutation"}, {"perm", {1, 2, 0}}},
                                       json{{"gate", "control_permutation"}, {"perm", {1, 2, 0}}}});
  expect_same_spec(spec, protocol_from_json(doc));
  doc["step_unitaries"][0] = json{{"gate", "identity"}};
  EXPECT_TRUE(protocol_from_json(doc).step_unitaries[0] == COperator::Identity(6, 6));
  doc["step_unitaries"][0] = json{{"gate", "controlled"}, {"blocks", {nullptr, {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}}}}};
  EXPECT_TRUE(protocol_from_json(doc).step_unitaries[0] ==
              control_conditioned(spec.layout, {COperator(), gate_x()}));
  doc["step_unitaries"][0] = json{{"gate", "teleport"}};
  EXPECT_EQ(where_of(doc), "/step_unitaries/0/gate");
}

TEST(Io, CircuitRoundTrip) {
  const auto c = build_switch_circuit();
  const auto back = circuit_from_json(parse_json_text(circuit_to_json(c).dump()));
  ASSERT_EQ(back.elements.size(), c.elements.size());
  EXPECT_EQ(back.wire_dims, c.wire_dims);
  EXPECT_EQ(back.wire_names, c.wire_names);
  for (std::size_t k = 0; k < c.elements.size(); ++k) {
    EXPECT_EQ(back.elements[k].wires, c.elements[k].wires);
    EXPECT_EQ(back.elements[k].party, c.elements[k].party);
    EXPECT_TRUE(back.elements[k].matrix == c.elements[k].matrix);
  }
  const SettingVector x{{0, 1, 1}};
  EXPECT_EQ(max_abs_difference(simulate_circuit(back, x), simulate_circuit(c, x)), 0.0);
}

TEST(Io, CircuitNamedGatesAndErrors) {
  json doc = parse_json_text(R"({
    "format": "qcausal-circuit/1",
    "wires": [{"name": "s", "dim": 2}, {"name": "c", "dim": 2}],
    "alphabets": [2], "settings": [[0]], "lab_wires": [["s"]],
    "measurements": [[null]],
    "elements": [{"op": "gate", "name": "X", "wires": ["c"]}, {"op": "lab", "party": 1, "control": "c"}]
  })");
  doc["measurements"][0][0] = matrix_to_json(gate_cnot());
  const auto c = circuit_from_json(doc);
  EXPECT_EQ(c.lab_gate_count(), 1);
  EXPECT_TRUE(rewrite_circuit(c).fires_once);

  json bad = doc;
  bad["elements"][0]["wires"] = {"q"};
  try {
    circuit_from_json(bad);
    FAIL();
  } catch (const DocumentError &e) {
    EXPECT_EQ(e.where(), "/elements/0/wires/0");
  }
  bad = doc;
  bad["elements"][0]["name"] = "CNOT";
  try {
    circuit_from_json(bad);
    FAIL();
  } catch (const DocumentError &e) {
    EXPECT_EQ(e.where(), "/elements/0/wires");
  }
}

TEST(Io, SettingTuples) {
  EXPECT_EQ(parse_setting_tuple("0,1,1").values, (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(parse_setting_tuple("011").values, (std::vector<int>{0, 1, 1}));
  EXPECT_THROW(parse_setting_tuple("0,a"), std::invalid_argument);
}

TEST(Io, CausalModelRoundTrip) {
  const auto m = extract_causal_model(build_switch_protocol(), SettingVector{{0, 1, 1}});
  const auto back = causal_model_from_json(parse_json_text(causal_model_to_json(m).dump()));
  EXPECT_EQ(back.next_tables.size(), m.next_tables.size());
  EXPECT_EQ(back.result_tables.size(), m.result_tables.size());
  EXPECT_EQ(max_abs_difference(causal_distribution(back), causal_distribution(m)), 0.0);
}

TEST(Io, DistributionFamilyRoundTrip) {
  const Scenario s{{2, 2}, {2, 2}};
  const auto verts = enumerate_deterministic(s);
  const Behaviour p = 0.25 * verts[1] + 0.75 * verts[90];
  const auto f = family_from_json(parse_json_text(family_to_json(s, {{0, 1}, {0, 1}}, p).dump()));
  EXPECT_EQ(f.scenario.alphabets, s.alphabets);
  EXPECT_TRUE(f.behaviour == p);
}

TEST(Io, MalformedJsonReportsByte) {
  try {
    parse_json_text("{\"format\": ");
    FAIL();
  } catch (const DocumentError &e) {
    EXPECT_EQ(e.where().rfind("byte", 0), 0u);
  }
}
