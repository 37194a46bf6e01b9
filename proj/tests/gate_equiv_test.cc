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

#include "qcausal/gate_equiv.h"

#include <gtest/gtest.h>

#include "qcausal/fixtures.h"
#include "test_support.h"

using namespace qcausal;

namespace {

double max_abs(const COperator &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(GateEquiv, NamedGatesAreUnitary) {
  for (const auto &g : {gate_x(), gate_h(), gate_cnot(), gate_swap()}) EXPECT_TRUE(is_unitary(g));
  // control is the first wire
  EXPECT_EQ(gate_cnot()(3, 2), cplx(1.0));
  EXPECT_EQ(gate_cnot()(1, 1), cplx(1.0));
}

TEST(GateEquiv, ControlPrepSwapsZeroAndParty) {
  const auto layout = SpaceLayout::make(2, {2, 2}, 3);
  const COperator p = control_prep(layout, 2);
  EXPECT_TRUE(is_unitary(p));
  EXPECT_EQ(p(2, 0), cplx(1.0));
  EXPECT_EQ(p(0, 2), cplx(1.0));
  EXPECT_EQ(p(1, 1), cplx(1.0));
}

TEST(GateEquiv, IndividualFromVOnSmallSpecs) {
  const auto spec = fixtures::fixed_order_protocol();
  for (const auto &x : all_settings(spec)) {
    for (int l = 1; l <= 2; ++l) EXPECT_LE(individual_from_V_deviation(spec, l, x), 1e-12);
  }
  const auto sw = build_switch_protocol();
  for (int l = 1; l <= 3; ++l) EXPECT_LE(individual_from_V_deviation(sw, l, SettingVector{{0, 1, 1}}), 1e-12);
}

TEST(GateEquiv, VFromIndividualsOnSmallSpecs) {
  const auto spec = fixtures::fixed_order_protocol();
  for (const auto &x : all_settings(spec)) EXPECT_LE(V_from_individuals_deviation(spec, x), 1e-12);
  for (std::uint64_t i = 0; i < 3; ++i) {
    const auto rp = suite_protocol(i);
    EXPECT_LE(V_from_individuals_deviation(rp.spec, all_settings(rp.spec).back()), 1e-12);
  }
}

TEST(GateEquiv, DenseAndGateFormsAgree) {
  const auto spec = fixtures::fixed_order_protocol();
  const SettingVector x{{1, 0}};
  const COperator dense = individual_from_V(spec, 1, x);
  EXPECT_TRUE(is_unitary(dense));
  const auto space = individual_from_V_space(spec.layout);
  CState psi = CState::Random(space.total());
  const CState expected = dense * psi;
  apply_all(individual_from_V_gates(spec, 1, x), space, psi);
  EXPECT_LE((psi - expected).cwiseAbs().maxCoeff(), 1e-13);

  const COperator v = V_from_individuals(spec, x);
  EXPECT_TRUE(is_unitary(v));
  EXPECT_EQ(v.rows(), V_from_individuals_space(spec.layout).total());
}

TEST(GateEquiv, IndividualGateIsControlledMeasurement) {
  const auto spec = fixtures::fixed_order_protocol();
  const COperator g = individual_gate(spec, 1, 1);
  EXPECT_TRUE(is_unitary(g));
  const auto space = individual_space(spec.layout);
  // With the individual control at 0 nothing happens.
  for (Index j = 0; j < space.total(); ++j) {
    if (space.digit(j, 0) != 0) continue;
    EXPECT_EQ(max_abs(g.col(j) - COperator::Identity(space.total(), space.total()).col(j)), 0.0);
  }
}

TEST(Rewrite, SwitchCircuitMatchesDirectSimulation) {
  const auto circuit = build_switch_circuit();
  const auto r = rewrite_circuit(circuit);
  EXPECT_TRUE(r.fires_once);
  EXPECT_LE(r.max_leak, 1e-9);
  const SettingVector x{{0, 1, 1}};
  const auto direct = simulate_circuit(circuit, x);
  EXPECT_NEAR(direct({0, 0, 0}), 5.0 / 16.0, 1e-12);
  EXPECT_LE(max_abs_difference(quantum_distribution(r.spec, x), direct), 1e-9);
}

TEST(Rewrite, RandomCircuits) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto circuit = random_circuit(seed);
    const auto r = rewrite_circuit(circuit);
    ASSERT_TRUE(r.fires_once) << "seed " << seed;
    for (const auto &x : all_settings(circuit)) {
      EXPECT_LE(max_abs_difference(quantum_distribution(r.spec, x), simulate_circuit(circuit, x)), 1e-9);
    }
  }
}

TEST(Rewrite, DoubleFiringIsReported) {
  IndividualGateCircuit c;
  c.wire_dims = {2, 2};
  c.wire_names = {"s", "c"};
  c.alphabets = {2};
  c.settings = {{0}};
  c.lab_wires = {{0}};
  c.measurements = {{gate_cnot()}};
  c.add_unitary({1}, gate_x());
  c.add_lab_gate(1, 1);
  c.add_lab_gate(1, 1);
  const auto r = rewrite_circuit(c);
  EXPECT_FALSE(r.fires_once);
  EXPECT_GT(r.max_leak, 0.5);
}

TEST(Rewrite, MalformedCircuitIsRejected) {
  IndividualGateCircuit c;
  c.wire_dims = {2, 2};
  c.wire_names = {"s", "c"};
  c.alphabets = {2};
  c.settings = {{0}};
  c.lab_wires = {{0}};
  c.measurements = {{gate_cnot()}};
  c.add_unitary({1, 1}, gate_cnot());
  EXPECT_THROW(check_circuit(c), std::exception);
}
