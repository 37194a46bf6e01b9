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

#include "qcausal/protocol.h"

#include <gtest/gtest.h>

#include "qcausal/fixtures.h"
#include "test_support.h"

using namespace qcausal;

TEST(Layout, Dimensions) {
  const auto layout = SpaceLayout::make(2, {2}, 2);
  EXPECT_EQ(layout.total_dim(), 16);
  const auto sw = build_switch_protocol().layout;
  EXPECT_EQ(sw.total_dim(), 4 * 4 * 8 * 64);
  const CState zero = initial_state(sw);
  EXPECT_EQ(zero.size(), 8192);
  EXPECT_EQ(zero[0], cplx(1.0));
  EXPECT_EQ(zero.squaredNorm(), 1.0);
}

TEST(Layout, FactorOrder) {
  const auto layout = SpaceLayout::make(3, {2, 3}, 4);
  const auto space = layout.space();
  EXPECT_EQ(space.dims(), (std::vector<Index>{3, 3, 2, 3, 4, 4}));
  EXPECT_EQ(layout.result_factor(2), 3);
  EXPECT_EQ(layout.flag_factor(1), 4);
}

TEST(FlagShift, IsCyclic) {
  const COperator g = flag_shift(3);
  EXPECT_TRUE(is_unitary(g));
  EXPECT_EQ(g(1, 0), cplx(1.0));
  EXPECT_EQ(g(2, 1), cplx(1.0));
  EXPECT_EQ(g(0, 2), cplx(1.0));
}

TEST(BuildV, DoNothingOnControlZero) {
  const auto spec = build_switch_protocol();
  const SettingVector x{{0, 1, 1}};
  CState state = initial_state(spec.layout);
  const CState before = state;
  apply_V(spec, x, state);
  EXPECT_EQ((state - before).cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildV, FiresAliceOnControlOne) {
  const auto spec = build_switch_protocol();
  const SettingVector x{{0, 1, 1}};
  const auto space = spec.layout.space();
  CState state = CState::Zero(space.total());
  state[space.flatten({0, 1, 0, 0, 0, 0, 0, 0})] = 1.0;
  apply_V(spec, x, state);
  const Index expected = space.flatten({0, 1, 0, 0, 0, 1, 0, 0});
  EXPECT_EQ(std::abs(state[expected]), 1.0);
  EXPECT_NEAR(state.squaredNorm(), 1.0, 1e-15);
}

TEST(BuildV, UnitaryAndMatchesGates) {
  const auto spec = fixtures::fixed_order_protocol();
  for (const auto &x : all_settings(spec)) {
    const COperator v = build_V(spec, x);
    EXPECT_TRUE(is_unitary(v));
    CState psi = CState::Random(v.rows());
    const CState expected = v * psi;
    apply_V(spec, x, psi);
    EXPECT_LE((psi - expected).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(BuildV, ColumnsIgnoreOtherPartiesSettings) {
  const auto spec = fixtures::fixed_order_protocol();
  const auto space = spec.layout.space();
  const COperator v00 = build_V(spec, SettingVector{{0, 0}});
  const COperator v01 = build_V(spec, SettingVector{{0, 1}});
  // Columns with control |1> only see party 1's setting.
  for (Index j = 0; j < space.total(); ++j) {
    if (space.digit(j, SpaceLayout::control_factor()) != 1) continue;
    EXPECT_LE((v00.col(j) - v01.col(j)).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Validity, SwitchIsValid) {
  const auto report = validate_protocol(build_switch_protocol());
  EXPECT_TRUE(report.valid);
  EXPECT_LE(report.max_leak, 1e-10);
  EXPECT_LE(report.max_wrap_amplitude, 1e-12);
  EXPECT_EQ(report.entries.size(), 8u);
}

TEST(Validity, IdleProtocolLeaksEverything) {
  const auto report = validate_protocol(fixtures::idle_protocol());
  EXPECT_FALSE(report.valid);
  for (const auto &e : report.entries) EXPECT_NEAR(e.leak, 1.0, 1e-15);
}

TEST(Validity, SinglePartyIsExact) {
  const auto report = validate_protocol(fixtures::single_party_protocol());
  EXPECT_TRUE(report.valid);
  EXPECT_EQ(report.max_leak, 0.0);
}

TEST(Validity, FewerStepsThanPartiesIsStructural) {
  auto spec = fixtures::fixed_order_protocol();
  spec.steps = 1;
  spec.step_unitaries.resize(1);
  try {
    validate_protocol(spec);
    FAIL() << "expected StructuralError";
  } catch (const StructuralError &e) {
    EXPECT_NE(std::string(e.what()).find("T >= N"), std::string::npos);
  }
}

TEST(Validity, NonUnitaryStepIsStructural) {
  auto spec = fixtures::fixed_order_protocol();
  spec.step_unitaries[0](0, 0) = 2.0;
  EXPECT_THROW(validate_protocol(spec), StructuralError);
}

TEST(Validity, WrongMeasurementShapeIsStructural) {
  auto spec = fixtures::fixed_order_protocol();
  spec.measurements[1][0] = COperator::Identity(2, 2);
  EXPECT_THROW(check_structure(spec), StructuralError);
}

TEST(Validity, DistributionIsNormalized) {
  const auto spec = build_switch_protocol();
  for (const auto &x : all_settings(spec)) {
    const CState out = run_protocol(spec, x);
    EXPECT_NEAR(out.squaredNorm(), 1.0, 1e-12);
  }
}

TEST(Settings, Enumeration) {
  const auto spec = build_switch_protocol();
  const auto xs = all_settings(spec);
  ASSERT_EQ(xs.size(), 8u);
  EXPECT_EQ(xs.front().values, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(xs[1].values, (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(xs.back().values, (std::vector<int>{1, 1, 1}));
  EXPECT_THROW(spec.check_settings(SettingVector{{0, 2, 0}}), std::exception);
}

TEST(NamedGates, ControlConditioned) {
  const auto layout = SpaceLayout::make(2, {2}, 2);
  const COperator u = control_conditioned(layout, {COperator(), gate_x()});
  EXPECT_TRUE(is_unitary(u));
  // |s=0,c=1> -> |s=1,c=1>, |s=0,c=0> unchanged
  EXPECT_EQ(u(1 * 2 + 1, 0 * 2 + 1), cplx(1.0));
  EXPECT_EQ(u(0, 0), cplx(1.0));
}
