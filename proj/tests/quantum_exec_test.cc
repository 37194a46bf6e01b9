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

#include "qcausal/quantum_exec.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qcausal/fixtures.h"
#include "test_support.h"

using namespace qcausal;

namespace {

std::vector<int> rf_factors(const SpaceLayout &layout) {
  std::vector<int> f;
  for (int l = 1; l <= layout.parties; ++l) f.push_back(layout.result_factor(l));
  for (int l = 1; l <= layout.parties; ++l) f.push_back(layout.flag_factor(l));
  return f;
}

// Dense U_t V ... V U_1 |0>, built only from embed and build_V.
CState literal_pre(const ProtocolSpec &spec, const SettingVector &x, int t) {
  const auto space = spec.layout.space();
  const COperator v = build_V(spec, x);
  CState state = initial_state(spec.layout);
  for (int k = 1; k <= t; ++k) {
    if (k > 1) state = v * state;
    state = embed(spec.step_unitaries[k - 1], space, {0, 1}) * state;
  }
  return state;
}

COperator control_projector(const SpaceLayout &layout, int party) {
  COperator p = COperator::Zero(layout.control_dim(), layout.control_dim());
  p(party, party) = 1.0;
  return embed(p, layout.space(), {SpaceLayout::control_factor()});
}

// Evolves the density operator step by step and reads the diagonal blocks
// of the result registers.
std::vector<double> density_oracle(const ProtocolSpec &spec, const SettingVector &x) {
  const auto space = spec.layout.space();
  const COperator v = build_V(spec, x);
  const CState zero = initial_state(spec.layout);
  COperator rho = zero * zero.adjoint();
  for (int t = 1; t <= spec.steps; ++t) {
    const COperator u = v * embed(spec.step_unitaries[t - 1], space, {0, 1});
    rho = u * rho * u.adjoint();
  }
  Index results = 1;
  for (Index a : spec.layout.alphabets) results *= a;
  std::vector<double> probs(results, 0.0);
  for (Index i = 0; i < space.total(); ++i) {
    Index a = 0;
    for (int l = 1; l <= spec.parties(); ++l) a = a * spec.layout.alphabet(l) + space.digit(i, spec.layout.result_factor(l));
    probs[a] += rho(i, i).real();
  }
  return probs;
}

bool ascending(const History &h) {
  for (int i = 1; i < h.size(); ++i) {
    if (h.entries()[i - 1].party > h.entries()[i].party) return false;
  }
  return true;
}

}  // namespace

TEST(QuantumDistribution, SwitchValue) {
  const auto d = quantum_distribution(build_switch_protocol(), SettingVector{{0, 1, 1}});
  EXPECT_NEAR(d({0, 0, 0}), 5.0 / 16.0, 1e-10);
  EXPECT_NEAR(d.total(), 1.0, 1e-9);
}

TEST(QuantumDistribution, SwitchFinalStateBranch) {
  // The |000>_r branch with s1 = |+> carries (1/(2 sqrt 2))|+> + (1/4)|0> on s2.
  const auto spec = build_switch_protocol();
  const auto space = spec.layout.space();
  const CState out = run_protocol(spec, SettingVector{{0, 1, 1}});
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector2cd plus(r, r);
  const Eigen::Vector2cd s2 = plus / (2.0 * std::sqrt(2.0)) + Eigen::Vector2cd(0.25, 0.0);
  // Control ends on |3> (Charlie); all flags raised.
  for (Index s1 = 0; s1 < 2; ++s1) {
    for (Index b = 0; b < 2; ++b) {
      const Index i = space.flatten({s1 * 2 + b, 3, 0, 0, 0, 1, 1, 1});
      EXPECT_NEAR(std::abs(out[i] - plus[s1] * s2[b]), 0.0, 1e-12) << "s1=" << s1 << " s2=" << b;
    }
  }
}

TEST(QuantumDistribution, MatchesDensityOracle) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    RandomProtocolOptions opt;
    opt.parties = 2;
    opt.system_dim = 2;
    opt.steps = 2 + static_cast<int>(seed % 2);
    const auto rp = random_protocol(opt, 900 + seed);
    for (const auto &x : all_settings(rp.spec)) {
      const auto d = quantum_distribution(rp.spec, x);
      const auto oracle = density_oracle(rp.spec, x);
      for (std::size_t a = 0; a < oracle.size(); ++a) EXPECT_NEAR(d.probs[a], oracle[a], 1e-12);
    }
  }
}

TEST(QuantumDistribution, TotalUnitary) {
  const auto spec = fixtures::fixed_order_protocol();
  const COperator u = total_unitary(spec, SettingVector{{1, 0}});
  EXPECT_LE(unitarity_defect(u), 1e-11);
}

TEST(QuantumDistribution, RefusesInvalidProtocol) {
  EXPECT_THROW(quantum_distribution(fixtures::idle_protocol(), SettingVector{{0, 0}}), InvalidProtocolError);
}

TEST(QuantumDistribution, PaddingInvariance) {
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto spec = suite_protocol(i).spec;
    const auto pad = fixtures::padded(spec);
    for (const auto &x : all_settings(spec)) {
      EXPECT_LE(max_abs_difference(quantum_distribution(spec, x), quantum_distribution(pad, x)), 1e-12);
    }
  }
}

TEST(HistoryProjector, EmptyAndFull) {
  const auto layout = SpaceLayout::make(2, {2, 3}, 3);
  const auto space = layout.space();
  const COperator p0 = history_projector(layout, History());
  const COperator pfull = history_projector(layout, History({{2, 2, 0}, {1, 1, 0}}));
  const FactorSpace rf({2, 3, 3, 3});
  for (Index i = 0; i < rf.total(); ++i) {
    const auto d = rf.digits(i);
    EXPECT_EQ(p0(i, i).real(), d[2] == 0 && d[3] == 0 ? 1.0 : 0.0);
    EXPECT_EQ(pfull(i, i).real(), d[0] == 1 && d[1] == 2 && d[2] == 1 && d[3] == 1 ? 1.0 : 0.0);
  }
  (void)space;
}

TEST(HistoryProjector, RankAndIdempotence) {
  const auto layout = SpaceLayout::make(2, {2, 3, 2}, 4);
  for (const History &h : {History(), History({{2, 1, 0}}), History({{1, 0, 0}, {3, 1, 0}}),
                           History({{1, 1, 0}, {2, 0, 0}, {3, 0, 0}})}) {
    const COperator p = history_projector(layout, h);
    EXPECT_LE(projector_defect(p), 1e-14);
    Index rank = 1;
    for (int l = 1; l <= 3; ++l) {
      if (!h.contains(l)) rank *= layout.alphabet(l);
    }
    EXPECT_NEAR(p.trace().real(), static_cast<double>(rank), 1e-14) << to_string(h);
  }
  EXPECT_THROW(history_projector(layout, History({{2, 3, 0}})), std::exception);
}

TEST(History, Invariants) {
  const History h({{2, 0, 1}, {1, 1, 0}});
  EXPECT_EQ(h.acted_mask(), 3u);
  EXPECT_TRUE(h.contains(1));
  EXPECT_FALSE(h.contains(3));
  EXPECT_EQ(h.without_last(), History({{2, 0, 1}}));
  EXPECT_THROW(check_history(SpaceLayout::make(2, {2, 2}, 3), History({{1, 0, 0}, {1, 1, 0}})), std::exception);
}

TEST(History, EnumerationOrder) {
  const auto spec = fixtures::fixed_order_protocol();
  const auto hs = enumerate_histories(spec, SettingVector{{0, 1}});
  // 1 + 2*2 + 2*2*2
  ASSERT_EQ(hs.size(), 13u);
  EXPECT_TRUE(hs[0].empty());
  EXPECT_EQ(hs[1], History({{1, 0, 0}}));
  EXPECT_EQ(hs[2], History({{1, 0, 0}, {2, 0, 1}}));
  EXPECT_EQ(hs[3], History({{1, 0, 0}, {2, 1, 1}}));
  EXPECT_EQ(hs[4], History({{1, 1, 0}}));
}

TEST(ProjectedStates, MatchLiteralDefinitions) {
  RandomProtocolOptions opt;
  opt.parties = 2;
  opt.steps = 3;
  const auto spec = random_protocol(opt, 77).spec;
  const SettingVector x = all_settings(spec).back();
  const ForwardSweep sweep(spec, x);
  const auto rf = rf_factors(spec.layout);
  const auto space = spec.layout.space();
  const COperator v = build_V(spec, x);
  for (const auto &h : enumerate_histories(spec, x)) {
    const COperator pi = embed(history_projector(spec.layout, h), space, rf);
    for (int t = 1; t <= spec.steps; ++t) {
      const CState pre = literal_pre(spec, x, t);
      for (int l = 0; l <= spec.parties(); ++l) {
        if (l != 0 && h.contains(l)) continue;
        const CState psi = control_projector(spec.layout, l) * (pi * pre);
        EXPECT_LE((sweep.psi(l, t, h) - psi).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_LE((psi_state(spec, x, l, t, h).state - psi).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_NEAR(sweep.psi_norm2(l, t, h), psi.squaredNorm(), 1e-13);
      }
      if (h.empty()) continue;
      const int l = h.back().party;
      const History prev = h.without_last();
      const COperator prev_pi = embed(history_projector(spec.layout, prev), space, rf);
      COperator ra = COperator::Zero(spec.layout.alphabet(l), spec.layout.alphabet(l));
      ra(h.back().outcome, h.back().outcome) = 1.0;
      const CState psi_prev = control_projector(spec.layout, l) * (prev_pi * pre);
      const CState phi = embed(ra, space, {spec.layout.result_factor(l)}) * (v * psi_prev);
      EXPECT_LE((sweep.phi(l, t, h) - phi).cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_LE((phi_state(spec, x, l, t, h).state - phi).cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_NEAR(sweep.phi_norm2(l, t, h), phi.squaredNorm(), 1e-13);
    }
  }
}

TEST(ProjectedStates, ResolutionOfIdentity) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto spec = suite_protocol(i).spec;
    for (const auto &x : all_settings(spec)) {
      const ForwardSweep sweep(spec, x);
      const auto hs = enumerate_histories(spec, x);
      for (int t = 1; t <= spec.steps; ++t) {
        double total = 0.0;
        for (const auto &h : hs) {
          if (!ascending(h)) continue;
          for (int l = 0; l <= spec.parties(); ++l) {
            if (l == 0 || !h.contains(l)) total += sweep.psi_norm2(l, t, h);
          }
        }
        EXPECT_NEAR(total, 1.0, 1e-12) << "spec " << i << " t " << t;
      }
    }
  }
}

TEST(ProjectedStates, FirstStepHasNoV) {
  const auto spec = build_switch_protocol();
  const SettingVector x{{0, 1, 1}};
  const ForwardSweep sweep(spec, x);
  CState pre = initial_state(spec.layout);
  apply_step_unitary(spec, 1, pre);
  EXPECT_LE((sweep.pre(1) - pre).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(sweep.psi_norm2(1, 1, History()), 0.5, 1e-12);
}

TEST(ProjectedStates, PhiRequiresLastParty) {
  const auto spec = build_switch_protocol();
  const SettingVector x{{0, 1, 1}};
  EXPECT_THROW(phi_state(spec, x, 2, 1, History({{1, 0, 0}})), std::exception);
  EXPECT_THROW(psi_state(spec, x, 1, 1, History({{1, 0, 0}})), std::exception);
}

TEST(ProjectedStates, ZeroPsiGivesZeroPhi) {
  const auto spec = build_switch_protocol();
  const ForwardSweep sweep(spec, SettingVector{{0, 1, 1}});
  // Charlie never acts first.
  EXPECT_EQ(sweep.psi_norm2(3, 1, History()), 0.0);
  EXPECT_EQ(sweep.phi_norm2(3, 1, History({{3, 0, 1}})), 0.0);
}

TEST(ProjectedStates, EvolveToEndPreservesNorm) {
  const auto spec = suite_protocol(1).spec;
  const SettingVector x = all_settings(spec).front();
  for (int t = 1; t <= spec.steps; ++t) {
    const auto ps = psi_state(spec, x, 1, t, History());
    const auto bar = evolve_to_end(spec, x, ps);
    EXPECT_NEAR(bar.state.norm(), ps.state.norm(), 1e-12);
    EXPECT_EQ(bar.kind, StateKind::kPsiBar);
    if (t == spec.steps) {
      CState vpsi = ps.state;
      apply_V(spec, x, vpsi);
      EXPECT_LE((bar.state - vpsi).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
  const auto last = phi_state(spec, x, 2, spec.steps, History({{2, 0, x[2]}}));
  EXPECT_LE((evolve_to_end(spec, x, last).state - last.state).cwiseAbs().maxCoeff(), 0.0);
}
