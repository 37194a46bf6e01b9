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

#include "qcausal/tensor.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace qcausal;

namespace {

COperator random_matrix(Index rows, Index cols, unsigned seed) {
  std::srand(seed);
  return COperator::Random(rows, cols);
}

double max_abs(const COperator &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
  const COperator i2 = COperator::Identity(2, 2);
  EXPECT_EQ(max_abs(kron(i2, i2) - COperator::Identity(4, 4)), 0.0);
}

TEST(Kron, ProjectorTimesX) {
  COperator p = COperator::Zero(2, 2);
  p(0, 0) = 1.0;
  COperator x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  COperator expected = COperator::Zero(4, 4);
  expected.topLeftCorner(2, 2) = x;
  EXPECT_EQ(max_abs(kron(p, x) - expected), 0.0);
}

TEST(Kron, MatchesScalarLoop) {
  const COperator a = random_matrix(3, 3, 1);
  const COperator b = random_matrix(2, 2, 2);
  const COperator k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  for (int i1 = 0; i1 < 3; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j1 = 0; j1 < 3; ++j1)
        for (int j2 = 0; j2 < 2; ++j2) EXPECT_EQ(k(i1 * 2 + i2, j1 * 2 + j2), a(i1, j1) * b(i2, j2));
}

TEST(Kron, Associative) {
  const COperator a = random_matrix(2, 3, 3), b = random_matrix(3, 2, 4), c = random_matrix(2, 2, 5);
  EXPECT_LE(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))), 1e-14);
}

TEST(Kron, CapacityGuard) {
  const COperator a = COperator::Identity(4, 4);
  EXPECT_THROW(kron(a, a, 8), CapacityError);
}

TEST(FactorSpace, DigitsRoundTrip) {
  const FactorSpace space({2, 3, 2});
  EXPECT_EQ(space.total(), 12);
  for (Index i = 0; i < space.total(); ++i) EXPECT_EQ(space.flatten(space.digits(i)), i);
  EXPECT_EQ(space.digits(7), (std::vector<Index>{1, 0, 1}));
}

TEST(Embed, XOnFirstFactor) {
  const FactorSpace space({2, 3, 2});
  COperator x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  EXPECT_EQ(max_abs(embed(x, space, {0}) - kron(x, COperator::Identity(6, 6))), 0.0);
}

TEST(Embed, IdentityStaysIdentity) {
  const FactorSpace space({2, 3, 2});
  EXPECT_EQ(max_abs(embed(COperator::Identity(6, 6), space, {2, 1}) - COperator::Identity(12, 12)), 0.0);
}

// Oracle: out = sum over basis columns, rebuilt digit by digit.
static void expect_matches_oracle(const COperator &u, const FactorSpace &space, const std::vector<int> &factors) {
  const COperator full = embed(u, space, factors);
  for (Index col = 0; col < space.total(); ++col) {
    const auto in = space.digits(col);
    Index local_in = 0;
    for (int f : factors) local_in = local_in * space.dim(f) + in[f];
    for (Index row = 0; row < space.total(); ++row) {
      const auto out = space.digits(row);
      Index local_out = 0;
      bool rest_equal = true;
      for (int f = 0; f < space.num_factors(); ++f) {
        if (std::find(factors.begin(), factors.end(), f) == factors.end()) rest_equal = rest_equal && out[f] == in[f];
      }
      for (int f : factors) local_out = local_out * space.dim(f) + out[f];
      const cplx expected = rest_equal ? u(local_out, local_in) : cplx(0.0);
      EXPECT_EQ(full(row, col), expected) << "row " << row << " col " << col;
    }
  }
  EXPECT_TRUE(is_unitary(full));
}

TEST(Embed, MatchesIndexArithmetic) {
  const FactorSpace space({2, 3, 2});
  // Factors 0 and 2 span dimension 4; the 6x6 case uses factors 2 and 1 in
  // reversed order.
  expect_matches_oracle(haar_unitary(4, 11), space, {0, 2});
  expect_matches_oracle(haar_unitary(6, 12), space, {2, 1});
  expect_matches_oracle(haar_unitary(12, 13), space, {1, 0, 2});
}

TEST(Embed, Errors) {
  const FactorSpace space({2, 3, 2});
  EXPECT_THROW(embed(COperator::Identity(2, 2), space, {5}), std::exception);
  EXPECT_THROW(embed(COperator::Identity(3, 3), space, {0}), DimensionError);
  EXPECT_THROW(embed(COperator::Identity(4, 4), space, {0, 0}), std::exception);
}

TEST(Apply, MatchesDenseEmbedding) {
  const FactorSpace space({2, 3, 2, 2});
  const LocalGate g{{3, 1}, haar_unitary(6, 7), {{0, 1}}};
  COperator proj = COperator::Zero(2, 2);
  proj(1, 1) = 1.0;
  COperator ctrl = COperator::Identity(2, 2) - proj;
  // P1 (x) U + P0 (x) I on factors (0, 3, 1) in that order, then embedded.
  const COperator local = kron(proj, g.matrix) + kron(ctrl, COperator::Identity(6, 6));
  const COperator dense = embed(local, space, {0, 3, 1});
  EXPECT_LE(max_abs(gate_operator(g, space) - dense), 1e-15);

  CState psi = CState::Random(space.total());
  const CState expected = dense * psi;
  apply(g, space, psi);
  EXPECT_LE((psi - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Apply, SparseMatchesDense) {
  const FactorSpace space({3, 2, 2});
  const LocalGate g{{0, 2}, haar_unitary(6, 9), {{1, 0}}};
  const COperator dense = gate_operator(g, space);
  for (Index j = 0; j < space.total(); ++j) {
    const SparseState out = apply(g, space, SparseState{{j, cplx(1.0)}});
    for (Index i = 0; i < space.total(); ++i) {
      auto it = out.find(i);
      const cplx v = it == out.end() ? cplx(0.0) : it->second;
      EXPECT_LE(std::abs(v - dense(i, j)), 1e-15);
    }
  }
}

TEST(Apply, PreservesNorm) {
  const FactorSpace space({2, 3, 4});
  CState psi = CState::Random(space.total());
  const double before = psi.squaredNorm();
  apply(LocalGate{{2, 0}, haar_unitary(8, 3), {}}, space, psi);
  EXPECT_NEAR(psi.squaredNorm(), before, 1e-12);
}

TEST(Haar, DimensionOneIsAPhase) {
  const COperator u = haar_unitary(1, 5);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
}

TEST(Haar, Deterministic) { EXPECT_EQ(max_abs(haar_unitary(4, 42) - haar_unitary(4, 42)), 0.0); }

TEST(Haar, UnitaryUpToSixteen) {
  for (Index d = 1; d <= 16; ++d) EXPECT_LE(unitarity_defect(haar_unitary(d, 100 + d)), 1e-12) << "dim " << d;
}

TEST(Haar, FirstMoment) {
  double mean = 0.0;
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) mean += std::norm(haar_unitary(4, s)(0, 0));
  mean /= samples;
  EXPECT_NEAR(mean, 0.25, 0.02);
}

TEST(Inner, Basics) {
  EXPECT_EQ(inner(basis_state(3, 0), basis_state(3, 1)), cplx(0.0));
  const CState a = CState::Random(5), b = CState::Random(5);
  EXPECT_NEAR(inner(a, a).imag(), 0.0, 1e-15);
  EXPECT_NEAR(inner(a, a).real(), a.squaredNorm(), 1e-14);
  EXPECT_LE(std::abs(inner(a, b) - std::conj(inner(b, a))), 1e-15);
  EXPECT_THROW(inner(a, CState::Random(4)), DimensionError);
}

TEST(Projector, Defect) {
  COperator p = COperator::Zero(2, 2);
  p(0, 0) = 1.0;
  EXPECT_EQ(projector_defect(p), 0.0);
  EXPECT_GT(projector_defect(2.0 * p), 0.5);
}
