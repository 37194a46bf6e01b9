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

// Dense complex linear algebra kernel. Composite spaces are products of
// factors flattened mixed-radix, most significant factor first.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qcausal {

using Index = std::int64_t;
using cplx = std::complex<double>;

template <typename Scalar>
using StateT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using OperatorT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using CState = StateT<cplx>;
using COperator = OperatorT<cplx>;

/// Largest total dimension of a composite space or a kron result.
inline constexpr Index kDefaultMaxDim = Index{1} << 22;
/// Largest number of entries in a materialized dense operator (256 MiB).
inline constexpr Index kMaxDenseEntries = Index{1} << 24;

inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kEndToEndTol = 1e-9;

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Guards a dense rows x cols allocation.
void check_dense_capacity(Index rows, Index cols, const char *what);

/// Kronecker product. (kron(a,b))[(i1,i2),(j1,j2)] = a[i1,j1] * b[i2,j2].
template <typename DerivedA, typename DerivedB>
OperatorT<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA> &a,
                                          const Eigen::MatrixBase<DerivedB> &b,
                                          Index max_dim = kDefaultMaxDim) {
  using Scalar = typename DerivedA::Scalar;
  const Index rows = Index(a.rows()) * Index(b.rows());
  const Index cols = Index(a.cols()) * Index(b.cols());
  if (rows > max_dim || cols > max_dim) {
    throw CapacityError("kron: result dimension " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " exceeds maximum " +
                        std::to_string(max_dim));
  }
  check_dense_capacity(rows, cols, "kron");
  OperatorT<Scalar> out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.template cast<Scalar>();
    }
  }
  return out;
}

/// A product of finite-dimensional factors with mixed-radix flattening.
class FactorSpace {
 public:
  FactorSpace() = default;
  explicit FactorSpace(std::vector<Index> dims, Index max_dim = kDefaultMaxDim);

  int num_factors() const { return static_cast<int>(dims_.size()); }
  Index dim(int factor) const { return dims_.at(factor); }
  const std::vector<Index> &dims() const { return dims_; }
  Index stride(int factor) const { return strides_.at(factor); }
  Index total() const { return total_; }

  Index digit(Index flat, int factor) const { return (flat / strides_[factor]) % dims_[factor]; }
  std::vector<Index> digits(Index flat) const;
  Index flatten(const std::vector<Index> &digits) const;

  /// Product of the dimensions of the listed factors.
  Index subspace_dim(const std::vector<int> &factors) const;
  /// Validates a factor list: in range, no repeats.
  void check_factors(const std::vector<int> &factors) const;

 private:
  std::vector<Index> dims_;
  std::vector<Index> strides_;
  Index total_ = 1;
};

/// Flat offsets of every local index over `factors` (listed order is the
/// local mixed-radix order) relative to the base index with those digits 0.
std::vector<Index> local_offsets(const FactorSpace &space, const std::vector<int> &factors);

/// Every flat index whose digits on `fixed` factors are zero, ascending.
std::vector<Index> base_indices(const FactorSpace &space, const std::vector<int> &fixed);

/// op acting on `factors` (in the listed order), identity elsewhere, written
/// in the canonical factor order of `space`.
template <typename Derived>
OperatorT<typename Derived::Scalar> embed(const Eigen::MatrixBase<Derived> &op, const FactorSpace &space,
                                          const std::vector<int> &factors) {
  using Scalar = typename Derived::Scalar;
  space.check_factors(factors);
  const Index local = space.subspace_dim(factors);
  if (op.rows() != local || op.cols() != local) {
    throw DimensionError("embed: operator is " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                         " but the named factors span dimension " + std::to_string(local));
  }
  check_dense_capacity(space.total(), space.total(), "embed");
  const auto offsets = local_offsets(space, factors);
  const auto bases = base_indices(space, factors);
  OperatorT<Scalar> out = OperatorT<Scalar>::Zero(space.total(), space.total());
  for (Index base : bases) {
    for (Index i = 0; i < local; ++i) {
      for (Index j = 0; j < local; ++j) {
        out(base + offsets[i], base + offsets[j]) = op(i, j);
      }
    }
  }
  return out;
}

/// A unitary on some target factors, optionally conditioned on other factors
/// holding given basis values: P_ctrl (x) M + (I - P_ctrl) (x) I.
struct LocalGate {
  std::vector<int> targets;
  COperator matrix;
  std::vector<std::pair<int, Index>> controls;
};

/// Applies the gate to every column of `states` in place.
void apply(const LocalGate &gate, const FactorSpace &space, COperator &states);
void apply(const LocalGate &gate, const FactorSpace &space, CState &state);
void apply_all(const std::vector<LocalGate> &gates, const FactorSpace &space, CState &state);

using SparseState = std::unordered_map<Index, cplx>;

/// Applies the gate to a sparse vector; entries that cancel to exactly 0 are dropped.
SparseState apply(const LocalGate &gate, const FactorSpace &space, const SparseState &state);

/// Dense matrix of a gate on the full space.
COperator gate_operator(const LocalGate &gate, const FactorSpace &space);

/// Haar-distributed unitary: Ginibre matrix, QR, then R's diagonal phases
/// folded into Q. Deterministic in `seed`.
COperator haar_unitary(Index dim, std::uint64_t seed);

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar inner(const Eigen::MatrixBase<DerivedA> &a, const Eigen::MatrixBase<DerivedB> &b) {
  if (a.size() != b.size()) {
    throw DimensionError("inner: dimension mismatch " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  return a.dot(b);  // conjugate-linear in a
}

/// max |U^dagger U - I| entrywise.
double unitarity_defect(const COperator &u);
inline bool is_unitary(const COperator &u, double tol = kAlgebraicTol) {
  return u.rows() == u.cols() && unitarity_defect(u) <= tol;
}
/// max of |P^2 - P| and |P^dagger - P| entrywise.
double projector_defect(const COperator &p);

CState basis_state(Index dim, Index index);

}  // namespace qcausal
