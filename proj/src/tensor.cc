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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qcausal {

void check_dense_capacity(Index rows, Index cols, const char *what) {
  if (rows <= 0 || cols <= 0) {
    throw DimensionError(std::string(what) + ": empty operator");
  }
  if (rows > kMaxDenseEntries / cols) {
    throw CapacityError(std::string(what) + ": dense " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " operator exceeds the dense capacity of " + std::to_string(kMaxDenseEntries) +
                        " entries");
  }
}

FactorSpace::FactorSpace(std::vector<Index> dims, Index max_dim) : dims_(std::move(dims)) {
  strides_.assign(dims_.size(), 1);
  total_ = 1;
  for (int f = num_factors() - 1; f >= 0; --f) {
    if (dims_[f] < 1) {
      throw DimensionError("factor " + std::to_string(f) + " has non-positive dimension");
    }
    strides_[f] = total_;
    if (total_ > max_dim / dims_[f]) {
      throw CapacityError("composite dimension exceeds maximum " + std::to_string(max_dim));
    }
    total_ *= dims_[f];
  }
}

std::vector<Index> FactorSpace::digits(Index flat) const {
  std::vector<Index> out(dims_.size());
  for (int f = 0; f < num_factors(); ++f) out[f] = digit(flat, f);
  return out;
}

Index FactorSpace::flatten(const std::vector<Index> &digits) const {
  if (digits.size() != dims_.size()) throw DimensionError("flatten: wrong number of digits");
  Index flat = 0;
  for (int f = 0; f < num_factors(); ++f) {
    if (digits[f] < 0 || digits[f] >= dims_[f]) throw DimensionError("flatten: digit out of range");
    flat += digits[f] * strides_[f];
  }
  return flat;
}

Index FactorSpace::subspace_dim(const std::vector<int> &factors) const {
  Index d = 1;
  for (int f : factors) d *= dims_.at(f);
  return d;
}

void FactorSpace::check_factors(const std::vector<int> &factors) const {
  std::vector<bool> seen(dims_.size(), false);
  for (int f : factors) {
    if (f < 0 || f >= num_factors()) {
      throw DimensionError("factor index " + std::to_string(f) + " out of range [0," +
                           std::to_string(num_factors()) + ")");
    }
    if (seen[f]) throw DimensionError("factor index " + std::to_string(f) + " repeated");
    seen[f] = true;
  }
}

std::vector<Index> local_offsets(const FactorSpace &space, const std::vector<int> &factors) {
  std::vector<Index> offsets{0};
  for (int f : factors) {
    std::vector<Index> next;
    next.reserve(offsets.size() * space.dim(f));
    for (Index o : offsets) {
      for (Index d = 0; d < space.dim(f); ++d) next.push_back(o + d * space.stride(f));
    }
    offsets = std::move(next);
  }
  return offsets;
}

std::vector<Index> base_indices(const FactorSpace &space, const std::vector<int> &fixed) {
  std::vector<int> free;
  for (int f = 0; f < space.num_factors(); ++f) {
    if (std::find(fixed.begin(), fixed.end(), f) == fixed.end()) free.push_back(f);
  }
  auto bases = local_offsets(space, free);
  std::sort(bases.begin(), bases.end());
  return bases;
}

namespace {

struct GatePlan {
  std::vector<Index> offsets;
  std::vector<Index> bases;
};

GatePlan plan(const LocalGate &gate, const FactorSpace &space) {
  std::vector<int> all = gate.targets;
  for (const auto &[f, v] : gate.controls) all.push_back(f);
  space.check_factors(all);
  const Index local = space.subspace_dim(gate.targets);
  if (gate.matrix.rows() != local || gate.matrix.cols() != local) {
    throw DimensionError("gate matrix is " + std::to_string(gate.matrix.rows()) + "x" +
                         std::to_string(gate.matrix.cols()) + " but its targets span dimension " +
                         std::to_string(local));
  }
  Index control_offset = 0;
  for (const auto &[f, v] : gate.controls) {
    if (v < 0 || v >= space.dim(f)) throw DimensionError("control value out of range");
    control_offset += v * space.stride(f);
  }
  GatePlan p{local_offsets(space, gate.targets), base_indices(space, all)};
  for (Index &b : p.bases) b += control_offset;
  return p;
}

}  // namespace

void apply(const LocalGate &gate, const FactorSpace &space, COperator &states) {
  if (states.rows() != space.total()) throw DimensionError("apply: state dimension mismatch");
  const GatePlan p = plan(gate, space);
  const Index local = static_cast<Index>(p.offsets.size());
  COperator in(local, states.cols());
  COperator out(local, states.cols());
  for (Index base : p.bases) {
    for (Index i = 0; i < local; ++i) in.row(i) = states.row(base + p.offsets[i]);
    out.noalias() = gate.matrix * in;
    for (Index i = 0; i < local; ++i) states.row(base + p.offsets[i]) = out.row(i);
  }
}

void apply(const LocalGate &gate, const FactorSpace &space, CState &state) {
  if (state.size() != space.total()) throw DimensionError("apply: state dimension mismatch");
  const GatePlan p = plan(gate, space);
  const Index local = static_cast<Index>(p.offsets.size());
  CState in(local);
  CState out(local);
  for (Index base : p.bases) {
    for (Index i = 0; i < local; ++i) in[i] = state[base + p.offsets[i]];
    out.noalias() = gate.matrix * in;
    for (Index i = 0; i < local; ++i) state[base + p.offsets[i]] = out[i];
  }
}

void apply_all(const std::vector<LocalGate> &gates, const FactorSpace &space, CState &state) {
  for (const auto &g : gates) apply(g, space, state);
}

SparseState apply(const LocalGate &gate, const FactorSpace &space, const SparseState &state) {
  std::vector<int> all = gate.targets;
  for (const auto &[f, v] : gate.controls) all.push_back(f);
  space.check_factors(all);
  const Index local = space.subspace_dim(gate.targets);
  if (gate.matrix.rows() != local || gate.matrix.cols() != local) {
    throw DimensionError("gate matrix does not match its targets");
  }
  const auto offsets = local_offsets(space, gate.targets);
  SparseState out;
  for (const auto &[idx, amp] : state) {
    bool fires = true;
    for (const auto &[f, v] : gate.controls) fires = fires && space.digit(idx, f) == v;
    if (!fires) {
      out[idx] += amp;
      continue;
    }
    Index col = 0;
    Index base = idx;
    for (int f : gate.targets) {
      const Index d = space.digit(idx, f);
      col = col * space.dim(f) + d;
      base -= d * space.stride(f);
    }
    for (Index i = 0; i < local; ++i) {
      const cplx m = gate.matrix(i, col);
      if (m != cplx(0.0)) out[base + offsets[i]] += m * amp;
    }
  }
  std::erase_if(out, [](const auto &kv) { return kv.second == cplx(0.0); });
  return out;
}

COperator gate_operator(const LocalGate &gate, const FactorSpace &space) {
  if (gate.controls.empty()) return embed(gate.matrix, space, gate.targets);
  check_dense_capacity(space.total(), space.total(), "gate_operator");
  COperator out = COperator::Zero(space.total(), space.total());
  for (Index j = 0; j < space.total(); ++j) {
    for (const auto &[i, amp] : apply(gate, space, SparseState{{j, cplx(1.0)}})) out(i, j) = amp;
  }
  return out;
}

COperator haar_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) throw DimensionError("haar_unitary: dim must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  COperator ginibre(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      ginibre(i, j) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<COperator> qr(ginibre);
  COperator q = qr.householderQ();
  const COperator &r = qr.matrixQR();
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    const cplx phase = mag > 0.0 ? r(j, j) / mag : cplx(1.0);
    q.col(j) *= phase;
  }
  return q;
}

double unitarity_defect(const COperator &u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const COperator d = u.adjoint() * u - COperator::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

double projector_defect(const COperator &p) {
  if (p.rows() != p.cols()) return std::numeric_limits<double>::infinity();
  const double idem = (p * p - p).cwiseAbs().maxCoeff();
  const double herm = (p.adjoint() - p).cwiseAbs().maxCoeff();
  return std::max(idem, herm);
}

CState basis_state(Index dim, Index index) {
  if (index < 0 || index >= dim) throw DimensionError("basis_state: index out of range");
  CState s = CState::Zero(dim);
  s[index] = 1.0;
  return s;
}

}  // namespace qcausal
