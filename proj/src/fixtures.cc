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

#include "qcausal/fixtures.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace qcausal {

COperator switch_measurement(int setting) {
  if (setting == 0) return gate_cnot();
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd plus(r, r), minus(r, -r);
  const COperator pp = plus * plus.adjoint();
  const COperator mm = minus * minus.adjoint();
  return kron(pp, COperator::Identity(2, 2)) + kron(mm, gate_x());
}

ProtocolSpec build_switch_protocol() {
  ProtocolSpec spec;
  spec.layout = SpaceLayout::make(4, {2, 2, 2}, 4);
  spec.steps = 3;
  const Index dc = 4;
  const double r = 1.0 / std::sqrt(2.0);

  COperator c1 = COperator::Zero(dc, dc);
  c1(1, 0) = r;
  c1(2, 0) = r;
  c1(1, 1) = r;
  c1(2, 1) = -r;
  c1(0, 2) = 1.0;
  c1(3, 3) = 1.0;
  spec.step_unitaries.push_back(kron(COperator::Identity(4, 4), c1));

  spec.step_unitaries.push_back(control_permutation(spec.layout, {0, 2, 1, 3}));

  // |1>_c|psi>|0> -> |3>|0>|psi>, |2>_c|psi>|0> -> |3>|1>|psi>; the rest of
  // the basis is paired up in ascending order.
  auto idx = [dc](Index s1, Index s2, Index c) { return (s1 * 2 + s2) * dc + c; };
  COperator u3 = COperator::Zero(16, 16);
  std::set<Index> used_in, used_out;
  for (Index c = 1; c <= 2; ++c) {
    for (Index psi = 0; psi < 2; ++psi) {
      const Index in = idx(psi, 0, c);
      const Index out = idx(c - 1, psi, 3);
      u3(out, in) = 1.0;
      used_in.insert(in);
      used_out.insert(out);
    }
  }
  std::vector<Index> free_in, free_out;
  for (Index i = 0; i < 16; ++i) {
    if (!used_in.count(i)) free_in.push_back(i);
    if (!used_out.count(i)) free_out.push_back(i);
  }
  for (std::size_t k = 0; k < free_in.size(); ++k) u3(free_out[k], free_in[k]) = 1.0;
  spec.step_unitaries.push_back(u3);

  const FactorSpace sr({2, 2, 2});
  spec.settings.assign(3, {0, 1});
  spec.measurements.resize(3);
  for (int l = 0; l < 3; ++l) {
    for (int x = 0; x < 2; ++x) spec.measurements[l].push_back(embed(switch_measurement(x), sr, {0, 2}));
  }
  return spec;
}

IndividualGateCircuit build_switch_circuit() {
  enum { s1, s2, cA, cB, cC };
  IndividualGateCircuit c;
  c.wire_dims = {2, 2, 2, 2, 2};
  c.wire_names = {"s1", "s2", "cA", "cB", "cC"};
  c.alphabets = {2, 2, 2};
  c.settings.assign(3, {0, 1});
  c.lab_wires.assign(3, {s1});
  c.measurements.assign(3, {switch_measurement(0), switch_measurement(1)});

  c.add_unitary({cA}, gate_h());
  c.add_unitary({cA, cB}, gate_cnot());
  c.add_unitary({cB}, gate_x());
  c.add_lab_gate(1, cA);
  c.add_lab_gate(2, cB);
  c.add_unitary({cA, cB}, gate_swap());
  c.add_lab_gate(1, cA);
  c.add_lab_gate(2, cB);
  // Move the target to s2, record the order in s1 and clear both controls.
  c.add_unitary({s1, s2}, gate_swap());
  c.add_unitary({cB, s1}, gate_cnot());
  c.add_unitary({s1, cB}, gate_cnot());
  c.add_unitary({s1, cA}, gate_cnot());
  c.add_unitary({cA}, gate_x());
  c.add_unitary({cC}, gate_x());
  c.add_lab_gate(3, cC);
  return c;
}

namespace {

using Schedule = std::vector<std::vector<int>>;

// K rows, each firing every party once at distinct steps with zeros
// elsewhere, and no two rows sharing a control value at any step.
Schedule random_schedule(std::mt19937_64 &rng, int n, int steps) {
  const int idle = steps - n;
  const int rows = idle == 0 ? n : std::min(n, steps / idle);
  for (;;) {
    Schedule m;
    bool ok = true;
    for (int b = 0; b < rows && ok; ++b) {
      std::vector<int> row(steps, 0);
      std::iota(row.begin(), row.begin() + n, 1);
      bool placed = false;
      for (int tries = 0; tries < 1000 && !placed; ++tries) {
        std::shuffle(row.begin(), row.end(), rng);
        placed = true;
        for (const auto &prev : m) {
          for (int t = 0; t < steps; ++t) placed = placed && prev[t] != row[t];
        }
      }
      if (placed) m.push_back(row);
      else ok = false;
    }
    if (ok) return m;
  }
}

CState gaussian_state(std::mt19937_64 &rng, Index dim) {
  std::normal_distribution<double> g;
  CState v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = cplx(g(rng), g(rng));
  return v;
}

// Unitary on s (x) c sending |0>|0> to the normalized Gaussian vector
// supported on the listed control levels.
COperator first_step(std::mt19937_64 &rng, Index ds, Index dc, const std::set<int> &levels) {
  const Index dim = ds * dc;
  CState v = CState::Zero(dim);
  const CState g = gaussian_state(rng, dim);
  for (Index s = 0; s < ds; ++s) {
    for (int c : levels) v[s * dc + c] = g[s * dc + c];
  }
  v.normalize();
  if (std::abs(v[0]) > 0) v *= std::conj(v[0]) / std::abs(v[0]);
  CState w = basis_state(dim, 0) - v;
  if (w.norm() < 1e-14) return COperator::Identity(dim, dim);
  return COperator::Identity(dim, dim) - 2.0 * w * w.adjoint() / w.squaredNorm();
}

COperator schedule_step(std::mt19937_64 &rng, const Schedule &m, int t, Index ds, Index dc, int n) {
  const Index dim = ds * dc;
  COperator u = COperator::Zero(dim, dim);
  std::set<int> used_in, used_out;
  std::vector<bool> done(m.size(), false);
  for (std::size_t b = 0; b < m.size(); ++b) {
    if (done[b]) continue;
    auto fired = [&](std::size_t row) {
      std::uint64_t mask = 0;
      for (int k = 0; k < t; ++k) {
        if (m[row][k] != 0) mask |= std::uint64_t{1} << m[row][k];
      }
      return mask;
    };
    std::vector<std::size_t> group;
    for (std::size_t b2 = b; b2 < m.size(); ++b2) {
      if (!done[b2] && fired(b2) == fired(b)) {
        group.push_back(b2);
        done[b2] = true;
      }
    }
    const Index g = static_cast<Index>(group.size());
    const COperator w = haar_unitary(g * ds, rng());
    for (Index k = 0; k < g; ++k) {
      const int in = m[group[k]][t - 1];
      for (Index k2 = 0; k2 < g; ++k2) {
        const int out = m[group[k2]][t];
        for (Index s = 0; s < ds; ++s) {
          for (Index s2 = 0; s2 < ds; ++s2) u(s2 * dc + out, s * dc + in) = w(k2 * ds + s2, k * ds + s);
        }
      }
      used_in.insert(in);
      used_out.insert(m[group[k]][t]);
    }
  }
  std::vector<int> free_in, free_out;
  for (int c = 0; c <= n; ++c) {
    if (!used_in.count(c)) free_in.push_back(c);
    if (!used_out.count(c)) free_out.push_back(c);
  }
  for (std::size_t k = 0; k < free_in.size(); ++k) {
    for (Index s = 0; s < ds; ++s) u(s * dc + free_out[k], s * dc + free_in[k]) = 1.0;
  }
  return u;
}

}  // namespace

RandomProtocol random_protocol(const RandomProtocolOptions &opt, std::uint64_t seed, int max_attempts) {
  if (opt.steps < opt.parties) {
    throw StructuralError("protocol has T=" + std::to_string(opt.steps) + " steps but N=" +
                          std::to_string(opt.parties) + " parties; an N party protocol requires T >= N");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit;
  RandomProtocol out;
  out.options = opt;
  out.seed = seed;
  const Index ds = opt.system_dim;
  const Index dc = opt.parties + 1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    ProtocolSpec spec;
    spec.layout = SpaceLayout::make(ds, std::vector<Index>(opt.parties, opt.alphabet), opt.steps + 1);
    spec.steps = opt.steps;
    std::vector<int> dom(opt.settings);
    std::iota(dom.begin(), dom.end(), 0);
    spec.settings.assign(opt.parties, dom);
    spec.measurements.resize(opt.parties);
    for (int l = 0; l < opt.parties; ++l) {
      for (int x = 0; x < opt.settings; ++x) spec.measurements[l].push_back(haar_unitary(ds * opt.alphabet, rng()));
    }
    if (unit(rng) < opt.haar_candidate_rate) {
      for (int t = 0; t < opt.steps; ++t) spec.step_unitaries.push_back(haar_unitary(ds * dc, rng()));
    } else {
      const Schedule m = random_schedule(rng, opt.parties, opt.steps);
      std::set<int> first;
      for (const auto &row : m) first.insert(row[0]);
      spec.step_unitaries.push_back(first_step(rng, ds, dc, first));
      for (int t = 1; t < opt.steps; ++t) spec.step_unitaries.push_back(schedule_step(rng, m, t, ds, dc, opt.parties));
    }
    out.attempts = attempt;
    if (validate_protocol(spec).valid) {
      out.spec = std::move(spec);
      return out;
    }
    ++out.rejected;
  }
  throw InvalidProtocolError("no valid protocol found in " + std::to_string(max_attempts) + " attempts");
}

RandomProtocolOptions suite_options(std::uint64_t index) {
  std::mt19937_64 rng(0x5eed0000ULL + index);
  RandomProtocolOptions opt;
  opt.parties = 2 + static_cast<int>(rng() % 2);
  opt.system_dim = 2 + static_cast<Index>(rng() % 2);
  opt.steps = opt.parties + static_cast<int>(rng() % 3);
  opt.haar_candidate_rate = 0.1;
  return opt;
}

RandomProtocol suite_protocol(std::uint64_t index) { return random_protocol(suite_options(index), index); }

IndividualGateCircuit random_circuit(std::uint64_t seed) {
  enum { s, c1, c2 };
  std::mt19937_64 rng(seed);
  const Index ds = 2 + static_cast<Index>(rng() % 2);
  IndividualGateCircuit c;
  c.wire_dims = {ds, 2, 2};
  c.wire_names = {"s", "c1", "c2"};
  c.alphabets = {2, 2};
  c.settings.assign(2, {0, 1});
  c.lab_wires.assign(2, {s});
  c.measurements.resize(2);
  for (int l = 0; l < 2; ++l) {
    for (int x = 0; x < 2; ++x) c.measurements[l].push_back(haar_unitary(2 * ds, rng()));
  }
  auto control_diagonal = [&]() {
    COperator u = COperator::Zero(4 * ds, 4 * ds);
    for (Index cc = 0; cc < 4; ++cc) {
      const COperator w = haar_unitary(ds, rng());
      for (Index i = 0; i < ds; ++i) {
        for (Index j = 0; j < ds; ++j) u(i * 4 + cc, j * 4 + cc) = w(i, j);
      }
    }
    return u;
  };
  auto between = [&]() {
    if (rng() % 2) c.add_unitary({s}, haar_unitary(ds, rng()));
    else c.add_unitary({s, c1, c2}, control_diagonal());
  };
  c.add_unitary({s, c1}, haar_unitary(2 * ds, rng()));
  c.add_unitary({c1, c2}, gate_cnot());
  c.add_unitary({c2}, gate_x());
  c.add_lab_gate(1, c1);
  between();
  c.add_lab_gate(2, c2);
  between();
  c.add_unitary({c1, c2}, gate_swap());
  between();
  c.add_lab_gate(1, c1);
  between();
  c.add_lab_gate(2, c2);
  c.add_unitary({s}, haar_unitary(ds, rng()));
  return c;
}

}  // namespace qcausal
