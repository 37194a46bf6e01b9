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

#include "qcausal/causal_extract.h"

#include <algorithm>
#include <cmath>

namespace qcausal {

namespace {

double clamp_probability(double p, double &max_clamp) {
  const double c = std::clamp(p, 0.0, 1.0);
  max_clamp = std::max(max_clamp, std::abs(c - p));
  return c;
}

double next_denominator(const ForwardSweep &sweep, const History &h) {
  double d = 0.0;
  for (int l = 1; l <= sweep.spec().parties(); ++l) {
    if (!h.contains(l)) d += sweep.psi_weight(l, h);
  }
  return d;
}

void check_candidate(const ForwardSweep &sweep, const History &h, int party) {
  check_history(sweep.spec().layout, h);
  if (party < 1 || party > sweep.spec().parties()) {
    throw std::out_of_range("party " + std::to_string(party) + " outside 1.." +
                            std::to_string(sweep.spec().parties()));
  }
  if (h.contains(party)) {
    throw std::invalid_argument("party " + std::to_string(party) + " has already acted in " + to_string(h));
  }
}

void require_valid(const ProtocolSpec &spec, const SettingVector &x) {
  check_structure(spec);
  const auto leak = protocol_leak(spec, x);
  if (leak.leak > kLeakTol) {
    throw InvalidProtocolError("protocol is not valid at x=" + to_string(x) + ": flag leakage " +
                               std::to_string(leak.leak) + " exceeds 1e-9");
  }
}

}  // namespace

std::optional<double> prob_next(const ForwardSweep &sweep, const History &h, int party) {
  check_candidate(sweep, h, party);
  const double denom = next_denominator(sweep, h);
  if (denom <= kReachEps) return std::nullopt;
  return sweep.psi_weight(party, h) / denom;
}

std::optional<double> prob_next(const ProtocolSpec &spec, const SettingVector &x, const History &h, int party) {
  return prob_next(ForwardSweep(spec, x), h, party);
}

std::optional<double> prob_result(const ForwardSweep &sweep, const History &h, int party, Index outcome) {
  check_candidate(sweep, h, party);
  const auto &layout = sweep.spec().layout;
  if (outcome < 0 || outcome >= layout.alphabet(party)) {
    throw std::out_of_range("outcome " + std::to_string(outcome) + " outside the alphabet of party " +
                            std::to_string(party));
  }
  const int setting = sweep.settings()[party];
  double denom = 0.0;
  double numer = 0.0;
  for (Index a = 0; a < layout.alphabet(party); ++a) {
    const double w = sweep.phi_weight(party, h.extended({party, a, setting}));
    denom += w;
    if (a == outcome) numer = w;
  }
  if (denom <= kReachEps) return std::nullopt;
  return numer / denom;
}

std::optional<double> prob_result(const ProtocolSpec &spec, const SettingVector &x, const History &h, int party,
                                  Index outcome) {
  return prob_result(ForwardSweep(spec, x), h, party, outcome);
}

const NextTable &CausalModel::next(const History &h) const {
  auto it = next_tables.find(h);
  if (it == next_tables.end()) throw std::out_of_range("no next-party table for history " + to_string(h));
  return it->second;
}

const ResultTable &CausalModel::result(const History &h, int party) const {
  auto it = result_tables.find({h, party});
  if (it == result_tables.end()) {
    throw std::out_of_range("no result table for party " + std::to_string(party) + " after " + to_string(h));
  }
  return it->second;
}

CausalModel extract_causal_model(const ForwardSweep &sweep) {
  const auto &spec = sweep.spec();
  const auto &x = sweep.settings();
  const int n = spec.parties();
  CausalModel model;
  model.parties = n;
  model.alphabets = spec.layout.alphabets;
  model.x = x;
  for (const History &h : enumerate_histories(spec, x)) {
    if (h.size() == n) continue;
    NextTable next;
    next.probs.assign(n, 0.0);
    const double denom = next_denominator(sweep, h);
    const int candidates = n - h.size();
    if (denom <= kReachEps) {
      next.placeholder = true;
      for (int l = 1; l <= n; ++l) {
        if (!h.contains(l)) next.probs[l - 1] = 1.0 / candidates;
      }
    } else {
      model.reachable.push_back(h);
      for (int l = 1; l <= n; ++l) {
        if (!h.contains(l)) next.probs[l - 1] = clamp_probability(sweep.psi_weight(l, h) / denom, model.max_clamp);
      }
    }
    for (int l = 1; l <= n; ++l) {
      if (h.contains(l)) continue;
      const Index alphabet = spec.layout.alphabet(l);
      ResultTable result;
      result.probs.assign(alphabet, 0.0);
      double rdenom = 0.0;
      for (Index a = 0; a < alphabet; ++a) {
        result.probs[a] = sweep.phi_weight(l, h.extended({l, a, x[l]}));
        rdenom += result.probs[a];
      }
      if (next.placeholder || rdenom <= kReachEps) {
        result.placeholder = true;
        std::fill(result.probs.begin(), result.probs.end(), 1.0 / static_cast<double>(alphabet));
      } else {
        for (double &p : result.probs) p = clamp_probability(p / rdenom, model.max_clamp);
      }
      model.result_tables.emplace(std::make_pair(h, l), std::move(result));
    }
    model.next_tables.emplace(h, std::move(next));
  }
  return model;
}

CausalModel extract_causal_model(const ProtocolSpec &spec, const SettingVector &x) {
  require_valid(spec, x);
  return extract_causal_model(ForwardSweep(spec, x));
}

OutcomeDistribution causal_distribution(const CausalModel &model) {
  OutcomeDistribution d;
  d.alphabets = model.alphabets;
  d.x = model.x;
  Index size = 1;
  for (Index a : model.alphabets) size *= a;
  d.probs.assign(size, 0.0);
  std::vector<Index> outcomes(model.parties, 0);
  auto visit = [&](auto &&self, const History &h, double weight) -> void {
    if (h.size() == model.parties) {
      for (const auto &e : h.entries()) outcomes[e.party - 1] = e.outcome;
      d.probs[d.index_of(outcomes)] += weight;
      return;
    }
    const NextTable &next = model.next(h);
    for (int l = 1; l <= model.parties; ++l) {
      if (h.contains(l)) continue;
      const double pn = next.probs[l - 1];
      if (pn == 0.0) continue;
      const ResultTable &result = model.result(h, l);
      for (Index a = 0; a < static_cast<Index>(result.probs.size()); ++a) {
        const double pr = result.probs[a];
        if (pr == 0.0) continue;
        self(self, h.extended({l, a, model.x[l]}), weight * pn * pr);
      }
    }
  };
  visit(visit, History{}, 1.0);
  return d;
}

double max_row_normalization_error(const CausalModel &model) {
  double err = 0.0;
  for (const auto &[h, t] : model.next_tables) {
    double s = 0.0;
    for (double p : t.probs) s += p;
    err = std::max(err, std::abs(s - 1.0));
  }
  for (const auto &[key, t] : model.result_tables) {
    double s = 0.0;
    for (double p : t.probs) s += p;
    err = std::max(err, std::abs(s - 1.0));
  }
  return err;
}

VerificationReport::Entry verify_at(const ProtocolSpec &spec, const SettingVector &x) {
  require_valid(spec, x);
  const ForwardSweep sweep(spec, x);
  const OutcomeDistribution quantum = result_marginal(spec.layout, x, sweep.final_state());
  const CausalModel model = extract_causal_model(sweep);
  const OutcomeDistribution causal = causal_distribution(model);
  VerificationReport::Entry e;
  e.x = x;
  e.max_deviation = max_abs_difference(quantum, causal);
  e.quantum_total = quantum.total();
  e.causal_total = causal.total();
  e.max_clamp = model.max_clamp;
  return e;
}

VerificationReport verify_theorem1(const ProtocolSpec &spec, bool allow_large) {
  check_structure(spec);
  const Index count = settings_count(spec);
  if (count > kMaxVerifySettings && !allow_large) {
    throw std::length_error("settings domain has " + std::to_string(count) +
                            " combinations (limit 4096); pass the override to verify anyway");
  }
  VerificationReport report;
  for (const auto &x : all_settings(spec)) {
    auto e = verify_at(spec, x);
    report.max_deviation = std::max(report.max_deviation, e.max_deviation);
    report.entries.push_back(std::move(e));
  }
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

double check_history_locality(const ForwardSweep &a, const ForwardSweep &b, const History &h) {
  const auto &spec = a.spec();
  for (const auto &e : h.entries()) {
    if (a.settings()[e.party] != b.settings()[e.party]) {
      throw std::invalid_argument("settings disagree on party " + std::to_string(e.party) + " which appears in " +
                                  to_string(h));
    }
  }
  double dev = 0.0;
  auto compare = [&dev](const std::optional<double> &p, const std::optional<double> &q) {
    if (p.has_value() != q.has_value()) {
      dev = std::max(dev, 1.0);
    } else if (p) {
      dev = std::max(dev, std::abs(*p - *q));
    }
  };
  for (int l = 1; l <= spec.parties(); ++l) {
    if (h.contains(l)) continue;
    compare(prob_next(a, h, l), prob_next(b, h, l));
    if (a.settings()[l] != b.settings()[l]) continue;
    for (Index o = 0; o < spec.layout.alphabet(l); ++o) compare(prob_result(a, h, l, o), prob_result(b, h, l, o));
  }
  return dev;
}

double check_history_locality(const ProtocolSpec &spec, const SettingVector &x, const SettingVector &x2,
                              const History &h) {
  spec.check_settings(x);
  spec.check_settings(x2);
  for (const auto &e : h.entries()) {
    if (x[e.party] != x2[e.party]) {
      throw std::invalid_argument("settings disagree on party " + std::to_string(e.party) + " which appears in " +
                                  to_string(h));
    }
  }
  const ForwardSweep base(spec, x);
  double dev = check_history_locality(base, ForwardSweep(spec, x2), h);
  // prob_result of party l is compared with l's own setting held fixed.
  for (int l = 1; l <= spec.parties(); ++l) {
    if (h.contains(l) || x[l] == x2[l]) continue;
    SettingVector y = x2;
    y.values[l - 1] = x[l];
    dev = std::max(dev, check_history_locality(base, ForwardSweep(spec, y), h));
  }
  return dev;
}

OutcomeDistribution naive_mixture_distribution(const ProtocolSpec &spec, const SettingVector &x) {
  require_valid(spec, x);
  const auto &layout = spec.layout;
  const FactorSpace space = layout.space();
  const auto gates = lab_activation_gates(spec, x);
  const Index stride = space.stride(SpaceLayout::control_factor());
  const Index dc = layout.control_dim();
  // Dephasing after each U_t is a projective control measurement, so the
  // density operator is a sum of pure branches, one per control record.
  std::vector<CState> branches{initial_state(layout)};
  for (int t = 1; t <= spec.steps; ++t) {
    std::vector<CState> next;
    for (CState &b : branches) {
      apply_step_unitary(spec, t, b);
      for (Index c = 0; c < dc; ++c) {
        CState piece = CState::Zero(b.size());
        bool any = false;
        for (Index i = 0; i < b.size(); ++i) {
          if ((i / stride) % dc == c && b[i] != cplx(0.0)) {
            piece[i] = b[i];
            any = true;
          }
        }
        if (!any) continue;
        if (static_cast<Index>(next.size() + 1) * space.total() > kMaxDenseEntries) {
          throw CapacityError("naive mixture: too many dephased branches to hold in memory");
        }
        apply_all(gates, space, piece);
        next.push_back(std::move(piece));
      }
    }
    branches = std::move(next);
  }
  OutcomeDistribution d = result_marginal(layout, x, branches.front());
  for (std::size_t k = 1; k < branches.size(); ++k) {
    const auto part = result_marginal(layout, x, branches[k]);
    for (std::size_t i = 0; i < d.probs.size(); ++i) d.probs[i] += part.probs[i];
  }
  return d;
}

}  // namespace qcausal
