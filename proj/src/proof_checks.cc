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

#include "qcausal/proof_checks.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace qcausal {

bool ProofCheckReport::pass() const {
  return lemma1_max_overlap <= kOverlapTol && lemma2_max_overlap <= kOverlapTol &&
         result1_max_deviation <= kOverlapTol && result2_deviation <= kEndToEndTol &&
         result3_max_deviation <= kEndToEndTol && result4_max_deviation <= kEndToEndTol;
}

History move_to_back(const History &h, int party) {
  std::vector<HistoryEntry> entries;
  HistoryEntry last{};
  bool found = false;
  for (const auto &e : h.entries()) {
    if (e.party == party) {
      last = e;
      found = true;
    } else {
      entries.push_back(e);
    }
  }
  if (!found) throw std::invalid_argument("party " + std::to_string(party) + " is not in " + to_string(h));
  entries.push_back(last);
  return History(std::move(entries));
}

double phi_mass(const ForwardSweep &sweep, const History &h) {
  double m = 0.0;
  for (const auto &e : h.entries()) m += sweep.phi_weight(e.party, move_to_back(h, e.party));
  return m;
}

namespace {

struct Column {
  int party;
  int step;
  CState state;
};

// Largest off-diagonal entry of the Gram matrix of the barred states. Columns
// are evolved in groups sharing a step so the tail is applied once per group.
template <typename Evolve>
double max_overlap(const ForwardSweep &sweep, std::vector<Column> cols, Evolve evolve) {
  if (cols.size() < 2) return 0.0;
  const Index dim = sweep.space().total();
  COperator barred(dim, static_cast<Index>(cols.size()));
  std::vector<int> steps(cols.size());
  Index j = 0;
  for (int t = 1; t <= sweep.steps(); ++t) {
    std::vector<std::size_t> group;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k].step == t) group.push_back(k);
    }
    if (group.empty()) continue;
    COperator block(dim, static_cast<Index>(group.size()));
    for (std::size_t g = 0; g < group.size(); ++g) block.col(g) = cols[group[g]].state;
    evolve(t, block);
    barred.middleCols(j, block.cols()) = block;
    j += block.cols();
  }
  const COperator gram = barred.adjoint() * barred;
  double worst = 0.0;
  for (Index a = 0; a < gram.rows(); ++a) {
    for (Index b = a + 1; b < gram.cols(); ++b) worst = std::max(worst, std::abs(gram(a, b)));
  }
  return worst;
}

bool nonzero(const CState &v) { return v.squaredNorm() > 0.0; }

}  // namespace

ProofCheckReport run_proof_checks(const ForwardSweep &sweep, std::uint64_t seed, Index max_histories) {
  const ProtocolSpec &spec = sweep.spec();
  const SettingVector &x = sweep.settings();
  const int n = spec.parties();
  const int steps = spec.steps;
  ProofCheckReport report;
  report.x = x;
  report.sample_seed = seed;

  std::vector<History> histories = enumerate_histories(spec, x);
  report.histories_total = static_cast<Index>(histories.size());

  // Results 1, 2 and 4 are norm identities and run over every history.
  double first = 0.0;
  for (int l = 1; l <= n; ++l) first += sweep.psi_weight(l, History{});
  report.result2_deviation = std::abs(first - 1.0);

  const OutcomeDistribution quantum = result_marginal(spec.layout, x, sweep.final_state());
  for (const History &h : histories) {
    if (h.size() < n) {
      for (int l = 1; l <= n; ++l) {
        if (h.contains(l)) continue;
        for (int t = 1; t <= steps; ++t) {
          double after = 0.0;
          for (Index a = 0; a < spec.layout.alphabet(l); ++a) {
            after += sweep.phi_norm2(l, t, h.extended({l, a, x[l]}));
          }
          report.result1_max_deviation =
              std::max(report.result1_max_deviation, std::abs(sweep.psi_norm2(l, t, h) - after));
        }
      }
    }
    if (h.size() >= 1 && h.size() < n) {
      double before_next = 0.0;
      for (int l = 1; l <= n; ++l) {
        if (!h.contains(l)) before_next += sweep.psi_weight(l, h);
      }
      report.result4_max_deviation = std::max(report.result4_max_deviation, std::abs(phi_mass(sweep, h) - before_next));
    }
    if (h.size() == n) {
      std::vector<Index> outcomes(n);
      for (const auto &e : h.entries()) outcomes[e.party - 1] = e.outcome;
      report.result3_max_deviation =
          std::max(report.result3_max_deviation, std::abs(phi_mass(sweep, h) - quantum(outcomes)));
    }
  }

  if (report.histories_total > max_histories) {
    std::mt19937_64 rng(seed);
    std::shuffle(histories.begin(), histories.end(), rng);
    histories.resize(max_histories);
    report.sampled = true;
  }
  report.histories_checked = static_cast<Index>(histories.size());

  for (const History &h : histories) {
    if (h.size() < n) {
      std::vector<Column> cols;
      for (int l = 1; l <= n; ++l) {
        if (h.contains(l)) continue;
        for (int t = 1; t <= steps; ++t) {
          CState s = sweep.psi(l, t, h);
          if (nonzero(s)) cols.push_back({l, t, std::move(s)});
        }
      }
      report.lemma1_max_overlap =
          std::max(report.lemma1_max_overlap,
                   max_overlap(sweep, std::move(cols), [&](int t, COperator &m) { sweep.evolve_psi_to_end(t, m); }));
    }
    if (h.size() >= 1) {
      std::vector<Column> cols;
      for (const auto &e : h.entries()) {
        const History ordered = move_to_back(h, e.party);
        for (int t = 1; t <= steps; ++t) {
          CState s = sweep.phi(e.party, t, ordered);
          if (nonzero(s)) cols.push_back({e.party, t, std::move(s)});
        }
      }
      report.lemma2_max_overlap =
          std::max(report.lemma2_max_overlap,
                   max_overlap(sweep, std::move(cols), [&](int t, COperator &m) { sweep.evolve_phi_to_end(t, m); }));
    }
  }
  return report;
}

ProofCheckReport run_proof_checks(const ProtocolSpec &spec, const SettingVector &x, std::uint64_t seed,
                                  Index max_histories) {
  check_structure(spec);
  spec.check_settings(x);
  return run_proof_checks(ForwardSweep(spec, x), seed, max_histories);
}

}  // namespace qcausal
