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

#include "qcausal/polytope.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace qcausal {

Index Scenario::outcome_count() const {
  Index n = 1;
  for (Index a : alphabets) n *= a;
  return n;
}

Index Scenario::setting_count() const {
  Index n = 1;
  for (Index x : setting_counts) n *= x;
  return n;
}

Scenario scenario_of(const ProtocolSpec &spec) {
  Scenario s;
  s.alphabets = spec.layout.alphabets;
  for (const auto &dom : spec.settings) s.setting_counts.push_back(static_cast<Index>(dom.size()));
  return s;
}

Behaviour behaviour_of(const Scenario &scenario, const std::vector<OutcomeDistribution> &family) {
  if (static_cast<Index>(family.size()) != scenario.setting_count()) {
    throw DimensionError("expected " + std::to_string(scenario.setting_count()) + " distributions, got " +
                         std::to_string(family.size()));
  }
  Behaviour p(scenario.dim());
  for (Index x = 0; x < scenario.setting_count(); ++x) {
    const auto &d = family[x];
    if (d.size() != scenario.outcome_count()) throw DimensionError("distribution has the wrong outcome count");
    for (Index a = 0; a < d.size(); ++a) p[scenario.entry(x, a)] = d.probs[a];
  }
  return p;
}

namespace {

void check_two_party(const Scenario &s) {
  if (s.parties() != 2 || s.setting_counts.size() != 2) {
    throw UnsupportedSizeError("exhaustive enumeration supports N=2 only (got N=" + std::to_string(s.parties()) +
                               "); use verify to certify larger protocols");
  }
  for (int l = 0; l < 2; ++l) {
    if (s.alphabets[l] < 1 || s.alphabets[l] > 2 || s.setting_counts[l] < 1 || s.setting_counts[l] > 2) {
      throw UnsupportedSizeError("exhaustive enumeration supports alphabets and setting counts of at most 2");
    }
  }
}

Index ipow(Index b, Index e) {
  Index r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

Index deterministic_strategy_count(const Scenario &s) {
  check_two_party(s);
  Index total = 0;
  for (int first = 0; first < 2; ++first) {
    const int second = 1 - first;
    const Index first_tables = ipow(s.alphabets[first], s.setting_counts[first]);
    const Index second_inputs = s.alphabets[first] * s.setting_counts[first] * s.setting_counts[second];
    total += first_tables * ipow(s.alphabets[second], second_inputs);
  }
  return total;
}

std::vector<Behaviour> enumerate_deterministic(const Scenario &s) {
  check_two_party(s);
  std::vector<Behaviour> out;
  std::set<std::vector<double>> seen;
  const Index xs[2] = {s.setting_counts[0], s.setting_counts[1]};
  for (int first = 0; first < 2; ++first) {
    const int second = 1 - first;
    const Index f_tables = ipow(s.alphabets[first], xs[first]);
    // The second party's output table is indexed by (a_first, x_first, x_second).
    const Index g_inputs = s.alphabets[first] * xs[first] * xs[second];
    const Index g_tables = ipow(s.alphabets[second], g_inputs);
    for (Index f = 0; f < f_tables; ++f) {
      for (Index g = 0; g < g_tables; ++g) {
        Behaviour p = Behaviour::Zero(s.dim());
        for (Index x0 = 0; x0 < xs[0]; ++x0) {
          for (Index x1 = 0; x1 < xs[1]; ++x1) {
            const Index x[2] = {x0, x1};
            const Index a_first = (f / ipow(s.alphabets[first], x[first])) % s.alphabets[first];
            const Index g_index = (a_first * xs[first] + x[first]) * xs[second] + x[second];
            const Index a_second = (g / ipow(s.alphabets[second], g_index)) % s.alphabets[second];
            Index a[2];
            a[first] = a_first;
            a[second] = a_second;
            p[s.entry(x0 * xs[1] + x1, a[0] * s.alphabets[1] + a[1])] = 1.0;
          }
        }
        std::vector<double> key(p.data(), p.data() + p.size());
        if (seen.insert(key).second) out.push_back(std::move(p));
      }
    }
  }
  return out;
}

const char *to_string(PolytopeCertificate::Status s) {
  switch (s) {
    case PolytopeCertificate::Status::kInside:
      return "inside";
    case PolytopeCertificate::Status::kOutside:
      return "outside";
    case PolytopeCertificate::Status::kIndeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

PolytopeCertificate membership(const Behaviour &p, const std::vector<Behaviour> &vertices, int max_iterations) {
  PolytopeCertificate cert;
  if (vertices.empty()) throw std::invalid_argument("membership needs at least one vertex");
  const Index d = p.size();
  for (const auto &v : vertices) {
    if (v.size() != d) throw DimensionError("vertex and behaviour are indexed differently");
  }
  const Index m = static_cast<Index>(vertices.size());
  const Index rows = d + 1;
  const Index cols = m + rows;  // lambdas, then one artificial per row
  constexpr double kPivotTol = 1e-12;

  // Tableau [A | I | b] with rows made nonnegative, objective = sum of artificials.
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(rows, cols + 1);
  std::vector<double> sign(rows, 1.0);
  for (Index i = 0; i < rows; ++i) {
    const double b = i < d ? p[i] : 1.0;
    sign[i] = b < 0 ? -1.0 : 1.0;
    for (Index j = 0; j < m; ++j) tab(i, j) = sign[i] * (i < d ? vertices[j][i] : 1.0);
    tab(i, m + i) = 1.0;
    tab(i, cols) = sign[i] * b;
  }
  std::vector<Index> basis(rows);
  for (Index i = 0; i < rows; ++i) basis[i] = m + i;
  Eigen::VectorXd reduced(cols + 1);
  for (Index j = 0; j <= cols; ++j) reduced[j] = (j >= m && j < cols ? 1.0 : 0.0) - tab.col(j).sum();

  int it = 0;
  for (; it < max_iterations; ++it) {
    Index enter = -1;
    for (Index j = 0; j < cols; ++j) {
      if (reduced[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Index leave = -1;
    double best = 0.0;
    for (Index i = 0; i < rows; ++i) {
      if (tab(i, enter) <= kPivotTol) continue;
      const double ratio = tab(i, cols) / tab(i, enter);
      if (leave < 0 || ratio < best - kPivotTol || (std::abs(ratio - best) <= kPivotTol && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) break;  // phase 1 is bounded below by 0; not reached
    tab.row(leave) /= tab(leave, enter);
    for (Index i = 0; i < rows; ++i) {
      if (i != leave && tab(i, enter) != 0.0) tab.row(i) -= tab(i, enter) * tab.row(leave);
    }
    reduced -= reduced[enter] * tab.row(leave).transpose();
    basis[leave] = enter;
  }
  cert.iterations = it;
  if (it == max_iterations) return cert;

  cert.weights.assign(m, 0.0);
  for (Index i = 0; i < rows; ++i) {
    if (basis[i] < m) cert.weights[basis[i]] = std::max(0.0, tab(i, cols));
  }
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(d);
  for (Index j = 0; j < m; ++j) mix += cert.weights[j] * vertices[j];
  double wsum = 0.0;
  for (double w : cert.weights) wsum += w;
  cert.residual = std::max((mix - p).cwiseAbs().maxCoeff(), std::abs(wsum - 1.0));
  if (cert.residual <= kLpTol) {
    cert.status = PolytopeCertificate::Status::kInside;
    return cert;
  }
  cert.weights.clear();

  // Duals y_i = 1 - reduced cost of artificial i, mapped back through the row signs.
  Eigen::VectorXd y(rows);
  for (Index i = 0; i < rows; ++i) y[i] = sign[i] * (1.0 - reduced[m + i]);
  const double scale = y.cwiseAbs().maxCoeff();
  if (scale > 0) y /= scale;
  cert.functional = y.head(d);
  cert.offset = y[d];
  double worst_vertex = -std::numeric_limits<double>::infinity();
  for (const auto &v : vertices) worst_vertex = std::max(worst_vertex, cert.functional.dot(v) + cert.offset);
  const double at_p = cert.functional.dot(p) + cert.offset;
  cert.margin = at_p - std::max(worst_vertex, 0.0);
  if (worst_vertex <= kLpTol && at_p > kLpTol && cert.margin > 0) {
    cert.status = PolytopeCertificate::Status::kOutside;
  }
  return cert;
}

bool check_certificate(const PolytopeCertificate &cert, const Behaviour &p, const std::vector<Behaviour> &vertices,
                       double tol) {
  switch (cert.status) {
    case PolytopeCertificate::Status::kInside: {
      if (cert.weights.size() != vertices.size()) return false;
      Eigen::VectorXd mix = Eigen::VectorXd::Zero(p.size());
      double sum = 0.0;
      for (std::size_t j = 0; j < vertices.size(); ++j) {
        if (cert.weights[j] < -tol) return false;
        mix += cert.weights[j] * vertices[j];
        sum += cert.weights[j];
      }
      return std::abs(sum - 1.0) <= tol && (mix - p).cwiseAbs().maxCoeff() <= tol;
    }
    case PolytopeCertificate::Status::kOutside: {
      for (const auto &v : vertices) {
        if (cert.functional.dot(v) + cert.offset > tol) return false;
      }
      return cert.functional.dot(p) + cert.offset > tol;
    }
    case PolytopeCertificate::Status::kIndeterminate:
      return false;
  }
  return false;
}

double game_score(const Scenario &s, const Behaviour &p, const Game &game) {
  if (p.size() != s.dim() || game.coefficients.size() != s.dim() ||
      static_cast<Index>(game.setting_weights.size()) != s.setting_count()) {
    throw DimensionError("game and behaviour dimensions do not match the scenario");
  }
  double score = 0.0;
  for (Index x = 0; x < s.setting_count(); ++x) {
    for (Index a = 0; a < s.outcome_count(); ++a) {
      score += game.setting_weights[x] * game.coefficients[s.entry(x, a)] * p[s.entry(x, a)];
    }
  }
  return score;
}

Game guess_your_neighbours_input(const Scenario &s) {
  if (s.parties() != 2) throw UnsupportedSizeError("the guessing game is defined here for two parties");
  Game g;
  g.coefficients = Eigen::VectorXd::Zero(s.dim());
  g.setting_weights.assign(s.setting_count(), 1.0 / static_cast<double>(s.setting_count()));
  for (Index x0 = 0; x0 < s.setting_counts[0]; ++x0) {
    for (Index x1 = 0; x1 < s.setting_counts[1]; ++x1) {
      if (x1 >= s.alphabets[0] || x0 >= s.alphabets[1]) continue;
      g.coefficients[s.entry(x0 * s.setting_counts[1] + x1, x1 * s.alphabets[1] + x0)] = 1.0;
    }
  }
  return g;
}

GameBound causal_bound(const Scenario &s, const Game &game, const std::vector<Behaviour> &vertices) {
  if (s.parties() != 2) throw UnsupportedSizeError("causal bounds are computed for two parties only");
  GameBound best;
  best.value = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    const double v = game_score(s, vertices[j], game);
    if (v > best.value) best = {v, j};
  }
  return best;
}

Behaviour perfect_guess_behaviour(const Scenario &s) {
  if (s.parties() != 2) throw UnsupportedSizeError("the guessing behaviour is defined for two parties");
  Behaviour p = Behaviour::Zero(s.dim());
  for (Index x0 = 0; x0 < s.setting_counts[0]; ++x0) {
    for (Index x1 = 0; x1 < s.setting_counts[1]; ++x1) {
      const Index a0 = std::min(x1, s.alphabets[0] - 1);
      const Index a1 = std::min(x0, s.alphabets[1] - 1);
      p[s.entry(x0 * s.setting_counts[1] + x1, a0 * s.alphabets[1] + a1)] = 1.0;
    }
  }
  return p;
}

}  // namespace qcausal
