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

// The two-party causal polytope: deterministic vertices, LP membership with
// certificates, and linear game scores.

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "qcausal/quantum_exec.h"

namespace qcausal {

class UnsupportedSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kLpTol = 1e-7;

/// Outcome alphabets and setting counts; settings are indexed 0..count-1.
struct Scenario {
  std::vector<Index> alphabets;
  std::vector<Index> setting_counts;

  int parties() const { return static_cast<int>(alphabets.size()); }
  Index outcome_count() const;
  Index setting_count() const;
  /// Length of a behaviour vector: one entry per (x, a).
  Index dim() const { return outcome_count() * setting_count(); }
  /// Entry of p(a|x): x flat index major, a flat index minor.
  Index entry(Index x_flat, Index a_flat) const { return x_flat * outcome_count() + a_flat; }
};

/// A full conditional distribution p(a|x) as one vector.
using Behaviour = Eigen::VectorXd;

/// Scenario of a protocol; every setting domain is taken in listed order.
Scenario scenario_of(const ProtocolSpec &spec);
/// Stacks one distribution per setting vector (in all_settings order).
Behaviour behaviour_of(const Scenario &scenario, const std::vector<OutcomeDistribution> &family);

/// Every deterministic causal strategy's behaviour, duplicates removed, in
/// first-seen order. N must be 2 with alphabets and setting counts <= 2.
std::vector<Behaviour> enumerate_deterministic(const Scenario &scenario);
/// Raw strategy count before deduplication.
Index deterministic_strategy_count(const Scenario &scenario);

struct PolytopeCertificate {
  enum class Status { kInside, kOutside, kIndeterminate };
  Status status = Status::kIndeterminate;
  /// Inside: convex weights per vertex.
  std::vector<double> weights;
  /// Inside: max |sum_j w_j v_j - p|.
  double residual = 0.0;
  /// Outside: f.v + offset <= 0 on every vertex, f.p + offset = margin > 0.
  Eigen::VectorXd functional;
  double offset = 0.0;
  double margin = 0.0;
  int iterations = 0;
};

const char *to_string(PolytopeCertificate::Status s);

/// Phase-1 dense simplex with Bland's rule. Cycling past the iteration cap
/// gives kIndeterminate.
PolytopeCertificate membership(const Behaviour &p, const std::vector<Behaviour> &vertices,
                               int max_iterations = 100000);

/// Re-checks the certificate's algebraic identity within tol.
bool check_certificate(const PolytopeCertificate &cert, const Behaviour &p, const std::vector<Behaviour> &vertices,
                       double tol = kLpTol);

/// sum_x w(x) sum_a c(a,x) p(a|x).
struct Game {
  Eigen::VectorXd coefficients;
  std::vector<double> setting_weights;
};

double game_score(const Scenario &scenario, const Behaviour &p, const Game &game);

/// Two parties each guessing the other's input: reward a_1 = x_2 and a_2 = x_1,
/// uniform over settings.
Game guess_your_neighbours_input(const Scenario &scenario);

struct GameBound {
  double value = 0.0;
  std::size_t vertex = 0;
};

/// Maximum score over the vertices (two-party scenarios only).
GameBound causal_bound(const Scenario &scenario, const Game &game, const std::vector<Behaviour> &vertices);

/// p(a_1 = x_2, a_2 = x_1 | x) = 1: each party reads the other's input.
Behaviour perfect_guess_behaviour(const Scenario &scenario);

}  // namespace qcausal
