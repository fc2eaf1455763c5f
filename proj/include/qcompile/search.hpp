// Copyright 2026 The qcompile Authors
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

// Inference: AQ* best-first search over (state, action) pairs guided by an
// action-value function, and the greedy / Boltzmann rollout baselines.
//
// Output line format (format_result):
//
//   HS H HS  # distance=2.22045e-16 fidelity=1 nodes=4
//
// Labels are in application order: the leftmost gate acts first on a state
// vector and is therefore the rightmost factor of the matrix product. For the
// sequence above the product is HS * H * HS = H*S*S.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcompile/gateset.hpp"
#include "qcompile/linalg.hpp"
#include "qcompile/value_function.hpp"

namespace qcompile {

inline constexpr std::size_t kDefaultNodeBudget1q = 100'000;
inline constexpr std::size_t kDefaultNodeBudget2q = 300'000;

struct SearchNode {
  Unitary state;
  double g = 0.0;  ///< cumulative reward from the target, <= 0
  std::optional<std::size_t> parent;
  std::optional<std::size_t> via_action;
  std::size_t depth = 0;
};

enum class SearchStatus { kSuccess, kBudgetExhausted };

struct SearchResult {
  std::vector<std::size_t> actions;  ///< application order
  std::vector<std::string> sequence;
  Unitary compiled;  ///< product of the sequence
  double distance = 0.0;
  double fidelity = 1.0;
  std::size_t nodes_expanded = 0;
  SearchStatus status = SearchStatus::kBudgetExhausted;

  bool success() const { return status == SearchStatus::kSuccess; }
};

/// AQ*: OPEN is a max-priority queue of (state, action) keyed by
/// g(state) + Q(state, action); popping (s, a) generates s' = s * A_a^dagger;
/// a goal s' returns at once. Otherwise s' is expanded (all actions pushed
/// from one evaluation of Q(s', .)) when it is new or strictly improves its
/// CLOSED cost. Every root action is pushed. Each expansion counts against
/// node_budget; on exhaustion the result carries the path to the node
/// closest to the identity. Equal priorities pop in FIFO order.
SearchResult aq_search(const Unitary& target, const GateSet& gs, const ActionValueFunction& q,
                       double eps, std::size_t node_budget);

/// Repeatedly takes argmax_a Q (lowest index on ties) until the goal or
/// max_steps. On failure returns the closest prefix.
SearchResult greedy_rollout(const Unitary& target, const GateSet& gs, const ActionValueFunction& q,
                            double eps, std::size_t max_steps);

enum class BoltzmannSign {
  kAsPrinted,  ///< p(a) ~ exp(-Q/kT): favours low values
  kMaximize,   ///< p(a) ~ exp(+Q/kT)
};

/// Action probabilities for one Q vector. Unknown values get probability 0
/// unless every value is unknown (then uniform).
std::vector<double> boltzmann_probabilities(std::span<const double> q, double temperature_kt,
                                            BoltzmannSign sign);

SearchResult boltzmann_rollout(const Unitary& target, const GateSet& gs,
                               const ActionValueFunction& q, double eps, std::size_t max_steps,
                               double temperature_kt, std::uint64_t seed,
                               BoltzmannSign sign = BoltzmannSign::kAsPrinted);

/// Builds the result fields (compiled product, distance, fidelity) for an
/// action path from the target.
SearchResult make_result(const Unitary& target, const GateSet& gs, std::vector<std::size_t> actions,
                         double eps, std::size_t nodes);

/// One line: labels, then `  # distance=<d> fidelity=<f> nodes=<n>`.
std::string format_result(const SearchResult& r);

struct PolicyBudgets {
  std::size_t aq_nodes = 10'000;
  std::size_t rollout_steps = 40;
  double temperature_kt = 1.0;
  BoltzmannSign boltzmann_sign = BoltzmannSign::kMaximize;
  std::uint64_t seed = 1;
};

struct PolicyStats {
  std::string strategy;
  std::size_t n = 0;
  std::size_t successes = 0;
  double mean_fidelity = 0.0;
  double var_fidelity = 0.0;
  double mean_length = 0.0;
  double var_length = 0.0;
};

struct PolicyComparison {
  /// aq_star, greedy, boltzmann in that order.
  std::vector<PolicyStats> rows;
  /// per_target[i][k]: result of strategy k on target i.
  std::vector<std::vector<SearchResult>> per_target;
};

/// Runs AQ*, greedy and Boltzmann on every target (targets in parallel, seeds
/// derived per target so results do not depend on the thread count).
PolicyComparison evaluate_policies(const std::vector<Unitary>& targets, const GateSet& gs,
                                   const ActionValueFunction& q, double eps,
                                   const PolicyBudgets& budgets);

/// CSV: strategy,n,successes,mean_fidelity,var_fidelity,mean_length,var_length
void write_policy_csv(std::ostream& out, const PolicyComparison& cmp);

}  // namespace qcompile
