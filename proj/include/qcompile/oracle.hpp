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

// Exhaustive ground truth for small depths: layered BFS over generator
// products, the reachable-state graph, and an exact action-value table that
// can stand in for the network during search.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcompile/env.hpp"
#include "qcompile/gateset.hpp"
#include "qcompile/linalg.hpp"
#include "qcompile/value_function.hpp"

namespace qcompile {

inline constexpr std::size_t kOracleStateGuard = 10'000'000;

/// Deduplicated states reachable from I with at most max_depth gates.
///
/// next[s * num_actions + a] is the index of states[s] * A_a^dagger (the MDP
/// successor), or -1 when that state lies beyond the enumeration depth.
/// dist[s] is the exact number of gates still needed to reach a goal state
/// (fnorm distance to I below eps).
struct StateGraph {
  std::string gateset_name;
  std::uint64_t gateset_hash = 0;
  std::size_t num_actions = 0;
  int max_depth = 0;
  double eps = kDefaultEps;
  std::vector<Unitary> states;
  std::vector<int> dist;
  std::vector<int> next;
  std::unordered_map<StateKey, int, StateKeyHash> index;

  std::size_t size() const { return states.size(); }
  std::optional<int> find(const Unitary& u) const;
  int successor(int s, std::size_t a) const { return next[s * num_actions + a]; }
};

/// Throws ContractError when more than `guard` states would be stored.
StateGraph enumerate_states(const GateSet& gs, int max_depth, double eps = kDefaultEps,
                            std::size_t guard = kOracleStateGuard);

struct BfsResult {
  std::size_t length = 0;
  /// Application order (first element acts first).
  std::vector<std::size_t> sequence;
  std::vector<std::string> labels;
};

/// Shortest generator sequence whose product lies within eps of target, or
/// nullopt if none of length <= max_depth exists.
std::optional<BfsResult> bfs_shortest(const Unitary& target, const GateSet& gs, double eps,
                                      int max_depth, std::size_t guard = kOracleStateGuard);

/// Exact action values over a StateGraph. States outside the graph, and
/// actions leading outside it, report kUnknownValue.
class TabularQ : public ActionValueFunction {
 public:
  TabularQ(std::shared_ptr<const StateGraph> graph, std::vector<double> table);

  std::size_t num_actions() const override { return graph_->num_actions; }
  void q_values(const Unitary& s, std::span<double> out) const override;
  using ActionValueFunction::q_values;

  double q(int state, std::size_t action) const { return table_[state * num_actions() + action]; }
  const StateGraph& graph() const { return *graph_; }
  const std::vector<double>& table() const { return table_; }

 private:
  std::shared_ptr<const StateGraph> graph_;
  std::vector<double> table_;
};

/// Q(s, a) = -dist(successor(s, a)); 0 for goal-completing actions.
TabularQ tabular_q_adapter(std::shared_ptr<const StateGraph> graph);

/// Graph cache: binary dump keyed by (gate-set hash, depth, eps).
void save_state_graph(std::ostream& out, const StateGraph& g);
StateGraph load_state_graph(std::istream& in, const GateSet& gs, int max_depth, double eps);

}  // namespace qcompile
