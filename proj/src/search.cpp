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

#include "qcompile/search.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "qcompile/errors.hpp"
#include "qcompile/parallel.hpp"

namespace qcompile {

namespace {

void check_target(const Unitary& target, const GateSet& gs, const ActionValueFunction& q) {
  if (target.dim() != gs.dim()) {
    throw ContractError("search: target dimension " + std::to_string(target.dim()) +
                        " does not match gate set dimension " + std::to_string(gs.dim()));
  }
  if (q.num_actions() != gs.size()) {
    throw ContractError("search: value function reports " + std::to_string(q.num_actions()) +
                        " actions, gate set has " + std::to_string(gs.size()));
  }
}

struct OpenEntry {
  double priority;
  std::uint64_t seq;
  std::size_t node;
  std::size_t action;
};

struct OpenOrder {
  // std::priority_queue keeps the "largest" on top: higher priority first,
  // then the earlier insertion.
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.seq > b.seq;
  }
};

std::vector<std::size_t> path_to(const std::vector<SearchNode>& nodes, std::size_t idx) {
  std::vector<std::size_t> path;
  for (std::size_t k = idx; nodes[k].parent; k = *nodes[k].parent) path.push_back(*nodes[k].via_action);
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t argmax_lowest(std::span<const double> q) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < q.size(); ++a) {
    if (q[a] > q[best]) best = a;
  }
  return best;
}

}  // namespace

SearchResult make_result(const Unitary& target, const GateSet& gs, std::vector<std::size_t> actions,
                         double eps, std::size_t nodes) {
  SearchResult r;
  r.compiled = gs.product(actions);
  r.distance = fnorm_dist(r.compiled, target);
  r.fidelity = avg_fidelity(r.compiled, target);
  r.nodes_expanded = nodes;
  r.status = r.distance < eps ? SearchStatus::kSuccess : SearchStatus::kBudgetExhausted;
  for (std::size_t a : actions) r.sequence.push_back(gs.label(a));
  r.actions = std::move(actions);
  return r;
}

SearchResult aq_search(const Unitary& target, const GateSet& gs, const ActionValueFunction& q,
                       double eps, std::size_t node_budget) {
  check_target(target, gs, q);
  if (node_budget < 1) throw ContractError("aq_search: node_budget must be >= 1");
  if (fnorm_to_identity(target) < eps) return make_result(target, gs, {}, eps, 0);

  const std::size_t na = gs.size();
  std::vector<SearchNode> nodes;
  std::unordered_map<StateKey, double, StateKeyHash> closed;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  std::uint64_t seq = 0;
  std::vector<double> qv(na);
  std::size_t best_node = 0;
  double best_dist = fnorm_to_identity(target);
  std::size_t expansions = 0;

  auto finish = [&](std::size_t node, std::optional<std::size_t> last, SearchStatus status) {
    std::vector<std::size_t> path = path_to(nodes, node);
    if (last) path.push_back(*last);
    SearchResult r = make_result(target, gs, std::move(path), eps, expansions);
    r.status = status;
    return r;
  };

  // Expands a node: evaluates Q once for all actions, tests each child for
  // the goal as it is generated, and pushes the rest. Returns the goal action.
  auto expand = [&](std::size_t idx) -> std::optional<std::size_t> {
    ++expansions;
    const SearchNode& n = nodes[idx];
    for (std::size_t a = 0; a < na; ++a) {
      if (fnorm_to_identity(matmul_dagger(n.state, gs.matrix(a))) < eps) return a;
    }
    q.q_values(n.state, qv);
    for (std::size_t a = 0; a < na; ++a) open.push({n.g + qv[a], seq++, idx, a});
    return std::nullopt;
  };

  nodes.push_back({target, 0.0, std::nullopt, std::nullopt, 0});
  closed.emplace(StateKey(target), 0.0);
  if (auto goal = expand(0)) return finish(0, goal, SearchStatus::kSuccess);

  while (!open.empty()) {
    OpenEntry e = open.top();
    open.pop();
    Unitary next = matmul_dagger(nodes[e.node].state, gs.matrix(e.action));
    if (fnorm_to_identity(next) < eps) return finish(e.node, e.action, SearchStatus::kSuccess);
    if (expansions >= node_budget) break;
    const double g = nodes[e.node].g - 1.0;
    StateKey key(next);
    auto it = closed.find(key);
    if (it != closed.end() && !(g > it->second)) continue;
    closed.insert_or_assign(key, g);
    const std::size_t depth = nodes[e.node].depth + 1;
    double dist = fnorm_to_identity(next);
    nodes.push_back({std::move(next), g, e.node, e.action, depth});
    const std::size_t idx = nodes.size() - 1;
    if (dist < best_dist) {
      best_dist = dist;
      best_node = idx;
    }
    if (auto goal = expand(idx)) return finish(idx, goal, SearchStatus::kSuccess);
  }
  return finish(best_node, std::nullopt, SearchStatus::kBudgetExhausted);
}

namespace {

template <typename Choose>
SearchResult rollout(const Unitary& target, const GateSet& gs, const ActionValueFunction& q,
                     double eps, std::size_t max_steps, Choose&& choose) {
  check_target(target, gs, q);
  if (max_steps < 1) throw ContractError("rollout: max_steps must be >= 1");
  if (fnorm_to_identity(target) < eps) return make_result(target, gs, {}, eps, 0);
  std::vector<double> qv(gs.size());
  std::vector<std::size_t> actions;
  std::size_t best_len = 0;
  double best_dist = fnorm_to_identity(target);
  Unitary s = target;
  std::size_t evals = 0;
  for (std::size_t t = 0; t < max_steps; ++t) {
    q.q_values(s, qv);
    ++evals;
    std::size_t a = choose(std::span<const double>(qv));
    s = matmul_dagger(s, gs.matrix(a));
    actions.push_back(a);
    double d = fnorm_to_identity(s);
    if (d < eps) return make_result(target, gs, actions, eps, evals);
    if (d < best_dist) {
      best_dist = d;
      best_len = actions.size();
    }
  }
  actions.resize(best_len);
  SearchResult r = make_result(target, gs, actions, eps, evals);
  r.status = SearchStatus::kBudgetExhausted;
  return r;
}

}  // namespace

SearchResult greedy_rollout(const Unitary& target, const GateSet& gs, const ActionValueFunction& q,
                            double eps, std::size_t max_steps) {
  return rollout(target, gs, q, eps, max_steps, [](std::span<const double> qv) { return argmax_lowest(qv); });
}

std::vector<double> boltzmann_probabilities(std::span<const double> q, double temperature_kt,
                                            BoltzmannSign sign) {
  if (!(temperature_kt > 0.0)) throw ContractError("boltzmann: temperature_kT must be > 0");
  const double s = sign == BoltzmannSign::kMaximize ? 1.0 : -1.0;
  std::vector<double> p(q.size(), 0.0);
  double top = -std::numeric_limits<double>::infinity();
  for (double v : q) {
    if (std::isfinite(v)) top = std::max(top, s * v / temperature_kt);
  }
  if (!std::isfinite(top)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(q.size()));
    return p;
  }
  double z = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (std::isfinite(q[a])) {
      p[a] = std::exp(s * q[a] / temperature_kt - top);
      z += p[a];
    }
  }
  for (double& v : p) v /= z;
  return p;
}

SearchResult boltzmann_rollout(const Unitary& target, const GateSet& gs,
                               const ActionValueFunction& q, double eps, std::size_t max_steps,
                               double temperature_kt, std::uint64_t seed, BoltzmannSign sign) {
  if (!(temperature_kt > 0.0)) throw ContractError("boltzmann: temperature_kT must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return rollout(target, gs, q, eps, max_steps, [&](std::span<const double> qv) {
    std::vector<double> p = boltzmann_probabilities(qv, temperature_kt, sign);
    double u = unit(rng);
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (p[a] <= 0.0) continue;
      last = a;
      acc += p[a];
      if (u < acc) return a;
    }
    return last;
  });
}

std::string format_result(const SearchResult& r) {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.sequence.size(); ++i) os << (i ? " " : "") << r.sequence[i];
  os << (r.sequence.empty() ? "# " : "  # ");
  os << std::setprecision(6) << "distance=" << r.distance << std::setprecision(10)
     << " fidelity=" << r.fidelity << " nodes=" << r.nodes_expanded;
  return os.str();
}

PolicyComparison evaluate_policies(const std::vector<Unitary>& targets, const GateSet& gs,
                                   const ActionValueFunction& q, double eps,
                                   const PolicyBudgets& budgets) {
  if (targets.empty()) throw ContractError("evaluate_policies: no targets");
  PolicyComparison cmp;
  cmp.per_target.resize(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    std::seed_seq sseq{budgets.seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 derive(sseq);
    auto& row = cmp.per_target[i];
    row.push_back(aq_search(targets[i], gs, q, eps, budgets.aq_nodes));
    row.push_back(greedy_rollout(targets[i], gs, q, eps, budgets.rollout_steps));
    row.push_back(boltzmann_rollout(targets[i], gs, q, eps, budgets.rollout_steps,
                                    budgets.temperature_kt, derive(), budgets.boltzmann_sign));
  });
  const char* names[] = {"aq_star", "greedy", "boltzmann"};
  for (std::size_t k = 0; k < 3; ++k) {
    PolicyStats st;
    st.strategy = names[k];
    st.n = targets.size();
    for (const auto& row : cmp.per_target) {
      st.mean_fidelity += row[k].fidelity;
      st.mean_length += static_cast<double>(row[k].actions.size());
      st.successes += row[k].success() ? 1 : 0;
    }
    st.mean_fidelity /= static_cast<double>(st.n);
    st.mean_length /= static_cast<double>(st.n);
    for (const auto& row : cmp.per_target) {
      st.var_fidelity += std::pow(row[k].fidelity - st.mean_fidelity, 2);
      st.var_length += std::pow(static_cast<double>(row[k].actions.size()) - st.mean_length, 2);
    }
    st.var_fidelity /= static_cast<double>(st.n);
    st.var_length /= static_cast<double>(st.n);
    cmp.rows.push_back(st);
  }
  return cmp;
}

void write_policy_csv(std::ostream& out, const PolicyComparison& cmp) {
  std::ostringstream os;
  os << "strategy,n,successes,mean_fidelity,var_fidelity,mean_length,var_length\n";
  os << std::setprecision(17);
  for (const auto& r : cmp.rows) {
    os << r.strategy << ',' << r.n << ',' << r.successes << ',' << r.mean_fidelity << ','
       << r.var_fidelity << ',' << r.mean_length << ',' << r.var_length << '\n';
  }
  out << os.str();
}

}  // namespace qcompile
