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

#include "qcompile/oracle.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>

#include "binary_io.hpp"
#include "qcompile/errors.hpp"

namespace qcompile {

std::optional<int> StateGraph::find(const Unitary& u) const {
  auto it = index.find(StateKey(u));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

void guard_check(std::size_t n, std::size_t guard) {
  if (n > guard) {
    throw ContractError("state enumeration exceeded the guard of " + std::to_string(guard) +
                        " states; lower max_depth");
  }
}

}  // namespace

StateGraph enumerate_states(const GateSet& gs, int max_depth, double eps, std::size_t guard) {
  if (max_depth < 0) throw ContractError("enumerate_states: max_depth must be >= 0");
  StateGraph g;
  g.gateset_name = gs.name();
  g.gateset_hash = gs.ordering_hash();
  g.num_actions = gs.size();
  g.max_depth = max_depth;
  g.eps = eps;

  // Layered BFS from I. A state Y at product length k yields Y * A at length
  // k + 1; peeling A from Y * A returns Y.
  std::vector<int> layer_of;
  auto insert = [&](Unitary u, int layer) {
    auto [it, fresh] = g.index.try_emplace(StateKey(u), static_cast<int>(g.states.size()));
    if (fresh) {
      g.states.push_back(std::move(u));
      layer_of.push_back(layer);
      guard_check(g.states.size(), guard);
    }
  };
  insert(Unitary::identity(gs.dim()), 0);
  std::size_t begin = 0;
  for (int layer = 1; layer <= max_depth; ++layer) {
    std::size_t end = g.states.size();
    for (std::size_t s = begin; s < end; ++s) {
      for (std::size_t a = 0; a < gs.size(); ++a) insert(matmul(g.states[s], gs.matrix(a)), layer);
    }
    begin = end;
  }

  const std::size_t n = g.states.size();
  const std::size_t na = gs.size();
  g.next.assign(n * na, -1);
  std::vector<std::vector<int>> preds(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      auto it = g.index.find(StateKey(matmul_dagger(g.states[s], gs.matrix(a))));
      if (it != g.index.end()) {
        g.next[s * na + a] = it->second;
        preds[it->second].push_back(static_cast<int>(s));
      }
    }
  }

  // Exact remaining-gate counts: multi-source BFS backwards from every goal
  // state along MDP edges.
  g.dist.assign(n, -1);
  std::deque<int> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (fnorm_to_identity(g.states[s]) < eps) {
      g.dist[s] = 0;
      queue.push_back(static_cast<int>(s));
    }
  }
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop_front();
    for (int p : preds[t]) {
      if (g.dist[p] < 0) {
        g.dist[p] = g.dist[t] + 1;
        queue.push_back(p);
      }
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    // Every enumerated state peels back to I along its construction path.
    if (g.dist[s] < 0 || g.dist[s] > layer_of[s]) {
      throw ContractError("enumerate_states: inconsistent distance labels");
    }
  }
  return g;
}

std::optional<BfsResult> bfs_shortest(const Unitary& target, const GateSet& gs, double eps,
                                      int max_depth, std::size_t guard) {
  if (target.dim() != gs.dim()) throw ContractError("bfs_shortest: target dimension mismatch");
  if (max_depth < 0) throw ContractError("bfs_shortest: max_depth must be >= 0");
  struct Node {
    Unitary state;
    int parent;
    std::size_t via;
  };
  std::vector<Node> nodes;
  std::unordered_map<StateKey, int, StateKeyHash> seen;
  nodes.push_back({Unitary::identity(gs.dim()), -1, 0});
  seen.emplace(StateKey(nodes[0].state), 0);

  auto witness = [&](int idx) {
    BfsResult r;
    // The last multiplied gate is the rightmost factor, so walking parents
    // yields application order directly.
    for (int k = idx; nodes[k].parent >= 0; k = nodes[k].parent) r.sequence.push_back(nodes[k].via);
    r.length = r.sequence.size();
    for (std::size_t a : r.sequence) r.labels.push_back(gs.label(a));
    return r;
  };

  if (fnorm_dist(nodes[0].state, target) < eps) return witness(0);
  std::size_t begin = 0;
  for (int layer = 1; layer <= max_depth; ++layer) {
    std::size_t end = nodes.size();
    for (std::size_t s = begin; s < end; ++s) {
      for (std::size_t a = 0; a < gs.size(); ++a) {
        Unitary u = matmul(nodes[s].state, gs.matrix(a));
        auto [it, fresh] = seen.try_emplace(StateKey(u), static_cast<int>(nodes.size()));
        if (!fresh) continue;
        bool hit = fnorm_dist(u, target) < eps;
        nodes.push_back({std::move(u), static_cast<int>(s), a});
        guard_check(nodes.size(), guard);
        if (hit) return witness(static_cast<int>(nodes.size()) - 1);
      }
    }
    begin = end;
  }
  return std::nullopt;
}

TabularQ::TabularQ(std::shared_ptr<const StateGraph> graph, std::vector<double> table)
    : graph_(std::move(graph)), table_(std::move(table)) {
  if (!graph_) throw ContractError("TabularQ: null graph");
  if (table_.size() != graph_->size() * graph_->num_actions) {
    throw ContractError("TabularQ: table size does not match graph");
  }
}

void TabularQ::q_values(const Unitary& s, std::span<double> out) const {
  if (out.size() != num_actions()) throw ContractError("TabularQ: output size mismatch");
  auto idx = graph_->find(s);
  if (!idx) {
    std::fill(out.begin(), out.end(), kUnknownValue);
    return;
  }
  for (std::size_t a = 0; a < num_actions(); ++a) out[a] = q(*idx, a);
}

TabularQ tabular_q_adapter(std::shared_ptr<const StateGraph> graph) {
  if (!graph) throw ContractError("tabular_q_adapter: null graph");
  const std::size_t na = graph->num_actions;
  std::vector<double> table(graph->size() * na, kUnknownValue);
  for (std::size_t s = 0; s < graph->size(); ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      int t = graph->next[s * na + a];
      if (t >= 0) table[s * na + a] = -static_cast<double>(graph->dist[t]);
    }
  }
  return TabularQ(std::move(graph), std::move(table));
}

namespace {
constexpr char kGraphMagic[8] = {'Q', 'C', 'G', 'R', 'A', 'P', 'H', '1'};
}

void save_state_graph(std::ostream& out, const StateGraph& g) {
  out.write(kGraphMagic, 8);
  detail::put_u64(out, g.gateset_hash);
  detail::put_u32(out, static_cast<std::uint32_t>(g.max_depth));
  detail::put_f64(out, g.eps);
  detail::put_string(out, g.gateset_name);
  detail::put_u64(out, g.num_actions);
  detail::put_u64(out, g.states.size());
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    const Unitary& u = g.states[s];
    detail::put_u32(out, static_cast<std::uint32_t>(u.dim()));
    for (double v : encode_state(u)) detail::put_f64(out, v);
    detail::put_u32(out, static_cast<std::uint32_t>(g.dist[s]));
  }
  for (int t : g.next) detail::put_u32(out, static_cast<std::uint32_t>(t));
  if (!out) throw FormatError("failed to write state graph cache");
}

StateGraph load_state_graph(std::istream& in, const GateSet& gs, int max_depth, double eps) {
  char magic[8];
  if (!in.read(magic, 8) || !std::equal(magic, magic + 8, kGraphMagic)) {
    throw FormatError("graph cache: bad magic");
  }
  StateGraph g;
  g.gateset_hash = detail::get_u64(in, "gate-set hash");
  if (g.gateset_hash != gs.ordering_hash()) throw FormatError("graph cache: gate-set hash mismatch");
  g.max_depth = static_cast<int>(detail::get_u32(in, "depth"));
  if (g.max_depth != max_depth) throw FormatError("graph cache: depth mismatch");
  g.eps = detail::get_f64(in, "eps");
  if (g.eps != eps) throw FormatError("graph cache: eps mismatch");
  g.gateset_name = detail::get_string(in, "gate-set name");
  g.num_actions = detail::get_u64(in, "action count");
  if (g.num_actions != gs.size()) throw FormatError("graph cache: action count mismatch");
  std::uint64_t n = detail::get_u64(in, "state count");
  if (n > kOracleStateGuard) throw FormatError("graph cache: implausible state count");
  for (std::uint64_t s = 0; s < n; ++s) {
    int dim = static_cast<int>(detail::get_u32(in, "state dimension"));
    if (dim != gs.dim()) throw FormatError("graph cache: state dimension mismatch");
    std::vector<Complex> entries(dim * dim);
    for (auto& z : entries) {
      double re = detail::get_f64(in, "state entry");
      double im = detail::get_f64(in, "state entry");
      z = Complex(re, im);
    }
    Unitary u = Unitary::from_entries(dim, entries);
    g.index.emplace(StateKey(u), static_cast<int>(g.states.size()));
    g.states.push_back(std::move(u));
    g.dist.push_back(static_cast<int>(detail::get_u32(in, "distance")));
  }
  g.next.resize(n * g.num_actions);
  for (auto& t : g.next) t = static_cast<int>(detail::get_u32(in, "edge"));
  return g;
}

}  // namespace qcompile
