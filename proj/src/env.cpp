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

#include "qcompile/env.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "qcompile/errors.hpp"

namespace qcompile {

std::vector<std::size_t> Trajectory::actions() const {
  std::vector<std::size_t> out;
  out.reserve(steps.size());
  for (const auto& t : steps) out.push_back(t.action);
  return out;
}

Transition step(const Unitary& s, std::size_t action, const GateSet& gs, double eps) {
  if (!(eps > 0.0)) throw ContractError("step: eps must be positive");
  const Unitary& g = gs.matrix(action);
  Transition t{s, action, -1.0, matmul_dagger(s, g), false};
  if (fnorm_to_identity(t.next_state) < eps) {
    t.reward = 0.0;
    t.done = true;
  }
  return t;
}

Trajectory trajectory_from_actions(const GateSet& gs, const std::vector<std::size_t>& actions,
                                   double eps) {
  Trajectory traj;
  traj.requested_depth = actions.size();
  traj.target = gs.product(actions);
  Unitary s = traj.target;
  for (std::size_t a : actions) {
    Transition t = step(s, a, gs, eps);
    s = t.next_state;
    bool done = t.done;
    traj.steps.push_back(std::move(t));
    if (done) break;
  }
  return traj;
}

Trajectory generate_trajectory(const GateSet& gs, std::size_t depth, double eps,
                               std::uint64_t rng_seed) {
  if (depth < 1) throw ContractError("generate_trajectory: depth must be >= 1");
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
  std::vector<std::size_t> actions(depth);
  for (auto& a : actions) a = pick(rng);
  return trajectory_from_actions(gs, actions, eps);
}

ReplayPool::ReplayPool(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay pool capacity must be >= 1");
}

std::size_t ReplayPool::size() const {
  std::lock_guard lock(mu_);
  return samples_.size();
}

void ReplayPool::clear() {
  std::lock_guard lock(mu_);
  samples_.clear();
}

void ReplayPool::add(Transition t) {
  std::lock_guard lock(mu_);
  samples_.push_back(std::move(t));
  if (samples_.size() > capacity_) samples_.pop_front();
}

void ReplayPool::add_all(const std::vector<Transition>& ts) {
  std::lock_guard lock(mu_);
  for (const auto& t : ts) {
    samples_.push_back(t);
    if (samples_.size() > capacity_) samples_.pop_front();
  }
}

Transition ReplayPool::at(std::size_t i) const {
  std::lock_guard lock(mu_);
  if (i >= samples_.size()) throw ContractError("replay pool index out of range");
  return samples_[i];
}

std::vector<Transition> ReplayPool::sample(std::size_t n, std::mt19937_64& rng) const {
  std::lock_guard lock(mu_);
  if (samples_.empty()) throw ContractError("cannot sample from an empty replay pool");
  std::uniform_int_distribution<std::size_t> pick(0, samples_.size() - 1);
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(samples_[pick(rng)]);
  return out;
}

FillStats fill_pool(ReplayPool& pool, const GateSet& gs, std::size_t depth, std::size_t count,
                    double eps, std::uint64_t seed) {
  if (count < 1) throw ContractError("fill_pool: count must be >= 1");
  if (depth < 1) throw ContractError("fill_pool: depth must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> length(1, depth);
  FillStats stats;
  stats.length_histogram.assign(depth + 1, 0);
  std::vector<Transition> batch;
  while (stats.transitions_added < count) {
    std::size_t len = length(rng);
    Trajectory traj = generate_trajectory(gs, len, eps, rng());
    ++stats.trajectories;
    ++stats.length_histogram[len];
    for (auto& t : traj.steps) {
      if (stats.transitions_added == count) break;
      batch.push_back(std::move(t));
      ++stats.transitions_added;
    }
  }
  pool.add_all(batch);
  return stats;
}

TargetMode parse_target_mode(const std::string& s) {
  if (s == "product") return TargetMode::kProduct;
  if (s == "haar") return TargetMode::kHaar;
  throw ConfigError("unknown target mode '" + s + "'; valid: product, haar");
}

std::vector<Unitary> sample_targets(const GateSet& gs, TargetMode mode, std::size_t depth,
                                    std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ContractError("sample_targets: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Unitary> out;
  out.reserve(n);
  if (mode == TargetMode::kHaar) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(haar_random(gs.dim(), rng));
    return out;
  }
  std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> actions(depth);
    for (auto& a : actions) a = pick(rng);
    out.push_back(gs.product(actions));
  }
  return out;
}

namespace {

constexpr char kHex[] = "0123456789abcdef";

void put_hex_double(std::string& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int byte = 0; byte < 8; ++byte) {
    unsigned b = static_cast<unsigned>((bits >> (8 * byte)) & 0xffu);
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xfu]);
  }
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

void write_trajectory_dump(std::ostream& out, const std::vector<Transition>& steps) {
  for (const auto& t : steps) {
    std::string line;
    for (double v : encode_state(t.state)) put_hex_double(line, v);
    line += ' ';
    line += std::to_string(t.action);
    line += t.reward == 0.0 ? " 0" : " -1";
    line += t.done ? " 1\n" : " 0\n";
    out << line;
  }
}

std::vector<DumpRecord> read_trajectory_dump(std::istream& in) {
  std::vector<DumpRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string hex;
    DumpRecord rec;
    int done = 0;
    if (!(ls >> hex >> rec.action >> rec.reward >> done) || hex.size() % 16 != 0) {
      throw FormatError("trajectory dump line " + std::to_string(lineno) + ": malformed record");
    }
    for (std::size_t k = 0; k < hex.size(); k += 16) {
      std::uint64_t bits = 0;
      for (int byte = 0; byte < 8; ++byte) {
        int hi = hex_digit(hex[k + 2 * byte]);
        int lo = hex_digit(hex[k + 2 * byte + 1]);
        if (hi < 0 || lo < 0) {
          throw FormatError("trajectory dump line " + std::to_string(lineno) + ": bad hex digit");
        }
        bits |= static_cast<std::uint64_t>(hi * 16 + lo) << (8 * byte);
      }
      rec.state.push_back(std::bit_cast<double>(bits));
    }
    rec.done = done != 0;
    out.push_back(std::move(rec));
  }
  return out;
}

Unitary builtin_target(const std::string& spec, const GateSet& gs) {
  auto need_dim = [&](int d) {
    if (gs.dim() != d) {
      throw ContractError("target '" + spec + "' has dimension " + std::to_string(d) +
                          " but gate set " + gs.name() + " has dimension " + std::to_string(gs.dim()));
    }
  };
  if (spec == "identity") return Unitary::identity(gs.dim());
  if (spec == "h") {
    need_dim(2);
    return gates::hadamard();
  }
  if (spec == "hss") {
    need_dim(2);
    return matmul(gates::hadamard(), matmul(gates::phase_s(), gates::phase_s()));
  }
  if (spec.rfind("xz-rot:", 0) == 0) {
    need_dim(4);
    const std::string arg = spec.substr(7);
    try {
      std::size_t used = 0;
      double alpha = std::stod(arg, &used);
      if (used == arg.size()) return xz_rotation(alpha);
    } catch (const std::exception&) {
    }
    throw ConfigError("xz-rot: angle '" + arg + "' is not a number");
  }
  if (spec.rfind("seq:", 0) == 0) {
    std::vector<std::size_t> actions;
    std::stringstream ss(spec.substr(4));
    std::string label;
    while (std::getline(ss, label, ',')) {
      auto idx = gs.find(label);
      if (!idx) throw ConfigError("seq: unknown gate label '" + label + "' in gate set " + gs.name());
      actions.push_back(*idx);
    }
    return gs.product(actions);
  }
  throw ConfigError("unknown builtin target '" + spec +
                    "' (valid: identity, h, hss, xz-rot:<alpha>, seq:<labels>)");
}

}  // namespace qcompile
