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

// The compiling MDP.
//
// A state is the residual S_t = U * U_t^dagger, where U is the target and
// U_t = A_{t-1} ... A_0 the gates chosen so far. Taking action a peels one
// gate off the right: S_{t+1} = S_t * A_a^dagger. The reward is 0 when the new
// state is within eps of the identity (episode ends) and -1 otherwise.
//
// Worked example over {H, S}: target U = H*S*S. Peeling S gives H*S, peeling S
// again gives H, peeling H gives I with reward 0. The recorded actions
// S, S, H are in application order: S acts first on a state vector.

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "qcompile/gateset.hpp"
#include "qcompile/linalg.hpp"

namespace qcompile {

inline constexpr double kDefaultEps = 1e-3;

struct Transition {
  Unitary state;
  std::size_t action = 0;
  double reward = -1.0;
  Unitary next_state;
  bool done = false;
};

struct Trajectory {
  Unitary target;
  std::vector<Transition> steps;
  /// Length of the drawn action string; steps may be shorter when the walk
  /// reaches the identity early and the episode terminates.
  std::size_t requested_depth = 0;

  /// Recorded actions in application order.
  std::vector<std::size_t> actions() const;
};

/// One deterministic MDP transition. Throws ContractError on a bad action
/// index or eps <= 0.
Transition step(const Unitary& s, std::size_t action, const GateSet& gs, double eps);

/// Random reverse walk: draws `depth` uniform actions, forms the target
/// product and peels it back to the identity.
Trajectory generate_trajectory(const GateSet& gs, std::size_t depth, double eps,
                               std::uint64_t rng_seed);

/// Same walk for a fixed action string (application order).
Trajectory trajectory_from_actions(const GateSet& gs, const std::vector<std::size_t>& actions,
                                   double eps);

/// Fixed-capacity FIFO store of transitions. Insertion and sampling are
/// linearizable; the oldest samples are evicted first.
class ReplayPool {
 public:
  explicit ReplayPool(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const;
  void clear();
  void add(Transition t);
  void add_all(const std::vector<Transition>& ts);

  /// Copy of the i-th stored transition (0 = oldest).
  Transition at(std::size_t i) const;

  /// Uniform sample with replacement.
  std::vector<Transition> sample(std::size_t n, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::deque<Transition> samples_;
};

struct FillStats {
  std::size_t transitions_added = 0;
  std::size_t trajectories = 0;
  /// length_histogram[L] = number of trajectories drawn with length L.
  std::vector<std::size_t> length_histogram;
};

/// Adds `count` transitions from trajectories whose lengths are uniform on
/// [1, depth].
FillStats fill_pool(ReplayPool& pool, const GateSet& gs, std::size_t depth, std::size_t count,
                    double eps, std::uint64_t seed);

enum class TargetMode { kProduct, kHaar };

TargetMode parse_target_mode(const std::string& s);

/// Validation targets: random depth-length generator products or Haar-random
/// unitaries of the set's dimension.
std::vector<Unitary> sample_targets(const GateSet& gs, TargetMode mode, std::size_t depth,
                                    std::size_t n, std::uint64_t seed);

/// Trajectory dump, one record per line:
///   <state as hex little-endian doubles> <action> <reward> <done>
/// The state is encode_state(state); 8 doubles (128 hex digits) for dim 2.
void write_trajectory_dump(std::ostream& out, const std::vector<Transition>& steps);

struct DumpRecord {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  bool done = false;
};

std::vector<DumpRecord> read_trajectory_dump(std::istream& in);

/// Named targets for the CLI:
///   identity      I of the set's dimension
///   h             Hadamard (single qubit)
///   hss           H*S*S (single qubit)
///   xz-rot:<a>    exp(-i a/2 X(x)Z) (two qubits)
///   seq:<labels>  product of comma-separated gate labels, application order
Unitary builtin_target(const std::string& spec, const GateSet& gs);

}  // namespace qcompile
