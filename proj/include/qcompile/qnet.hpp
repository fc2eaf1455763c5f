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

// Deep Q-network: a dense + residual MLP from an encoded state to one value
// per action, with hand-written backprop, Adam, and the depth curriculum.

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qcompile/env.hpp"
#include "qcompile/gateset.hpp"
#include "qcompile/oracle.hpp"
#include "qcompile/value_function.hpp"

namespace qcompile {

enum class Activation : std::uint32_t { kRelu = 0 };

struct NetConfig {
  int input_dim = 8;
  int hidden1 = 256;
  int hidden2 = 128;
  int blocks = 2;
  int block_width = 128;
  int outputs = 5;
  Activation activation = Activation::kRelu;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  bool needs_projection() const { return hidden2 != block_width; }
  bool operator==(const NetConfig&) const = default;

  /// 256/128 hidden, two residual blocks of width 128.
  static NetConfig desk(const GateSet& gs);
  /// 5000/1000 (single qubit) or 6000/2000 (two qubits), six blocks of 1000.
  static NetConfig paper(const GateSet& gs);
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// Parameters in layer order: input dense, second hidden dense, optional
/// projection, two dense layers per residual block, output dense. Gradients
/// share this shape.
struct Parameters {
  std::vector<DenseLayer> layers;

  std::size_t count() const;
  bool same_shape(const Parameters& other) const;
  void set_zero();
};

using Gradients = Parameters;

class QNetwork {
 public:
  /// He-style fan-in Gaussian weights, zero biases; frozen copy = live.
  QNetwork(const NetConfig& cfg, std::uint64_t seed);

  /// All weights and biases zero.
  static QNetwork zeros(const NetConfig& cfg);

  const NetConfig& config() const { return cfg_; }
  Parameters& live() { return live_; }
  const Parameters& live() const { return live_; }
  const Parameters& frozen() const { return frozen_; }
  Parameters& frozen_mut() { return frozen_; }

  /// Copies live parameters into the frozen target copy.
  void sync_frozen() { frozen_ = live_; }

  /// Values for one encoded state.
  std::vector<double> forward(std::span<const double> state_vec, bool use_frozen = false) const;

  /// Columns of x are encoded states; returns outputs x batch.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x, bool use_frozen = false) const;

  /// Layer indices into Parameters::layers.
  std::size_t projection_layer() const { return 2; }
  std::size_t block_layer(int block, int which) const;
  std::size_t output_layer() const { return live_.layers.size() - 1; }

 private:
  explicit QNetwork(const NetConfig& cfg);

  NetConfig cfg_;
  Parameters live_;
  Parameters frozen_;
};

struct LossAndGrad {
  double loss = 0.0;
  Gradients grads;
};

/// Mean of (y - Q(s, a; live))^2 with y = r + gamma * max_a' Q(s', a'; frozen),
/// y = r when done. y is a constant; gradients flow through live only.
LossAndGrad loss_and_grad(const QNetwork& net, std::span<const Transition> batch, double gamma);

/// The bootstrap targets y for a batch (frozen parameters).
std::vector<double> bellman_targets(const QNetwork& net, std::span<const Transition> batch,
                                    double gamma);

/// Encoded states of the batch as columns.
Eigen::MatrixXd encode_batch(std::span<const Transition> batch, bool next_states);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

/// Adam with bias correction over the live parameters. Moments persist across
/// curriculum depths.
class AdamOptimizer {
 public:
  AdamOptimizer(const Parameters& shape, AdamConfig cfg = {});

  void step(QNetwork& net, const Gradients& grads, double lr);

  std::uint64_t steps() const { return t_; }
  const Parameters& first_moment() const { return m_; }
  const Parameters& second_moment() const { return v_; }

 private:
  AdamConfig cfg_;
  Parameters m_;
  Parameters v_;
  std::uint64_t t_ = 0;
};

struct TrainConfig {
  double lr = 1e-3;
  double weight_decay = 0.0;
  double gamma = 1.0;
  double delta = 1e-2;
  int d_start = 3;
  int d_max = 40;
  std::size_t batch = 512;
  std::size_t transitions_per_depth = 100'000;
  std::size_t pool_capacity = 1'000'000;
  std::size_t target_sync_interval = 500;
  std::size_t max_steps_per_depth = 20'000;
  /// Empty and refill the pool every this many steps while above delta
  /// (0 disables; the pool is always refilled when the depth advances).
  std::size_t resample_interval = 0;
  double ema_half_life = 100.0;
  double eps = kDefaultEps;
  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct TrainLogRow {
  int depth = 0;
  std::size_t steps = 0;
  double final_loss = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;
};

struct TrainResult {
  QNetwork net;
  std::vector<TrainLogRow> log;
};

/// Called after each depth with the network at that point.
using CheckpointFn = std::function<void(int depth, const QNetwork& net)>;

/// Progress lines (one per depth, plus warnings on budget exhaustion).
using LogFn = std::function<void(const std::string& line)>;

/// For d = d_start..d_max: refill the pool with trajectories of length <= d,
/// then minibatch Adam on the Bellman loss until the loss EMA drops below
/// delta (checked once at least one target sync has happened at this depth)
/// or the per-depth step budget runs out.
TrainResult train_curriculum(const GateSet& gs, const NetConfig& ncfg, const TrainConfig& tcfg,
                             const CheckpointFn& on_checkpoint = {}, const LogFn& log = {});

/// Training log CSV. Wall times go into a leading comment line only, so the
/// data rows of two identical runs are byte-identical.
void write_train_log(std::ostream& out, const std::vector<TrainLogRow>& log);

/// The live network as an action-value function (reentrant).
class NetworkQ : public ActionValueFunction {
 public:
  explicit NetworkQ(const QNetwork& net) : net_(net) {}
  std::size_t num_actions() const override { return static_cast<std::size_t>(net_.config().outputs); }
  void q_values(const Unitary& s, std::span<double> out) const override;
  using ActionValueFunction::q_values;

 private:
  const QNetwork& net_;
};

struct ValueIterationResult {
  TabularQ q;
  /// Sup-norm change after each sweep.
  std::vector<double> sup_changes;
  /// True when no table entry ever increased between sweeps.
  bool monotone = true;
};

inline constexpr std::size_t kValueIterationGuard = 1'000'000;

/// Bellman value iteration on the enumerated graph until the sup change is
/// below 1e-12; converges to Q*(s, a) = -(remaining gates after a).
ValueIterationResult tabular_value_iteration(const GateSet& gs, int max_depth, double eps,
                                             double gamma = 1.0);

/// Versioned binary model file:
///   magic "QCMODEL\0", u32 version, u64 gate-set ordering hash,
///   string gate-set name, u32 x 7 NetConfig fields (input_dim, hidden1,
///   hidden2, blocks, block_width, outputs, activation), u32 layer count,
///   then per layer u32 rows, u32 cols, rows*cols weights row-major, rows
///   biases. Integers and doubles are little-endian.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(std::ostream& out, const QNetwork& net, const GateSet& gs);
void save_model_file(const std::string& path, const QNetwork& net, const GateSet& gs);

struct LoadedModel {
  std::string gateset_name;
  std::uint64_t gateset_hash = 0;
  QNetwork net;
};

/// Throws FormatError naming the failing header field. When `expected` is
/// given, the stored ordering hash must match it.
LoadedModel load_model(std::istream& in, const GateSet* expected = nullptr);
LoadedModel load_model_file(const std::string& path, const GateSet* expected = nullptr);

}  // namespace qcompile
