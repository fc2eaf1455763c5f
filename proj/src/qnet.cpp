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

#include "qcompile/qnet.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "binary_io.hpp"
#include "qcompile/errors.hpp"

namespace qcompile {

void NetConfig::validate() const {
  auto positive = [](int v, const char* field) {
    if (v < 1) throw ConfigError(std::string("net.") + field + " must be >= 1, got " + std::to_string(v));
  };
  positive(input_dim, "input_dim");
  positive(hidden1, "hidden1");
  positive(hidden2, "hidden2");
  positive(blocks, "blocks");
  positive(block_width, "block_width");
  positive(outputs, "outputs");
  if (activation != Activation::kRelu) throw ConfigError("net.activation: only relu is supported");
}

NetConfig NetConfig::desk(const GateSet& gs) {
  NetConfig c;
  c.input_dim = 2 * gs.dim() * gs.dim();
  c.hidden1 = 256;
  c.hidden2 = 128;
  c.blocks = 2;
  c.block_width = 128;
  c.outputs = static_cast<int>(gs.size());
  return c;
}

NetConfig NetConfig::paper(const GateSet& gs) {
  NetConfig c;
  c.input_dim = 2 * gs.dim() * gs.dim();
  c.hidden1 = gs.qubits() == 1 ? 5000 : 6000;
  c.hidden2 = gs.qubits() == 1 ? 1000 : 2000;
  c.blocks = 6;
  c.block_width = 1000;
  c.outputs = static_cast<int>(gs.size());
  return c;
}

std::size_t Parameters::count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

bool Parameters::same_shape(const Parameters& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].weight.rows() != other.layers[i].weight.rows() ||
        layers[i].weight.cols() != other.layers[i].weight.cols() ||
        layers[i].bias.size() != other.layers[i].bias.size()) {
      return false;
    }
  }
  return true;
}

void Parameters::set_zero() {
  for (auto& l : layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

QNetwork::QNetwork(const NetConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  auto add = [this](int out, int in) {
    live_.layers.push_back({Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)});
  };
  add(cfg_.hidden1, cfg_.input_dim);
  add(cfg_.hidden2, cfg_.hidden1);
  if (cfg_.needs_projection()) add(cfg_.block_width, cfg_.hidden2);
  for (int b = 0; b < cfg_.blocks; ++b) {
    add(cfg_.block_width, cfg_.block_width);
    add(cfg_.block_width, cfg_.block_width);
  }
  add(cfg_.outputs, cfg_.block_width);
  frozen_ = live_;
}

QNetwork::QNetwork(const NetConfig& cfg, std::uint64_t seed) : QNetwork(cfg) {
  std::mt19937_64 rng(seed);
  for (auto& l : live_.layers) {
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(l.weight.cols())));
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = normal(rng);
    }
  }
  frozen_ = live_;
}

QNetwork QNetwork::zeros(const NetConfig& cfg) { return QNetwork(cfg); }

std::size_t QNetwork::block_layer(int block, int which) const {
  return (cfg_.needs_projection() ? 3 : 2) + 2 * static_cast<std::size_t>(block) + which;
}

namespace {

struct Cache {
  Eigen::MatrixXd x0, z1, h1, z2, h2;
  // Per residual block: input, inner pre-activation, inner activation, sum
  // before the closing relu.
  std::vector<Eigen::MatrixXd> blk_in, blk_u, blk_v, blk_z;
  Eigen::MatrixXd last;
};

Eigen::MatrixXd dense(const DenseLayer& l, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd y = l.weight * x;
  y.colwise() += l.bias;
  return y;
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd run_forward(const NetConfig& cfg, const Parameters& p, const Eigen::MatrixXd& x,
                            Cache* cache) {
  if (x.rows() != cfg.input_dim) {
    throw ContractError("forward: state vector length " + std::to_string(x.rows()) +
                        " does not match input_dim " + std::to_string(cfg.input_dim));
  }
  std::size_t li = 0;
  Eigen::MatrixXd z1 = dense(p.layers[li++], x);
  Eigen::MatrixXd h1 = relu(z1);
  Eigen::MatrixXd z2 = dense(p.layers[li++], h1);
  Eigen::MatrixXd h = relu(z2);
  if (cache) {
    cache->x0 = x;
    cache->z1 = std::move(z1);
    cache->h1 = h1;
    cache->z2 = std::move(z2);
    cache->h2 = h;
    cache->blk_in.clear();
    cache->blk_u.clear();
    cache->blk_v.clear();
    cache->blk_z.clear();
  }
  if (cfg.needs_projection()) h = dense(p.layers[li++], h);
  for (int b = 0; b < cfg.blocks; ++b) {
    Eigen::MatrixXd u = dense(p.layers[li++], h);
    Eigen::MatrixXd v = relu(u);
    Eigen::MatrixXd z = dense(p.layers[li++], v) + h;
    if (cache) {
      cache->blk_in.push_back(h);
      cache->blk_u.push_back(std::move(u));
      cache->blk_v.push_back(std::move(v));
    }
    h = relu(z);
    if (cache) cache->blk_z.push_back(std::move(z));
  }
  if (cache) cache->last = h;
  return dense(p.layers[li], h);
}

void accumulate(DenseLayer& g, const Eigen::MatrixXd& delta, const Eigen::MatrixXd& input) {
  g.weight.noalias() = delta * input.transpose();
  g.bias = delta.rowwise().sum();
}

Eigen::MatrixXd relu_mask(const Eigen::MatrixXd& grad, const Eigen::MatrixXd& pre) {
  return (pre.array() > 0.0).select(grad, 0.0);
}

}  // namespace

std::vector<double> QNetwork::forward(std::span<const double> state_vec, bool use_frozen) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(state_vec.size()), 1);
  for (std::size_t i = 0; i < state_vec.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = state_vec[i];
  Eigen::MatrixXd y = run_forward(cfg_, use_frozen ? frozen_ : live_, x, nullptr);
  return std::vector<double>(y.data(), y.data() + y.size());
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& x, bool use_frozen) const {
  return run_forward(cfg_, use_frozen ? frozen_ : live_, x, nullptr);
}

Eigen::MatrixXd encode_batch(std::span<const Transition> batch, bool next_states) {
  if (batch.empty()) return {};
  const int dim = batch.front().state.dim();
  Eigen::MatrixXd x(2 * dim * dim, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Unitary& u = next_states ? batch[i].next_state : batch[i].state;
    if (u.dim() != dim) throw ContractError("encode_batch: mixed state dimensions");
    encode_state_into(u, std::span<double>(x.col(static_cast<Eigen::Index>(i)).data(),
                                           static_cast<std::size_t>(x.rows())));
  }
  return x;
}

std::vector<double> bellman_targets(const QNetwork& net, std::span<const Transition> batch,
                                    double gamma) {
  std::vector<double> y(batch.size());
  bool any_bootstrap = false;
  for (const auto& t : batch) any_bootstrap |= !t.done;
  Eigen::MatrixXd qn;
  if (any_bootstrap) qn = net.forward_batch(encode_batch(batch, true), true);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    y[i] = batch[i].reward;
    if (!batch[i].done) y[i] += gamma * qn.col(static_cast<Eigen::Index>(i)).maxCoeff();
  }
  return y;
}

LossAndGrad loss_and_grad(const QNetwork& net, std::span<const Transition> batch, double gamma) {
  if (batch.empty()) throw ContractError("loss_and_grad: empty batch");
  const NetConfig& cfg = net.config();
  const auto n = static_cast<Eigen::Index>(batch.size());
  for (const auto& t : batch) {
    if (t.action >= static_cast<std::size_t>(cfg.outputs)) {
      throw ContractError("loss_and_grad: action index out of range");
    }
  }
  std::vector<double> y = bellman_targets(net, batch, gamma);

  Cache cache;
  Eigen::MatrixXd out = run_forward(cfg, net.live(), encode_batch(batch, false), &cache);

  LossAndGrad res;
  Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(out.rows(), n);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto a = static_cast<Eigen::Index>(batch[i].action);
    double err = y[i] - out(a, i);
    loss += err * err;
    d_out(a, i) = -2.0 * err / static_cast<double>(n);
  }
  res.loss = loss / static_cast<double>(n);

  const Parameters& p = net.live();
  res.grads = p;
  auto& g = res.grads.layers;

  std::size_t li = p.layers.size() - 1;
  accumulate(g[li], d_out, cache.last);
  Eigen::MatrixXd dh = p.layers[li].weight.transpose() * d_out;
  for (int b = cfg.blocks - 1; b >= 0; --b) {
    const std::size_t second = li - 1;
    const std::size_t first = li - 2;
    Eigen::MatrixXd dz = relu_mask(dh, cache.blk_z[b]);
    accumulate(g[second], dz, cache.blk_v[b]);
    Eigen::MatrixXd du = relu_mask(p.layers[second].weight.transpose() * dz, cache.blk_u[b]);
    accumulate(g[first], du, cache.blk_in[b]);
    dh = p.layers[first].weight.transpose() * du + dz;
    li = first;
  }
  if (cfg.needs_projection()) {
    --li;
    accumulate(g[li], dh, cache.h2);
    dh = p.layers[li].weight.transpose() * dh;
  }
  Eigen::MatrixXd dz2 = relu_mask(dh, cache.z2);
  accumulate(g[1], dz2, cache.h1);
  Eigen::MatrixXd dz1 = relu_mask(p.layers[1].weight.transpose() * dz2, cache.z1);
  accumulate(g[0], dz1, cache.x0);
  return res;
}

AdamOptimizer::AdamOptimizer(const Parameters& shape, AdamConfig cfg)
    : cfg_(cfg), m_(shape), v_(shape) {
  m_.set_zero();
  v_.set_zero();
}

void AdamOptimizer::step(QNetwork& net, const Gradients& grads, double lr) {
  Parameters& p = net.live();
  if (!p.same_shape(grads) || !p.same_shape(m_)) {
    throw ContractError("adam_step: gradient shape does not match parameters");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    auto g = (grad.array() + cfg_.weight_decay * param.array()).eval();
    m.array() = cfg_.beta1 * m.array() + (1.0 - cfg_.beta1) * g;
    v.array() = cfg_.beta2 * v.array() + (1.0 - cfg_.beta2) * g.square();
    param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg_.eps);
  };
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    update(p.layers[i].weight, grads.layers[i].weight, m_.layers[i].weight, v_.layers[i].weight);
    update(p.layers[i].bias, grads.layers[i].bias, m_.layers[i].bias, v_.layers[i].bias);
  }
}

void TrainConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("train.gamma must lie in [0, 1]");
  if (!(delta > 0.0)) throw ConfigError("train.delta must be > 0");
  if (!(lr > 0.0)) throw ConfigError("train.lr must be > 0");
  if (weight_decay < 0.0) throw ConfigError("train.weight_decay must be >= 0");
  if (d_start < 1) throw ConfigError("train.d_start must be >= 1");
  if (d_start > d_max) {
    throw ConfigError("train.d_max (" + std::to_string(d_max) + ") must be >= train.d_start (" +
                      std::to_string(d_start) + ")");
  }
  if (batch < 1) throw ConfigError("train.batch must be >= 1");
  if (transitions_per_depth < 1) throw ConfigError("train.transitions_per_depth must be >= 1");
  if (pool_capacity < 1) throw ConfigError("train.pool_capacity must be >= 1");
  if (target_sync_interval < 1) throw ConfigError("train.target_sync_interval must be >= 1");
  if (max_steps_per_depth < 1) throw ConfigError("train.max_steps_per_depth must be >= 1");
  if (!(ema_half_life > 0.0)) throw ConfigError("train.ema_half_life must be > 0");
  if (!(eps > 0.0)) throw ConfigError("train.eps must be > 0");
}

TrainResult train_curriculum(const GateSet& gs, const NetConfig& ncfg, const TrainConfig& tcfg,
                             const CheckpointFn& on_checkpoint, const LogFn& log) {
  tcfg.validate();
  ncfg.validate();
  if (ncfg.outputs != static_cast<int>(gs.size())) {
    throw ConfigError("net.outputs (" + std::to_string(ncfg.outputs) +
                      ") must equal the gate-set size (" + std::to_string(gs.size()) + ")");
  }
  if (ncfg.input_dim != 2 * gs.dim() * gs.dim()) {
    throw ConfigError("net.input_dim must be 2*dim^2 = " + std::to_string(2 * gs.dim() * gs.dim()));
  }

  std::mt19937_64 rng(tcfg.seed);
  TrainResult result{QNetwork(ncfg, rng()), {}};
  QNetwork& net = result.net;
  AdamOptimizer opt(net.live(), AdamConfig{.weight_decay = tcfg.weight_decay});
  ReplayPool pool(tcfg.pool_capacity);
  const double decay = std::pow(0.5, 1.0 / tcfg.ema_half_life);
  const std::size_t warmup =
      std::min(tcfg.target_sync_interval, static_cast<std::size_t>(std::ceil(tcfg.ema_half_life)));

  for (int d = tcfg.d_start; d <= tcfg.d_max; ++d) {
    auto t0 = std::chrono::steady_clock::now();
    pool.clear();
    fill_pool(pool, gs, static_cast<std::size_t>(d), tcfg.transitions_per_depth, tcfg.eps, rng());

    TrainLogRow row;
    row.depth = d;
    double ema = std::numeric_limits<double>::quiet_NaN();
    std::size_t since_sync = 0;
    std::size_t syncs = 0;
    while (row.steps < tcfg.max_steps_per_depth) {
      std::vector<Transition> batch = pool.sample(tcfg.batch, rng);
      LossAndGrad lg = loss_and_grad(net, batch, tcfg.gamma);
      opt.step(net, lg.grads, tcfg.lr);
      ++row.steps;
      ++since_sync;
      ema = std::isnan(ema) ? lg.loss : decay * ema + (1.0 - decay) * lg.loss;
      row.final_loss = ema;
      // The EMA restarts at every sync so that it measures the loss against
      // the current targets only.
      if (syncs > 0 && since_sync >= warmup && ema < tcfg.delta) {
        row.converged = true;
        break;
      }
      if (since_sync == tcfg.target_sync_interval) {
        net.sync_frozen();
        since_sync = 0;
        ++syncs;
        ema = std::numeric_limits<double>::quiet_NaN();
      }
      if (tcfg.resample_interval && row.steps % tcfg.resample_interval == 0) {
        pool.clear();
        fill_pool(pool, gs, static_cast<std::size_t>(d), tcfg.transitions_per_depth, tcfg.eps, rng());
      }
    }
    net.sync_frozen();
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (log) {
      std::ostringstream os;
      os << "depth " << d << ": steps=" << row.steps << " loss=" << std::setprecision(6)
         << row.final_loss << " time=" << std::setprecision(4) << row.wall_seconds << "s";
      if (!row.converged) os << " [warning: step budget exhausted before loss < delta]";
      log(os.str());
    }
    result.log.push_back(row);
    if (on_checkpoint) on_checkpoint(d, net);
  }
  return result;
}

void write_train_log(std::ostream& out, const std::vector<TrainLogRow>& log) {
  std::ostringstream os;
  os << "# wall_seconds";
  for (const auto& r : log) os << ' ' << r.depth << ':' << std::fixed << std::setprecision(3) << r.wall_seconds;
  os << '\n';
  os.unsetf(std::ios::floatfield);
  os << "depth,steps,final_loss,converged\n";
  os << std::setprecision(17);
  for (const auto& r : log) {
    os << r.depth << ',' << r.steps << ',' << r.final_loss << ',' << (r.converged ? 1 : 0) << '\n';
  }
  out << os.str();
}

void NetworkQ::q_values(const Unitary& s, std::span<double> out) const {
  if (out.size() != num_actions()) throw ContractError("NetworkQ: output size mismatch");
  std::vector<double> x = encode_state(s);
  std::vector<double> q = net_.forward(x, false);
  std::copy(q.begin(), q.end(), out.begin());
}

ValueIterationResult tabular_value_iteration(const GateSet& gs, int max_depth, double eps,
                                             double gamma) {
  auto graph = std::make_shared<const StateGraph>(
      enumerate_states(gs, max_depth, eps, kValueIterationGuard));
  const std::size_t n = graph->size();
  const std::size_t na = graph->num_actions;
  std::vector<bool> goal(n);
  for (std::size_t s = 0; s < n; ++s) goal[s] = fnorm_to_identity(graph->states[s]) < eps;

  std::vector<double> table(n * na, kUnknownValue);
  for (std::size_t i = 0; i < n * na; ++i) {
    if (graph->next[i] >= 0) table[i] = 0.0;
  }
  ValueIterationResult res{TabularQ(graph, table), {}, true};
  std::vector<double> fresh = table;
  for (int iter = 0; iter < 100000; ++iter) {
    double sup = 0.0;
    for (std::size_t i = 0; i < n * na; ++i) {
      int t = graph->next[i];
      if (t < 0) continue;
      double v = 0.0;
      if (!goal[t]) {
        double best = kUnknownValue;
        for (std::size_t a = 0; a < na; ++a) best = std::max(best, table[t * na + a]);
        v = -1.0 + gamma * best;
      }
      if (v > table[i]) res.monotone = false;
      sup = std::max(sup, std::abs(v - table[i]));
      fresh[i] = v;
    }
    table.swap(fresh);
    res.sup_changes.push_back(sup);
    if (sup < 1e-12) break;
  }
  res.q = TabularQ(graph, std::move(table));
  return res;
}

namespace {
constexpr char kModelMagic[8] = {'Q', 'C', 'M', 'O', 'D', 'E', 'L', '\0'};
}

void save_model(std::ostream& out, const QNetwork& net, const GateSet& gs) {
  const NetConfig& c = net.config();
  if (c.outputs != static_cast<int>(gs.size())) {
    throw ContractError("save_model: network outputs do not match the gate set");
  }
  out.write(kModelMagic, 8);
  detail::put_u32(out, kModelFormatVersion);
  detail::put_u64(out, gs.ordering_hash());
  detail::put_string(out, gs.name());
  for (int v : {c.input_dim, c.hidden1, c.hidden2, c.blocks, c.block_width, c.outputs}) {
    detail::put_u32(out, static_cast<std::uint32_t>(v));
  }
  detail::put_u32(out, static_cast<std::uint32_t>(c.activation));
  const auto& layers = net.live().layers;
  detail::put_u32(out, static_cast<std::uint32_t>(layers.size()));
  for (const auto& l : layers) {
    detail::put_u32(out, static_cast<std::uint32_t>(l.weight.rows()));
    detail::put_u32(out, static_cast<std::uint32_t>(l.weight.cols()));
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index col = 0; col < l.weight.cols(); ++col) detail::put_f64(out, l.weight(r, col));
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) detail::put_f64(out, l.bias(r));
  }
  if (!out) throw FormatError("failed to write model");
}

void save_model_file(const std::string& path, const QNetwork& net, const GateSet& gs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open model file for writing: " + path);
  save_model(out, net, gs);
}

LoadedModel load_model(std::istream& in, const GateSet* expected) {
  char magic[8];
  if (!in.read(magic, 8) || !std::equal(magic, magic + 8, kModelMagic)) {
    throw FormatError("model file: bad magic bytes");
  }
  std::uint32_t version = detail::get_u32(in, "format version");
  if (version != kModelFormatVersion) {
    throw FormatError("model file: unsupported format version " + std::to_string(version));
  }
  std::uint64_t hash = detail::get_u64(in, "gate-set hash");
  std::string name = detail::get_string(in, "gate-set name");
  if (expected && hash != expected->ordering_hash()) {
    throw FormatError("model file: gate-set hash mismatch (model trained for '" + name +
                      "', expected '" + expected->name() + "')");
  }
  NetConfig c;
  c.input_dim = static_cast<int>(detail::get_u32(in, "net config input_dim"));
  c.hidden1 = static_cast<int>(detail::get_u32(in, "net config hidden1"));
  c.hidden2 = static_cast<int>(detail::get_u32(in, "net config hidden2"));
  c.blocks = static_cast<int>(detail::get_u32(in, "net config blocks"));
  c.block_width = static_cast<int>(detail::get_u32(in, "net config block_width"));
  c.outputs = static_cast<int>(detail::get_u32(in, "net config outputs"));
  std::uint32_t act = detail::get_u32(in, "net config activation");
  if (act != static_cast<std::uint32_t>(Activation::kRelu)) {
    throw FormatError("model file: unknown activation code " + std::to_string(act));
  }
  for (int v : {c.input_dim, c.hidden1, c.hidden2, c.blocks, c.block_width, c.outputs}) {
    if (v < 1 || v > 1'000'000) throw FormatError("model file: implausible net config field");
  }
  QNetwork net = QNetwork::zeros(c);
  std::uint32_t count = detail::get_u32(in, "layer count");
  if (count != net.live().layers.size()) throw FormatError("model file: layer count mismatch");
  for (auto& l : net.live().layers) {
    std::uint32_t rows = detail::get_u32(in, "tensor rows");
    std::uint32_t cols = detail::get_u32(in, "tensor cols");
    if (rows != l.weight.rows() || cols != l.weight.cols()) {
      throw FormatError("model file: tensor shape does not match net config");
    }
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index col = 0; col < l.weight.cols(); ++col) l.weight(r, col) = detail::get_f64(in, "tensor data");
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = detail::get_f64(in, "tensor data");
  }
  net.sync_frozen();
  return LoadedModel{name, hash, std::move(net)};
}

LoadedModel load_model_file(const std::string& path, const GateSet* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open model file: " + path);
  return load_model(in, expected);
}

}  // namespace qcompile
