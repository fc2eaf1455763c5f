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

// Acceptance suite: one PASS/FAIL line per criterion. CSV artifacts go to
// --out (default acceptance_artifacts). Exit status is 0 only if every
// selected criterion passes.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "CLI11.hpp"
#include "qcompile/analysis.hpp"
#include "qcompile/env.hpp"
#include "qcompile/oracle.hpp"
#include "qcompile/parallel.hpp"
#include "qcompile/qnet.hpp"
#include "qcompile/search.hpp"

using namespace qcompile;

namespace {

// Pinned tolerances and sizes.
namespace c1 {
constexpr std::size_t kSamples = 1'000'000;
constexpr std::size_t kPairsPerDim = 20;
constexpr double kSigmas = 3.0;
constexpr double kTraceTol = 1e-12;
}  // namespace c1
namespace c2 {
constexpr double kStep = 1e-5;
constexpr double kRelTol = 1e-4;
constexpr int kNets = 10;
}  // namespace c2
namespace c3 {
constexpr int kDepth = 4;
}
namespace c4 {
constexpr int kDepth = 6;
constexpr std::size_t kTargets = 200;
constexpr std::size_t kBudget = 100'000;
}  // namespace c4
namespace c5 {
constexpr double kDelta = 1e-2;
constexpr int kDStart = 3;
constexpr int kDMax = 8;
constexpr std::size_t kBudget = 10'000;
constexpr std::size_t kTargets = 300;
constexpr int kTargetDepth = 6;
constexpr double kSuccess = 0.95;
constexpr double kLengthSlack = 1.0;
}  // namespace c5
namespace c6 {
constexpr std::size_t kTargets = 100;
constexpr int kTargetDepth = 8;
constexpr double kTemperature = 1.0;
constexpr std::size_t kRolloutSteps = 40;
}  // namespace c6
namespace c7 {
constexpr double kTol = 1e-6;
constexpr double kNoise = 0.01;
constexpr std::size_t kPoints = 20;
constexpr std::size_t kTrials = 100;
constexpr double kBand = 0.05;
constexpr std::size_t kWithin = 95;
}  // namespace c7
namespace c8 {
constexpr std::size_t kTargets = 200;
constexpr int kTargetDepth = 8;
constexpr std::size_t kBudget = 1'000;
}  // namespace c8
namespace c9 {
constexpr int kDMax = 4;
constexpr std::size_t kTargets = 100;
constexpr int kTargetDepth = 3;
constexpr int kOracleDepth = 4;
constexpr double kSuccess = 0.90;
constexpr std::size_t kBudget = kDefaultNodeBudget2q;
}  // namespace c9
constexpr double kEps = 1e-3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

class Artifacts {
 public:
  explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream f(dir_ / name, std::ios::binary);
    f << text;
  }

 private:
  std::filesystem::path dir_;
};

// --- 1: metrics -----------------------------------------------------------

Outcome metrics(const Artifacts& art) {
  std::ostringstream csv;
  csv << "dim,pair,closed_form,mc_mean,mc_se,z\n" << std::setprecision(17);
  struct Row {
    int dim;
    std::size_t pair;
    double closed, mean, se;
  };
  std::vector<Row> rows;
  for (int dim : {2, 4}) {
    for (std::size_t p = 0; p < c1::kPairsPerDim; ++p) rows.push_back({dim, p, 0, 0, 0});
  }
  parallel_for(rows.size(), [&](std::size_t i) {
    Row& r = rows[i];
    std::mt19937_64 rng(1000 * r.dim + r.pair);
    Unitary a = haar_random(r.dim, rng), b = haar_random(r.dim, rng);
    r.closed = avg_fidelity(a, b);
    auto [mean, se] = qtest::haar_fidelity_mc(a, b, c1::kSamples, rng);
    r.mean = mean;
    r.se = se;
  });
  double worst_z = 0.0;
  bool ok = true;
  for (const auto& r : rows) {
    double z = std::abs(r.closed - r.mean) / r.se;
    worst_z = std::max(worst_z, z);
    ok = ok && z <= c1::kSigmas;
    csv << r.dim << ',' << r.pair << ',' << r.closed << ',' << r.mean << ',' << r.se << ',' << z << '\n';
  }
  art.write("c1_fidelity_mc.csv", csv.str());

  double worst_trace = 0.0;
  std::mt19937_64 rng(7);
  for (int dim : {2, 4}) {
    for (int k = 0; k < 500; ++k) {
      Unitary a = haar_random(dim, rng), b = haar_random(dim, rng);
      double d = fnorm_dist(a, b);
      worst_trace = std::max({worst_trace, std::abs(d - qtest::fnorm_trace_form(a, b)),
                              std::abs(d - qtest::fnorm_direct(a, b))});
    }
  }
  ok = ok && worst_trace <= c1::kTraceTol;
  return {ok, "max |closed - MC|/SE = " + fmt(worst_z, 3) + " over " + std::to_string(rows.size()) +
                  " pairs (limit " + fmt(c1::kSigmas) + "); fnorm forms differ by at most " +
                  fmt(worst_trace, 3)};
}

// --- 2: gradients ---------------------------------------------------------

Outcome gradients(const Artifacts& art) {
  GateSet ct = build_gateset("clifford_t");
  GateSet two = build_gateset("two_qubit_hrc");
  std::ostringstream csv;
  csv << "net,input,hidden1,hidden2,blocks,block_width,projection,params,worst_rel,worst_layer\n";
  double worst = 0.0;
  bool ok = true;
  std::size_t projected = 0;
  for (int i = 0; i < c2::kNets; ++i) {
    const GateSet& gs = i < 8 ? ct : two;
    std::mt19937_64 rng(300 + i);
    std::uniform_int_distribution<int> width(3, 7), blocks(1, 3);
    NetConfig cfg;
    cfg.input_dim = 2 * gs.dim() * gs.dim();
    cfg.outputs = static_cast<int>(gs.size());
    cfg.hidden1 = width(rng);
    cfg.hidden2 = width(rng);
    cfg.blocks = blocks(rng);
    // Alternate between blocks that match hidden2 and ones that need a projection.
    cfg.block_width = i % 2 == 0 ? cfg.hidden2 : cfg.hidden2 + 1;
    projected += cfg.needs_projection();
    QNetwork net = qtest::random_tiny_net(cfg, 500 + i);
    auto batch = qtest::sample_batch(gs, 5, 16, 900 + i);
    qtest::GradCheck gc = qtest::finite_difference_check(net, batch, 1.0, c2::kStep);
    worst = std::max(worst, gc.worst_rel);
    ok = ok && gc.worst_rel < c2::kRelTol && gc.checked == net.live().count();
    csv << i << ',' << cfg.input_dim << ',' << cfg.hidden1 << ',' << cfg.hidden2 << ',' << cfg.blocks
        << ',' << cfg.block_width << ',' << cfg.needs_projection() << ',' << gc.checked << ','
        << std::setprecision(6) << gc.worst_rel << ',' << gc.worst_layer << '\n';
  }
  art.write("c2_gradients.csv", csv.str());
  return {ok, std::to_string(c2::kNets) + " nets (" + std::to_string(projected) +
                  " with projection), every parameter checked, worst relative error " + fmt(worst, 3) +
                  " (limit " + fmt(c2::kRelTol) + ")"};
}

// --- 3: value iteration vs BFS ---------------------------------------------

Outcome bellman(const Artifacts& art) {
  GateSet ct = build_gateset("clifford_t");
  ValueIterationResult vi = tabular_value_iteration(ct, c3::kDepth, kEps);
  const StateGraph& g = vi.q.graph();
  std::size_t pairs = 0, equal = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    for (std::size_t a = 0; a < g.num_actions; ++a) {
      int t = g.successor(static_cast<int>(s), a);
      if (t < 0) continue;
      ++pairs;
      // Independent ground truth: shortest product reproducing the successor.
      auto bfs = bfs_shortest(g.states[t], ct, kEps, c3::kDepth);
      if (bfs && -vi.q.q(static_cast<int>(s), a) == static_cast<double>(bfs->length)) ++equal;
    }
  }
  std::ostringstream csv;
  csv << "states,pairs,equal,sweeps,monotone\n"
      << g.size() << ',' << pairs << ',' << equal << ',' << vi.sup_changes.size() << ',' << vi.monotone << '\n';
  art.write("c3_bellman.csv", csv.str());
  return {pairs > 0 && equal == pairs,
          std::to_string(equal) + "/" + std::to_string(pairs) + " (s,a) pairs over " +
              std::to_string(g.size()) + " states; converged after " +
              std::to_string(vi.sup_changes.size()) + " sweeps"};
}

// --- 4: AQ* with the exact table ------------------------------------------

struct C4 {
  Outcome outcome;
  std::string csv;
};

C4 aq_exact() {
  GateSet ct = build_gateset("clifford_t");
  auto graph = std::make_shared<const StateGraph>(enumerate_states(ct, c4::kDepth, kEps));
  TabularQ q = tabular_q_adapter(graph);
  auto targets = sample_targets(ct, TargetMode::kProduct, c4::kDepth, c4::kTargets, 4004);
  std::vector<std::size_t> opt(targets.size()), got(targets.size()), nodes(targets.size());
  std::vector<int> ok(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    auto b = bfs_shortest(targets[i], ct, kEps, c4::kDepth);
    SearchResult r = aq_search(targets[i], ct, q, kEps, c4::kBudget);
    opt[i] = b ? b->length : 999;
    got[i] = r.actions.size();
    nodes[i] = r.nodes_expanded;
    ok[i] = b && r.success() && got[i] == opt[i];
  });
  std::ostringstream csv;
  csv << "target,bfs_length,aq_length,nodes,optimal\n";
  std::size_t hits = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    csv << i << ',' << opt[i] << ',' << got[i] << ',' << nodes[i] << ',' << ok[i] << '\n';
    hits += ok[i];
  }
  SearchResult hss = aq_search(builtin_target("hss", ct), ct, q, kEps, c4::kBudget);
  csv << "hss," << 3 << ',' << hss.actions.size() << ',' << hss.nodes_expanded << ','
      << (hss.success() && hss.actions.size() == 3) << '\n';
  bool pass = hits == targets.size() && hss.success() && hss.actions.size() == 3;
  return {{pass, std::to_string(hits) + "/" + std::to_string(targets.size()) +
                     " targets BFS-optimal; HSS -> " + format_result(hss)},
          csv.str()};
}

// --- 5: toy training -------------------------------------------------------

TrainConfig desk_train() {
  TrainConfig t;
  t.delta = c5::kDelta;
  t.d_start = c5::kDStart;
  t.d_max = c5::kDMax;
  t.batch = 512;
  t.transitions_per_depth = 50'000;
  t.target_sync_interval = 500;
  t.max_steps_per_depth = 4000;
  t.seed = 1;
  return t;
}

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out << line << '\n';
  }
  return out.str();
}

struct C5 {
  Outcome outcome;
  std::string log_csv;   // without the wall-clock header
  std::string eval_csv;
  std::optional<QNetwork> net;
  std::optional<QNetwork> depth3;
};

C5 toy_training() {
  GateSet ct = build_gateset("clifford_t");
  C5 res;
  TrainResult tr = train_curriculum(
      ct, NetConfig::desk(ct), desk_train(),
      [&](int d, const QNetwork& n) {
        if (d == c5::kDStart) res.depth3 = n;
      },
      [](const std::string& line) { std::cerr << "  [train] " << line << '\n'; });
  std::ostringstream log;
  write_train_log(log, tr.log);
  res.log_csv = strip_comments(log.str());
  bool converged = true;
  for (const auto& row : tr.log) converged = converged && row.converged && row.final_loss < c5::kDelta;
  converged = converged && tr.log.size() == static_cast<std::size_t>(c5::kDMax - c5::kDStart + 1);

  NetworkQ q(tr.net);
  auto targets = sample_targets(ct, TargetMode::kProduct, c5::kTargetDepth, c5::kTargets, 5005);
  std::vector<SearchResult> rs(targets.size());
  std::vector<std::size_t> opt(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    rs[i] = aq_search(targets[i], ct, q, kEps, c5::kBudget);
    opt[i] = bfs_shortest(targets[i], ct, kEps, c5::kTargetDepth)->length;
  });
  std::ostringstream csv;
  csv << "target,success,length,bfs_length,distance,nodes\n";
  std::size_t ok = 0;
  double len = 0.0, best = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    csv << i << ',' << rs[i].success() << ',' << rs[i].actions.size() << ',' << opt[i] << ','
        << std::setprecision(17) << rs[i].distance << ',' << rs[i].nodes_expanded << '\n';
    if (!rs[i].success()) continue;
    ++ok;
    len += static_cast<double>(rs[i].actions.size());
    best += static_cast<double>(opt[i]);
  }
  res.eval_csv = csv.str();
  const double frac = static_cast<double>(ok) / static_cast<double>(targets.size());
  const double mean_len = ok ? len / static_cast<double>(ok) : NAN;
  const double mean_opt = ok ? best / static_cast<double>(ok) : NAN;
  std::ostringstream steps;
  for (const auto& row : tr.log) steps << (row.depth == c5::kDStart ? "" : ",") << row.steps;
  res.outcome = {converged && frac >= c5::kSuccess && mean_len <= mean_opt + c5::kLengthSlack,
                 std::string(converged ? "loss < delta at every depth" : "loss did NOT reach delta at some depth") +
                     " (steps " + steps.str() + "); success " + std::to_string(ok) + "/" +
                     std::to_string(targets.size()) + ", mean length " + fmt(mean_len, 4) +
                     " vs optimal " + fmt(mean_opt, 4)};
  res.net = std::move(tr.net);
  return res;
}

// --- 6: policy ordering ------------------------------------------------------

struct C6 {
  Outcome outcome;
  std::string csv;
};

C6 policies(const QNetwork& net) {
  GateSet ct = build_gateset("clifford_t");
  NetworkQ q(net);
  auto targets = sample_targets(ct, TargetMode::kProduct, c6::kTargetDepth, c6::kTargets, 6006);
  PolicyBudgets pb;
  pb.aq_nodes = c5::kBudget;
  pb.rollout_steps = c6::kRolloutSteps;
  pb.temperature_kt = c6::kTemperature;
  pb.boltzmann_sign = BoltzmannSign::kMaximize;
  pb.seed = 66;
  PolicyComparison cmp = evaluate_policies(targets, ct, q, kEps, pb);
  std::ostringstream csv;
  write_policy_csv(csv, cmp);
  const auto& aq = cmp.rows[0];
  const auto& greedy = cmp.rows[1];
  const auto& boltz = cmp.rows[2];
  bool pass = aq.mean_fidelity >= boltz.mean_fidelity && aq.var_fidelity <= greedy.var_fidelity &&
              aq.var_fidelity <= boltz.var_fidelity;
  std::ostringstream d;
  d << std::setprecision(6) << "mean fidelity aq*=" << aq.mean_fidelity << " greedy=" << greedy.mean_fidelity
    << " boltzmann=" << boltz.mean_fidelity << "; variance aq*=" << aq.var_fidelity
    << " greedy=" << greedy.var_fidelity << " boltzmann=" << boltz.var_fidelity;
  return {{pass, d.str()}, csv.str()};
}

// --- 7: scaling fit ----------------------------------------------------------

std::vector<ScalingPoint> synthetic(double a, double c, std::size_t n, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ScalingPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    double eps = std::pow(10.0, -1.0 - 9.0 * static_cast<double>(i) / static_cast<double>(n - 1));
    pts.push_back({eps, a * std::pow(std::log(1.0 / eps), c) * (1.0 + noise * g(rng))});
  }
  return pts;
}

Outcome scaling(const Artifacts& art) {
  std::ostringstream csv;
  csv << "case,a_true,c_true,a_fit,c_fit,r_squared\n" << std::setprecision(17);
  bool ok = true;
  double worst = 0.0;
  for (auto [a, c] : {std::pair{2.0, 1.5}, std::pair{0.89, 1.077}}) {
    ScalingFit f = fit_scaling(synthetic(a, c, 10, 0.0, 1));
    double err = std::max(std::abs(f.a - a), std::abs(f.c - c));
    worst = std::max(worst, err);
    ok = ok && err <= c7::kTol;
    csv << "noiseless," << a << ',' << c << ',' << f.a << ',' << f.c << ',' << f.r_squared << '\n';
  }
  std::size_t within = 0;
  for (std::size_t t = 0; t < c7::kTrials; ++t) {
    ScalingFit f = fit_scaling(synthetic(2.0, 1.5, c7::kPoints, c7::kNoise, 7000 + t));
    within += std::abs(f.c - 1.5) <= c7::kBand;
    csv << "noisy" << t << ",2,1.5," << f.a << ',' << f.c << ',' << f.r_squared << '\n';
  }
  ok = ok && within >= c7::kWithin;
  art.write("c7_scaling.csv", csv.str());
  return {ok, "noiseless max error " + fmt(worst, 3) + "; 1% noise: c within +-" + fmt(c7::kBand) +
                  " in " + std::to_string(within) + "/" + std::to_string(c7::kTrials) + " trials"};
}

// --- 8: curriculum monotonicity ----------------------------------------------

Outcome monotonicity(const C5& run, const Artifacts& art) {
  GateSet ct = build_gateset("clifford_t");
  auto targets = sample_targets(ct, TargetMode::kProduct, c8::kTargetDepth, c8::kTargets, 8008);
  NetworkQ early(*run.depth3), late(*run.net);
  EvalRow e = batch_evaluate(early, ct, targets, {kEps}, c8::kBudget)[0];
  EvalRow l = batch_evaluate(late, ct, targets, {kEps}, c8::kBudget)[0];
  std::ostringstream csv;
  csv << "checkpoint,";
  std::ostringstream body;
  write_runs_csv(body, {e, l});
  std::string text = body.str();
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  csv << line << '\n';
  std::getline(lines, line);
  csv << "depth_" << c5::kDStart << ',' << line << '\n';
  std::getline(lines, line);
  csv << "depth_" << c5::kDMax << ',' << line << '\n';
  art.write("c8_checkpoints.csv", csv.str());
  return {l.mean_m2_all > e.mean_m2_all,
          "mean M2 depth-" + std::to_string(c5::kDStart) + "=" + fmt(e.mean_m2_all, 8) + " (success " +
              std::to_string(e.successes) + "), depth-" + std::to_string(c5::kDMax) + "=" +
              fmt(l.mean_m2_all, 8) + " (success " + std::to_string(l.successes) + ")"};
}

// --- 9: two qubits -----------------------------------------------------------

Outcome two_qubit(const Artifacts& art) {
  GateSet gs = build_gateset("two_qubit_hrc");
  TrainConfig t;
  t.d_start = 2;
  t.d_max = c9::kDMax;
  t.batch = 512;
  t.transitions_per_depth = 50'000;
  t.target_sync_interval = 500;
  t.max_steps_per_depth = 4000;
  t.seed = 2;
  TrainResult tr = train_curriculum(gs, NetConfig::desk(gs), t, {},
                                    [](const std::string& line) { std::cerr << "  [train 2q] " << line << '\n'; });
  NetworkQ q(tr.net);
  auto targets = sample_targets(gs, TargetMode::kProduct, c9::kTargetDepth, c9::kTargets, 9009);
  std::vector<SearchResult> rs(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) { rs[i] = aq_search(targets[i], gs, q, kEps, c9::kBudget); });
  std::ostringstream csv;
  csv << "target,success,length,bfs_length,nodes\n";
  std::size_t ok = 0, within = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    std::optional<BfsResult> b;
    if (rs[i].success()) {
      ++ok;
      b = bfs_shortest(targets[i], gs, kEps, c9::kOracleDepth);
      within += b && rs[i].actions.size() <= b->length + 1;
    }
    csv << i << ',' << rs[i].success() << ',' << rs[i].actions.size() << ','
        << (b ? static_cast<long>(b->length) : -1L) << ',' << rs[i].nodes_expanded << '\n';
  }
  art.write("c9_two_qubit.csv", csv.str());
  std::ostringstream log;
  write_train_log(log, tr.log);
  art.write("c9_train_log.csv", log.str());
  const double frac = static_cast<double>(ok) / static_cast<double>(targets.size());
  return {frac >= c9::kSuccess && within == ok,
          "success " + std::to_string(ok) + "/" + std::to_string(targets.size()) + ", " + std::to_string(within) +
              " of them within +1 of BFS"};
}

void report(int id, const std::string& name, const Outcome& o, double seconds, bool& all) {
  all = all && o.pass;
  std::cout << "criterion " << std::setw(2) << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": "
            << o.detail << "  [" << std::fixed << std::setprecision(1) << seconds << "s]" << std::endl;
  std::cout.unsetf(std::ios::floatfield);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcompile acceptance suite"};
  std::string out = "acceptance_artifacts";
  std::vector<int> only;
  std::size_t threads = 0;
  app.add_option("--out", out, "Directory for CSV artifacts");
  app.add_option("--only", only, "Run only these criteria (1-10)")->delimiter(',');
  app.add_option("--threads", threads, "Cap on worker threads");
  CLI11_PARSE(app, argc, argv);
  if (threads) set_max_threads(threads);
  std::set<int> want(only.begin(), only.end());
  auto selected = [&](int id) { return want.empty() || want.count(id); };

  Artifacts art(out);
  bool all = true;
  auto timed = [](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = fn();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::pair{std::move(r), s};
  };

  if (selected(1)) {
    auto [o, s] = timed([&] { return metrics(art); });
    report(1, "metric correctness", o, s, all);
  }
  if (selected(2)) {
    auto [o, s] = timed([&] { return gradients(art); });
    report(2, "gradient suite", o, s, all);
  }
  if (selected(3)) {
    auto [o, s] = timed([&] { return bellman(art); });
    report(3, "Bellman/oracle equivalence", o, s, all);
  }
  std::optional<C4> r4;
  if (selected(4) || selected(10)) {
    auto [o, s] = timed([&] { return aq_exact(); });
    art.write("c4_aq_tabular.csv", o.csv);
    r4 = std::move(o);
    if (selected(4)) report(4, "AQ* optimality with exact oracle", r4->outcome, s, all);
  }
  std::optional<C5> r5;
  if (selected(5) || selected(6) || selected(8) || selected(10)) {
    auto [o, s] = timed([&] { return toy_training(); });
    art.write("c5_train_log.csv", o.log_csv);
    art.write("c5_eval.csv", o.eval_csv);
    r5 = std::move(o);
    if (selected(5)) report(5, "end-to-end toy training", r5->outcome, s, all);
  }
  std::optional<C6> r6;
  if (selected(6) || selected(10)) {
    auto [o, s] = timed([&] { return policies(*r5->net); });
    art.write("c6_policies.csv", o.csv);
    r6 = std::move(o);
    if (selected(6)) report(6, "policy ordering", r6->outcome, s, all);
  }
  if (selected(7)) {
    auto [o, s] = timed([&] { return scaling(art); });
    report(7, "scaling-fit round trip", o, s, all);
  }
  if (selected(8)) {
    auto [o, s] = timed([&] { return monotonicity(*r5, art); });
    report(8, "curriculum monotonicity", o, s, all);
  }
  if (selected(9)) {
    auto [o, s] = timed([&] { return two_qubit(art); });
    report(9, "two-qubit smoke test", o, s, all);
  }
  if (selected(10)) {
    auto [o, s] = timed([&] {
      C4 b4 = aq_exact();
      C5 b5 = toy_training();
      C6 b6 = policies(*b5.net);
      std::vector<std::string> differ;
      if (b4.csv != r4->csv) differ.push_back("c4_aq_tabular.csv");
      if (b5.log_csv != r5->log_csv) differ.push_back("c5_train_log.csv");
      if (b5.eval_csv != r5->eval_csv) differ.push_back("c5_eval.csv");
      if (b6.csv != r6->csv) differ.push_back("c6_policies.csv");
      std::string d = differ.empty() ? "4 CSV files identical on rerun" : "differ:";
      for (const auto& f : differ) d += " " + f;
      return Outcome{differ.empty(), d};
    });
    report(10, "determinism", o, s, all);
  }
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return all ? 0 : 1;
}
