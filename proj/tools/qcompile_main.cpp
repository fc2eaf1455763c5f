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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "qcompile/analysis.hpp"
#include "qcompile/config.hpp"
#include "qcompile/env.hpp"
#include "qcompile/errors.hpp"
#include "qcompile/gateset.hpp"
#include "qcompile/oracle.hpp"
#include "qcompile/parallel.hpp"
#include "qcompile/qnet.hpp"
#include "qcompile/search.hpp"

namespace {

using namespace qcompile;

constexpr int kExitBudgetExhausted = 2;

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* v = std::getenv("QCOMPILE_SEED");
  return v ? std::stoull(v) : fallback;
}

void apply_thread_cap(std::size_t flag) {
  if (flag) {
    set_max_threads(flag);
  } else if (const char* v = std::getenv("QCOMPILE_THREADS")) {
    set_max_threads(std::stoull(v));
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::ofstream open_out(const std::string& path) {
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

Unitary load_target(const std::string& file, const std::string& builtin, const GateSet& gs) {
  if (!builtin.empty()) return builtin_target(builtin, gs);
  std::ifstream f(file);
  if (!f) throw FormatError("cannot read target file " + file);
  return parse_unitary(f);
}

// Holds whichever value function a command runs against: a trained model,
// or the exact tabular Q over an enumerated graph.
struct ValueSource {
  std::unique_ptr<GateSet> gs;
  std::unique_ptr<LoadedModel> model;
  std::unique_ptr<NetworkQ> net_q;
  std::unique_ptr<TabularQ> table_q;

  const ActionValueFunction& q() const {
    if (net_q) return *net_q;
    return *table_q;
  }
};

ValueSource make_source(const std::string& model_path, const std::string& gateset, int tabular_depth,
                        double eps) {
  ValueSource src;
  if (!model_path.empty()) {
    std::ifstream f(model_path, std::ios::binary);
    if (!f) throw FormatError("cannot read model file " + model_path);
    // An explicit --gateset must agree with the one the model was trained on.
    std::unique_ptr<GateSet> expected;
    if (!gateset.empty()) expected = std::make_unique<GateSet>(build_gateset(gateset));
    LoadedModel probe = load_model(f, expected.get());
    src.gs = std::make_unique<GateSet>(build_gateset(probe.gateset_name));
    if (probe.gateset_hash != src.gs->ordering_hash()) {
      throw FormatError("gate-set hash mismatch: model was trained on a different action ordering of " +
                        probe.gateset_name);
    }
    src.model = std::make_unique<LoadedModel>(std::move(probe));
    src.net_q = std::make_unique<NetworkQ>(src.model->net);
    return src;
  }
  if (gateset.empty() || tabular_depth < 0) {
    throw ConfigError("either --model or both --gateset and --tabular-depth are required");
  }
  src.gs = std::make_unique<GateSet>(build_gateset(gateset));
  auto graph = std::make_shared<const StateGraph>(enumerate_states(*src.gs, tabular_depth, eps));
  src.table_q = std::make_unique<TabularQ>(tabular_q_adapter(graph));
  return src;
}

struct SourceFlags {
  std::string model;
  std::string gateset;
  int tabular_depth = -1;

  void add(CLI::App* cmd) {
    cmd->add_option("--model", model, "Model file written by `train`");
    cmd->add_option("--gateset", gateset, "Gate set for --tabular-depth");
    cmd->add_option("--tabular-depth", tabular_depth,
                    "Use the exact tabular Q over states up to this depth instead of a model");
  }
};

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed, bool dump_only) {
  RunConfig cfg = load_run_config(config_path);
  if (seed) cfg.train.seed = *seed;
  if (dump_only) {
    dump_run_config(std::cout, cfg);
    return 0;
  }
  GateSet gs = build_gateset(cfg.gateset);
  CheckpointFn checkpoint;
  if (!cfg.checkpoint_dir.empty()) {
    std::filesystem::create_directories(cfg.checkpoint_dir);
    checkpoint = [&](int depth, const QNetwork& net) {
      auto path = std::filesystem::path(cfg.checkpoint_dir) / ("depth_" + std::to_string(depth) + ".qcm");
      save_model_file(path.string(), net, gs);
    };
  }
  TrainResult res = train_curriculum(gs, cfg.net, cfg.train, checkpoint,
                                     [](const std::string& line) { std::cout << line << std::endl; });
  save_model_file(cfg.model_path, res.net, gs);
  auto log = open_out(cfg.log_path);
  write_train_log(log, res.log);
  std::cout << "model written to " << cfg.model_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcompile: gate-sequence compiler with a deep Q-network and AQ* search"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (also QCOMPILE_THREADS)");
  std::uint64_t seed = 1;
  bool seed_given = false;
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { seed = s, seed_given = true; },
      "Seed for all randomness (also QCOMPILE_SEED)");

  // train
  auto* train = app.add_subcommand("train", "Train a network with the depth curriculum");
  std::string config_path;
  bool dump_config = false;
  train->add_option("config", config_path, "Run configuration file")->required();
  train->add_flag("--dump-config", dump_config, "Print the fully resolved config and exit");

  // compile
  auto* compile = app.add_subcommand("compile", "Compile one target with a trained model");
  SourceFlags compile_src;
  compile_src.add(compile);
  std::string target_file, target_builtin, policy = "aq";
  double eps = kDefaultEps, kt = 1.0;
  std::size_t budget = 0, max_steps = 40;
  bool maximize = false;
  compile->add_option("--target", target_file, "Target unitary file");
  compile->add_option("--target-builtin", target_builtin,
                      "identity | h | hss | xz-rot:<alpha> | seq:<label,label,...>");
  compile->add_option("--eps", eps, "Goal tolerance on the F-norm distance");
  compile->add_option("--budget", budget, "AQ* node budget (default 1e5, 3e5 for two qubits)");
  compile->add_option("--policy", policy, "aq | greedy | boltzmann")
      ->check(CLI::IsMember({"aq", "greedy", "boltzmann"}));
  compile->add_option("--max-steps", max_steps, "Rollout length for greedy / boltzmann");
  compile->add_option("--kt", kt, "Boltzmann temperature kT");
  compile->add_flag("--maximize", maximize, "Boltzmann: use exp(+Q/kT) instead of the printed exp(-Q/kT)");

  // eval
  auto* eval = app.add_subcommand("eval", "Batch-evaluate AQ* over sampled targets");
  SourceFlags eval_src;
  eval_src.add(eval);
  std::size_t n_targets = 100, depth = 6;
  std::string mode = "product", eps_list = "1e-1,1e-2,1e-3", out_dir = "report";
  std::size_t eval_budget = 10'000;
  bool with_policies = false;
  eval->add_option("--targets", n_targets, "Number of targets");
  eval->add_option("--depth", depth, "Product-target depth");
  eval->add_option("--mode", mode, "product | haar")->check(CLI::IsMember({"product", "haar"}));
  eval->add_option("--eps-list", eps_list, "Comma-separated tolerances");
  eval->add_option("--budget", eval_budget, "AQ* node budget");
  eval->add_option("--out", out_dir, "Report directory");
  eval->add_flag("--compare-policies", with_policies, "Also write policies.csv (AQ*, greedy, Boltzmann)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit L = a * log^c(1/eps)");
  std::string points_file, runs_file, axis = "tolerance", synthetic;
  fit->add_option("--points", points_file, "CSV of epsilon,mean_length");
  fit->add_option("--runs", runs_file, "runs.csv written by `eval`");
  fit->add_option("--axis", axis, "tolerance | fidelity | fnorm | spectral (with --runs)");
  fit->add_option("--synthetic", synthetic, "a,c: fit noiseless points at eps = 1e-2 .. 1e-6");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact shortest sequence by breadth-first search");
  std::string oracle_gs = "clifford_t", oracle_file, oracle_builtin;
  int oracle_depth = 7;
  double oracle_eps = kDefaultEps;
  bool enumerate = false;
  oracle->add_option("--gateset", oracle_gs, "Gate set");
  oracle->add_option("--target", oracle_file, "Target unitary file");
  oracle->add_option("--target-builtin", oracle_builtin, "As for compile");
  oracle->add_option("--max-depth", oracle_depth, "Deepest layer searched");
  oracle->add_option("--eps", oracle_eps, "Goal tolerance");
  oracle->add_flag("--enumerate", enumerate, "Print state counts per distance instead");

  // compare-policies
  auto* cmp = app.add_subcommand("compare-policies", "AQ* vs greedy vs Boltzmann on sampled targets");
  SourceFlags cmp_src;
  cmp_src.add(cmp);
  std::size_t cmp_targets = 100, cmp_depth = 8;
  std::string cmp_out;
  PolicyBudgets budgets;
  bool printed_sign = false;
  double cmp_eps = kDefaultEps;
  cmp->add_option("--targets", cmp_targets, "Number of product targets");
  cmp->add_option("--depth", cmp_depth, "Product-target depth");
  cmp->add_option("--budget", budgets.aq_nodes, "AQ* node budget");
  cmp->add_option("--max-steps", budgets.rollout_steps, "Rollout length");
  cmp->add_option("--kt", budgets.temperature_kt, "Boltzmann temperature kT");
  cmp->add_option("--eps", cmp_eps, "Goal tolerance");
  cmp->add_flag("--printed-sign", printed_sign, "Boltzmann with exp(-Q/kT) instead of exp(+Q/kT)");
  cmp->add_option("--out", cmp_out, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  apply_thread_cap(threads);
  if (!seed_given) seed = env_seed(seed);

  try {
    if (*train) return cmd_train(config_path, seed_given || std::getenv("QCOMPILE_SEED")
                                                   ? std::optional<std::uint64_t>(seed)
                                                   : std::nullopt,
                                 dump_config);

    if (*compile) {
      if (target_file.empty() == target_builtin.empty()) {
        throw ConfigError("give exactly one of --target or --target-builtin");
      }
      ValueSource src = make_source(compile_src.model, compile_src.gateset, compile_src.tabular_depth, eps);
      Unitary target = load_target(target_file, target_builtin, *src.gs);
      if (!budget) budget = src.gs->qubits() == 2 ? kDefaultNodeBudget2q : kDefaultNodeBudget1q;
      SearchResult r;
      if (policy == "aq") {
        r = aq_search(target, *src.gs, src.q(), eps, budget);
      } else if (policy == "greedy") {
        r = greedy_rollout(target, *src.gs, src.q(), eps, max_steps);
      } else {
        r = boltzmann_rollout(target, *src.gs, src.q(), eps, max_steps, kt, seed,
                              maximize ? BoltzmannSign::kMaximize : BoltzmannSign::kAsPrinted);
      }
      std::cout << format_result(r) << "\n";
      return r.success() ? 0 : kExitBudgetExhausted;
    }

    if (*eval) {
      ValueSource src = make_source(eval_src.model, eval_src.gateset, eval_src.tabular_depth, kDefaultEps);
      auto targets = sample_targets(*src.gs, parse_target_mode(mode), depth, n_targets, seed);
      auto rows = batch_evaluate(src.q(), *src.gs, targets, parse_list(eps_list), eval_budget);
      std::vector<NamedFit> fits;
      for (FitAxis a : {FitAxis::kTolerance, FitAxis::kFidelity, FitAxis::kFnorm, FitAxis::kSpectral}) {
        auto pts = points_from_runs(rows, a);
        try {
          fits.push_back({a, fit_scaling(pts)});
        } catch (const ContractError&) {
          // Too few usable points on this axis (e.g. exact compilations).
        }
      }
      emit_report(rows, fits, out_dir);
      if (with_policies) {
        PolicyBudgets pb;
        pb.aq_nodes = eval_budget;
        pb.seed = seed;
        auto f = open_out((std::filesystem::path(out_dir) / "policies.csv").string());
        write_policy_csv(f, evaluate_policies(targets, *src.gs, src.q(), kDefaultEps, pb));
      }
      write_runs_csv(std::cout, rows);
      return 0;
    }

    if (*fit) {
      std::vector<ScalingPoint> pts;
      if (!synthetic.empty()) {
        auto ac = parse_list(synthetic);
        if (ac.size() != 2) throw ConfigError("--synthetic expects a,c");
        for (double e : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
          pts.push_back({e, ac[0] * std::pow(std::log(1.0 / e), ac[1])});
        }
      } else if (!runs_file.empty()) {
        std::ifstream f(runs_file);
        if (!f) throw FormatError("cannot read " + runs_file);
        pts = points_from_runs(read_runs_csv(f), parse_fit_axis(axis));
      } else if (!points_file.empty()) {
        std::ifstream f(points_file);
        if (!f) throw FormatError("cannot read " + points_file);
        pts = read_points_csv(f);
      } else {
        throw ConfigError("give one of --points, --runs or --synthetic");
      }
      ScalingFit sf = fit_scaling(pts);
      std::cout << std::setprecision(10) << "a=" << sf.a << " c=" << sf.c << " r2=" << sf.r_squared << "\n";
      return 0;
    }

    if (*oracle) {
      GateSet gs = build_gateset(oracle_gs);
      if (enumerate) {
        StateGraph g = enumerate_states(gs, oracle_depth, oracle_eps);
        std::vector<std::size_t> per(static_cast<std::size_t>(oracle_depth) + 1, 0);
        for (int d : g.dist) ++per[static_cast<std::size_t>(d)];
        std::cout << "states=" << g.size() << "\n";
        for (std::size_t d = 0; d < per.size(); ++d) std::cout << "dist " << d << ": " << per[d] << "\n";
        return 0;
      }
      if (oracle_file.empty() == oracle_builtin.empty()) {
        throw ConfigError("give exactly one of --target or --target-builtin");
      }
      Unitary target = load_target(oracle_file, oracle_builtin, gs);
      auto r = bfs_shortest(target, gs, oracle_eps, oracle_depth);
      if (!r) {
        std::cout << "none within depth " << oracle_depth << "\n";
        return kExitBudgetExhausted;
      }
      std::cout << r->length;
      for (const auto& l : r->labels) std::cout << ' ' << l;
      std::cout << "\n";
      return 0;
    }

    if (*cmp) {
      ValueSource src = make_source(cmp_src.model, cmp_src.gateset, cmp_src.tabular_depth, cmp_eps);
      auto targets = sample_targets(*src.gs, TargetMode::kProduct, cmp_depth, cmp_targets, seed);
      budgets.seed = seed;
      budgets.boltzmann_sign = printed_sign ? BoltzmannSign::kAsPrinted : BoltzmannSign::kMaximize;
      PolicyComparison pc = evaluate_policies(targets, *src.gs, src.q(), cmp_eps, budgets);
      if (cmp_out.empty()) {
        write_policy_csv(std::cout, pc);
      } else {
        auto f = open_out(cmp_out);
        write_policy_csv(f, pc);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
