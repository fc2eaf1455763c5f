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

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "qcompile/analysis.hpp"
#include "qcompile/env.hpp"
#include "qcompile/errors.hpp"
#include "qcompile/gateset.hpp"
#include "qcompile/linalg.hpp"
#include "qcompile/oracle.hpp"
#include "qcompile/qnet.hpp"
#include "qcompile/search.hpp"

namespace py = pybind11;
using namespace qcompile;

namespace {

using Rows = std::vector<std::vector<Complex>>;

Unitary from_rows(const Rows& rows) {
  const int dim = static_cast<int>(rows.size());
  std::vector<Complex> flat;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != dim) throw ContractError("unitary rows must form a square matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Unitary::from_entries(dim, flat);
}

Rows to_rows(const Unitary& u) {
  Rows rows(u.dim(), std::vector<Complex>(u.dim()));
  for (int i = 0; i < u.dim(); ++i) {
    for (int j = 0; j < u.dim(); ++j) rows[i][j] = u(i, j);
  }
  return rows;
}

// A trained network owned by Python (NetworkQ only borrows one).
class Model : public ActionValueFunction {
 public:
  Model(std::string gateset, QNetwork net) : gateset_(std::move(gateset)), net_(std::move(net)) {}
  std::size_t num_actions() const override { return static_cast<std::size_t>(net_.config().outputs); }
  void q_values(const Unitary& s, std::span<double> out) const override {
    NetworkQ(net_).q_values(s, out);
  }
  using ActionValueFunction::q_values;
  const std::string& gateset() const { return gateset_; }
  const QNetwork& net() const { return net_; }

 private:
  std::string gateset_;
  QNetwork net_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "qcompile core: unitaries, gate sets, the compiling MDP, Q-networks and AQ* search";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);

  py::class_<Unitary>(m, "Unitary")
      .def(py::init(&from_rows), py::arg("rows"))
      .def_static("identity", &Unitary::identity, py::arg("dim"))
      .def_property_readonly("dim", &Unitary::dim)
      .def("rows", &to_rows)
      .def("dagger", [](const Unitary& u) { return dagger(u); })
      .def("__matmul__", [](const Unitary& a, const Unitary& b) { return matmul(a, b); })
      .def("__getitem__", [](const Unitary& u, std::pair<int, int> ij) { return u(ij.first, ij.second); })
      .def("__repr__", [](const Unitary& u) { return "Unitary(\n" + format_unitary(u) + ")"; });

  m.def("fnorm_dist", [](const Unitary& a, const Unitary& b) { return fnorm_dist(a, b); });
  m.def("avg_fidelity", &avg_fidelity);
  m.def("spectral_dist", &spectral_dist);
  m.def("encode_state", &encode_state);
  m.def("xz_rotation", &xz_rotation, py::arg("alpha"));
  m.def("parse_unitary", &parse_unitary_string, py::arg("text"));
  m.def("format_unitary", &format_unitary);
  m.def("haar_random", [](int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return haar_random(dim, rng);
  });

  py::class_<GateSet>(m, "GateSet")
      .def_property_readonly("name", &GateSet::name)
      .def_property_readonly("qubits", &GateSet::qubits)
      .def_property_readonly("dim", &GateSet::dim)
      .def_property_readonly("inverse_closed", &GateSet::inverse_closed)
      .def_property_readonly("labels",
                             [](const GateSet& gs) {
                               std::vector<std::string> out;
                               for (std::size_t i = 0; i < gs.size(); ++i) out.push_back(gs.label(i));
                               return out;
                             })
      .def("__len__", &GateSet::size)
      .def("matrix", &GateSet::matrix, py::arg("index"))
      .def("inverse_of", &GateSet::inverse_of, py::arg("index"))
      .def("find", &GateSet::find, py::arg("label"))
      .def("product", &GateSet::product, py::arg("actions"));
  m.def("build_gateset", [](const std::string& name) { return build_gateset(name); }, py::arg("name"));
  m.def("gateset_names", &gateset_names);
  m.def("builtin_target", &builtin_target, py::arg("spec"), py::arg("gateset"));

  py::class_<Transition>(m, "Transition")
      .def_readonly("state", &Transition::state)
      .def_readonly("action", &Transition::action)
      .def_readonly("reward", &Transition::reward)
      .def_readonly("next_state", &Transition::next_state)
      .def_readonly("done", &Transition::done);
  m.def("step", &step, py::arg("state"), py::arg("action"), py::arg("gateset"), py::arg("eps") = kDefaultEps);
  m.def(
      "generate_trajectory",
      [](const GateSet& gs, std::size_t depth, double eps, std::uint64_t seed) {
        Trajectory t = generate_trajectory(gs, depth, eps, seed);
        return py::make_tuple(t.target, t.steps);
      },
      py::arg("gateset"), py::arg("depth"), py::arg("eps") = kDefaultEps, py::arg("seed") = 1);
  m.def(
      "sample_targets",
      [](const GateSet& gs, const std::string& mode, std::size_t depth, std::size_t n, std::uint64_t seed) {
        return sample_targets(gs, parse_target_mode(mode), depth, n, seed);
      },
      py::arg("gateset"), py::arg("mode"), py::arg("depth"), py::arg("n"), py::arg("seed") = 1);

  py::class_<ActionValueFunction, std::shared_ptr<ActionValueFunction>>(m, "ActionValueFunction")
      .def_property_readonly("num_actions", &ActionValueFunction::num_actions)
      .def("q_values",
           [](const ActionValueFunction& q, const Unitary& s) { return q.q_values(s); });
  py::class_<TabularQ, ActionValueFunction, std::shared_ptr<TabularQ>>(m, "TabularQ")
      .def_property_readonly("num_states", [](const TabularQ& q) { return q.graph().size(); });
  py::class_<Model, ActionValueFunction, std::shared_ptr<Model>>(m, "Model")
      .def_property_readonly("gateset", &Model::gateset)
      .def("save", [](const Model& mdl, const std::string& path) {
        save_model_file(path, mdl.net(), build_gateset(mdl.gateset()));
      });

  m.def(
      "tabular_q",
      [](const GateSet& gs, int depth, double eps) {
        auto graph = std::make_shared<const StateGraph>(enumerate_states(gs, depth, eps));
        return std::make_shared<TabularQ>(tabular_q_adapter(graph));
      },
      py::arg("gateset"), py::arg("depth"), py::arg("eps") = kDefaultEps);
  m.def(
      "bfs_shortest",
      [](const Unitary& target, const GateSet& gs, double eps, int max_depth) -> py::object {
        auto r = bfs_shortest(target, gs, eps, max_depth);
        if (!r) return py::none();
        return py::make_tuple(r->length, r->labels);
      },
      py::arg("target"), py::arg("gateset"), py::arg("eps") = kDefaultEps, py::arg("max_depth") = 7);

  m.def(
      "load_model",
      [](const std::string& path) {
        LoadedModel lm = load_model_file(path);
        GateSet gs = build_gateset(lm.gateset_name);
        if (gs.ordering_hash() != lm.gateset_hash) throw FormatError("gate-set hash mismatch");
        return std::make_shared<Model>(lm.gateset_name, std::move(lm.net));
      },
      py::arg("path"));
  m.def(
      "train",
      [](const GateSet& gs, int d_start, int d_max, std::size_t transitions_per_depth,
         std::size_t max_steps_per_depth, std::uint64_t seed, int hidden1, int hidden2, int blocks,
         int block_width) {
        NetConfig nc = NetConfig::desk(gs);
        nc.hidden1 = hidden1;
        nc.hidden2 = hidden2;
        nc.blocks = blocks;
        nc.block_width = block_width;
        TrainConfig tc;
        tc.d_start = d_start;
        tc.d_max = d_max;
        tc.transitions_per_depth = transitions_per_depth;
        tc.max_steps_per_depth = max_steps_per_depth;
        tc.seed = seed;
        TrainResult r = [&] {
          py::gil_scoped_release release;
          return train_curriculum(gs, nc, tc);
        }();
        py::list log;
        for (const auto& row : r.log) {
          log.append(py::dict(py::arg("depth") = row.depth, py::arg("steps") = row.steps,
                              py::arg("final_loss") = row.final_loss, py::arg("converged") = row.converged));
        }
        return py::make_tuple(std::make_shared<Model>(gs.name(), std::move(r.net)), log);
      },
      py::arg("gateset"), py::arg("d_start") = 3, py::arg("d_max") = 4,
      py::arg("transitions_per_depth") = 20000, py::arg("max_steps_per_depth") = 2000,
      py::arg("seed") = 1, py::arg("hidden1") = 256, py::arg("hidden2") = 128, py::arg("blocks") = 2,
      py::arg("block_width") = 128);

  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("actions", &SearchResult::actions)
      .def_readonly("sequence", &SearchResult::sequence)
      .def_readonly("compiled", &SearchResult::compiled)
      .def_readonly("distance", &SearchResult::distance)
      .def_readonly("fidelity", &SearchResult::fidelity)
      .def_readonly("nodes_expanded", &SearchResult::nodes_expanded)
      .def_property_readonly("success", &SearchResult::success)
      .def("__str__", &format_result);
  m.def("aq_search", &aq_search, py::arg("target"), py::arg("gateset"), py::arg("q"),
        py::arg("eps") = kDefaultEps, py::arg("node_budget") = kDefaultNodeBudget1q,
        py::call_guard<py::gil_scoped_release>());
  m.def("greedy_rollout", &greedy_rollout, py::arg("target"), py::arg("gateset"), py::arg("q"),
        py::arg("eps") = kDefaultEps, py::arg("max_steps") = 40);
  m.def(
      "boltzmann_rollout",
      [](const Unitary& target, const GateSet& gs, const ActionValueFunction& q, double eps,
         std::size_t max_steps, double kt, std::uint64_t seed, bool maximize) {
        return boltzmann_rollout(target, gs, q, eps, max_steps, kt, seed,
                                 maximize ? BoltzmannSign::kMaximize : BoltzmannSign::kAsPrinted);
      },
      py::arg("target"), py::arg("gateset"), py::arg("q"), py::arg("eps") = kDefaultEps,
      py::arg("max_steps") = 40, py::arg("kt") = 1.0, py::arg("seed") = 1, py::arg("maximize") = false);

  m.def(
      "fit_scaling",
      [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<ScalingPoint> sp;
        for (auto [e, l] : pts) sp.push_back({e, l});
        ScalingFit f = fit_scaling(sp);
        return py::make_tuple(f.a, f.c, f.r_squared);
      },
      py::arg("points"));
}
