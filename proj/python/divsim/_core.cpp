// Python bindings for the voting-process core: graph construction, spectral
// summaries, single trajectories, the exact absorption oracle, coupled runs,
// theory bounds, and full experiment campaigns.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "divsim/coupling.hpp"
#include "divsim/dynamics.hpp"
#include "divsim/experiment.hpp"
#include "divsim/graph.hpp"
#include "divsim/oracle.hpp"
#include "divsim/rng.hpp"
#include "divsim/spectral.hpp"
#include "divsim/theory.hpp"
#include "json.hpp"

namespace py = pybind11;
using namespace divsim;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::null:
      return py::none();
    case nlohmann::ordered_json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::ordered_json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case nlohmann::ordered_json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case nlohmann::ordered_json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::ordered_json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::ordered_json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case nlohmann::ordered_json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default:
      return py::none();
  }
}

py::object opt_int(const std::optional<int>& v) {
  return v ? py::object(py::int_(*v)) : py::object(py::none());
}

py::object opt_ll(const std::optional<long long>& v) {
  return v ? py::object(py::int_(*v)) : py::object(py::none());
}

py::dict horizons_dict(const Horizons& h) {
  py::dict d;
  d["t1"] = h.t1;
  d["t2"] = h.t2;
  d["tp"] = h.applicable ? py::object(py::int_(h.tp)) : py::object(py::none());
  d["tp_of_eps"] = h.applicable ? py::object(py::int_(h.tp_of_eps))
                                : py::object(py::none());
  d["applicable"] = h.applicable;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "discrete incremental voting on graphs: simulator, oracle, bounds";

  py::class_<Graph>(m, "Graph")
      .def_static(
          "family",
          [](const std::string& name, int n, int d, double p,
             std::uint64_t seed) { return Graph::family(name, n, d, p, seed); },
          py::arg("name"), py::arg("n"), py::arg("d") = 0, py::arg("p") = 0.0,
          py::arg("seed") = 1)
      .def_static(
          "load", [](const std::string& path) { return Graph::load_file(path); },
          py::arg("path"))
      .def_static(
          "from_edges",
          [](int n, const std::vector<std::pair<int, int>>& edges) {
            return Graph::from_edges(n, edges);
          },
          py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("m", &Graph::m)
      .def("degree", &Graph::degree, py::arg("v"))
      .def("is_regular", &Graph::is_regular)
      .def("is_bipartite", &Graph::is_bipartite)
      .def("connected", &Graph::connected)
      .def("pi", &Graph::pi, py::arg("v"))
      .def("edges", &Graph::edges)
      .def("to_edge_list", &Graph::to_edge_list)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.n()) +
               " m=" + std::to_string(g.m()) + ">";
      });

  m.def("div_update", &div_update, py::arg("x_v"), py::arg("x_w"),
        "one incremental update of x_v toward x_w");

  m.def(
      "spectral_summary",
      [](const Graph& g) {
        const SpectralSummary s = spectrum(g);
        py::dict d;
        d["n"] = g.n();
        d["m"] = g.m();
        d["lambda"] = s.lambda;
        d["lambda2"] = s.lambda2;
        d["lambdan"] = s.lambdan;
        d["pi_min"] = s.pi_min;
        d["bipartite"] = s.bipartite;
        return d;
      },
      py::arg("graph"));

  m.def(
      "simulate",
      [](const Graph& g, const std::string& init, const std::string& kind,
         const std::string& rule, std::uint64_t seed, long long max_steps,
         std::vector<double> eps, long long stride,
         std::vector<long long> checkpoints) {
        Rng rng(seed);
        InitialCondition ic = parse_initial_spec(init, g.n(), rng);
        const int k = ic.k;
        OpinionState state(g, std::move(ic.opinions), k);
        RunOptions opts;
        opts.step_cap = max_steps;
        opts.eps_list = std::move(eps);
        opts.sample_stride = stride;
        opts.weight_checkpoints = std::move(checkpoints);
        const TrajectoryResult res = run(g, state, parse_process_kind(kind),
                                         parse_update_rule(rule), rng, opts);
        py::dict d;
        d["k"] = k;
        d["winner"] = opt_int(res.winner);
        d["consensus_step"] = opt_ll(res.consensus_step);
        d["two_left_step"] = opt_ll(res.two_left_step);
        d["steps_taken"] = res.steps_taken;
        d["cap_hit"] = res.cap_hit;
        d["initial_min"] = res.initial_min;
        d["initial_max"] = res.initial_max;
        d["s0"] = res.s0;
        d["z0"] = res.z0;
        d["max_drift"] = res.max_drift;
        py::list hits;
        for (const auto& [e, step] : res.extr_hits)
          hits.append(py::make_tuple(e, opt_ll(step)));
        d["extr_hits"] = hits;
        py::list samples;
        for (const WeightSample& ws : res.weight_samples)
          samples.append(py::make_tuple(ws.step, ws.s, ws.z));
        d["weight_samples"] = samples;
        py::list cps;
        for (const auto& [step, w] : res.checkpoint_weights)
          cps.append(py::make_tuple(step, w));
        d["checkpoint_weights"] = cps;
        d["bipartite"] = g.is_bipartite();
        return d;
      },
      py::arg("graph"), py::arg("init"), py::arg("kind") = "vertex",
      py::arg("rule") = "div", py::arg("seed") = 1, py::arg("max_steps") = 0,
      py::arg("eps") = std::vector<double>{}, py::arg("stride") = 0,
      py::arg("checkpoints") = std::vector<long long>{});

  m.def(
      "exact_win_distribution",
      [](const Graph& g, const std::vector<int>& opinions,
         const std::string& kind, const std::string& rule,
         long long state_cap) {
        const WinDistribution dist =
            exact_win_distribution(g, opinions, parse_process_kind(kind),
                                   parse_update_rule(rule), state_cap);
        py::dict probs;
        for (const auto& [opinion, prob] : dist.probs)
          probs[py::int_(opinion)] = prob;
        py::dict d;
        d["probs"] = probs;
        d["states"] = dist.states;
        d["residual"] = dist.residual;
        return d;
      },
      py::arg("graph"), py::arg("opinions"), py::arg("kind") = "vertex",
      py::arg("rule") = "div", py::arg("state_cap") = 2000000);

  m.def(
      "coupled_run",
      [](const Graph& g, const std::vector<int>& opinions, int k,
         const std::string& mode, const std::string& kind, std::uint64_t seed,
         long long max_steps) {
        Rng rng(seed);
        if (max_steps <= 0) max_steps = 50LL * g.n() * g.n();
        const CoupledRunResult res =
            coupled_run(g, opinions, k, parse_coupling_mode(mode),
                        parse_process_kind(kind), rng, max_steps);
        py::dict d;
        d["steps"] = res.steps;
        d["violations"] = res.violations;
        d["div_winner"] = opt_int(res.div.winner);
        d["pull_winner"] = opt_int(res.pull.winner);
        d["consequence_ok"] = res.consequence_ok;
        return d;
      },
      py::arg("graph"), py::arg("opinions"), py::arg("k"),
      py::arg("mode") = "s-side", py::arg("kind") = "vertex",
      py::arg("seed") = 1, py::arg("max_steps") = 0);

  m.def(
      "epsilon_schedule",
      [](int n, double lambda) {
        const EpsilonSchedule s = epsilon_schedule(n, lambda);
        return py::make_tuple(s.eps1, s.eps2);
      },
      py::arg("n"), py::arg("lambda"));

  m.def(
      "horizons",
      [](int n, double lambda, double pi_min, double eps) {
        return horizons_dict(horizons(n, lambda, pi_min, eps));
      },
      py::arg("n"), py::arg("lambda"), py::arg("pi_min"), py::arg("eps"));

  m.def("azuma_tail", &azuma_tail, py::arg("h"), py::arg("t"));
  m.def("restart_tail", &restart_tail, py::arg("h"));

  m.def(
      "bound_report",
      [](int n, int k, double lambda, double eps, double eta, double pi_min) {
        if (pi_min <= 0.0) pi_min = 1.0 / n;
        const BoundReport r = bound_report(n, k, lambda, pi_min, eps, eta);
        py::dict d;
        d["n"] = r.n;
        d["k"] = r.k;
        d["lambda"] = r.lambda;
        d["pi_min"] = r.pi_min;
        d["eps"] = r.eps;
        d["eta"] = r.eta;
        py::dict sched;
        sched["eps1"] = r.schedule.eps1;
        sched["eps2"] = r.schedule.eps2;
        d["eps_schedule"] = sched;
        d["horizons_at_eps"] = horizons_dict(r.at_eps);
        py::dict conf;
        conf["t1"] = r.at_confidence.t1;
        conf["t2"] = r.at_confidence.t2;
        d["horizons_at_confidence"] = conf;
        py::dict exp;
        exp["order_reference"] = r.expected.order_reference;
        exp["structured_bound"] = r.expected.applicable
                                      ? py::object(py::float_(
                                            r.expected.structured_bound))
                                      : py::object(py::none());
        exp["applicable"] = r.expected.applicable;
        d["expected_bound"] = exp;
        py::dict hyp;
        hyp["lambda_k"] = r.hypothesis.lambda_k;
        hyp["k_log_n_over_n"] = r.hypothesis.k_log_n_over_n;
        hyp["n_pi_min"] = r.hypothesis.n_pi_min;
        d["hypothesis"] = hyp;
        d["applicable"] = r.applicable;
        return d;
      },
      py::arg("n"), py::arg("k"), py::arg("lambda"), py::arg("eps"),
      py::arg("eta"), py::arg("pi_min") = 0.0);

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const ExperimentConfig cfg =
            ExperimentConfig::from_json(nlohmann::json::parse(config_json));
        const ExperimentSummary sum = run_experiment(cfg);
        return json_to_py(summary_to_json(sum));
      },
      py::arg("config_json"), "run a campaign from a JSON config string");

  m.def(
      "run_experiment_file",
      [](const std::string& path) {
        const ExperimentSummary sum =
            run_experiment(ExperimentConfig::from_file(path));
        return json_to_py(summary_to_json(sum));
      },
      py::arg("path"), "run a campaign from a JSON config file");
}
