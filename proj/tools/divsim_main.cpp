// divsim: graph generation, spectral analysis, voting-process simulation,
// exact absorption oracle, coupling checks, theory bounds, and experiment
// campaigns behind one subcommand-style binary. Machine-readable output only.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "divsim/coupling.hpp"
#include "divsim/dynamics.hpp"
#include "divsim/experiment.hpp"
#include "divsim/graph.hpp"
#include "divsim/oracle.hpp"
#include "divsim/rng.hpp"
#include "divsim/spectral.hpp"
#include "divsim/theory.hpp"
#include "json.hpp"

namespace {

using divsim::Graph;
using ordered_json = nlohmann::ordered_json;

void emit(std::string text, const std::string& out_path) {
  if (text.empty() || text.back() != '\n') text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

ordered_json opt_json(const std::optional<long long>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json opt_json(const std::optional<int>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json horizons_json(const divsim::Horizons& h) {
  ordered_json j;
  j["t1"] = h.t1;
  j["t2"] = h.t2;
  if (h.applicable) {
    j["tp"] = h.tp;
    j["tp_of_eps"] = h.tp_of_eps;
  } else {
    j["tp"] = nullptr;
    j["tp_of_eps"] = nullptr;
  }
  j["applicable"] = h.applicable;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete incremental voting toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  // generate
  auto* gen = app.add_subcommand("generate", "write a graph family edge list");
  std::string gen_family, gen_out;
  int gen_n = 0, gen_d = 0;
  double gen_p = 0.0;
  std::uint64_t gen_seed = 1;
  gen->add_option("--family", gen_family, "complete|regular|gnp|path|cycle|star")
      ->required();
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--d", gen_d, "degree (regular)");
  gen->add_option("--p", gen_p, "edge probability (gnp)");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output path (default stdout)");
  gen->callback([&] {
    const Graph g = Graph::family(gen_family, gen_n, gen_d, gen_p, gen_seed);
    emit(g.to_edge_list(), gen_out);
  });

  // spectral
  auto* sp = app.add_subcommand("spectral", "spectral summary of a graph");
  std::string sp_graph, sp_out;
  sp->add_option("--graph", sp_graph, "edge-list file")->required();
  sp->add_option("--out", sp_out, "output path (default stdout)");
  sp->callback([&] {
    const Graph g = Graph::load_file(sp_graph);
    const divsim::SpectralSummary s = divsim::spectrum(g);
    ordered_json j;
    j["n"] = g.n();
    j["m"] = g.m();
    j["lambda"] = s.lambda;
    j["lambda2"] = s.lambda2;
    j["lambdan"] = s.lambdan;
    j["pi_min"] = s.pi_min;
    j["bipartite"] = s.bipartite;
    emit(j.dump(2), sp_out);
  });

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one voting trajectory");
  std::string sim_graph, sim_init, sim_kind = "vertex", sim_rule = "div",
              sim_out;
  std::uint64_t sim_seed = 1;
  long long sim_cap = 0, sim_stride = 0;
  std::vector<double> sim_eps;
  std::vector<long long> sim_cps;
  sim->add_option("--graph", sim_graph, "edge-list file")->required();
  sim->add_option("--init", sim_init, "uniform:K | blocks:AxC,... | file:PATH")
      ->required();
  sim->add_option("--kind", sim_kind, "vertex|edge");
  sim->add_option("--rule", sim_rule, "div|pull");
  sim->add_option("--seed", sim_seed, "trajectory seed");
  sim->add_option("--max-steps", sim_cap, "step cap (default 50 n^2)");
  sim->add_option("--eps", sim_eps, "extreme-mass thresholds")->delimiter(',');
  sim->add_option("--stride", sim_stride, "weight sample stride");
  sim->add_option("--checkpoints", sim_cps, "weight checkpoint steps")
      ->delimiter(',');
  sim->add_option("--out", sim_out, "output path (default stdout)");
  sim->callback([&] {
    const Graph g = Graph::load_file(sim_graph);
    const divsim::ProcessKind kind = divsim::parse_process_kind(sim_kind);
    const divsim::UpdateRule rule = divsim::parse_update_rule(sim_rule);
    divsim::Rng rng(sim_seed);
    divsim::InitialCondition init =
        divsim::parse_initial_spec(sim_init, g.n(), rng);
    const int k = init.k;
    divsim::OpinionState state(g, std::move(init.opinions), k);
    divsim::RunOptions opts;
    opts.step_cap = sim_cap;
    opts.eps_list = sim_eps;
    opts.sample_stride = sim_stride;
    opts.weight_checkpoints = sim_cps;
    const divsim::TrajectoryResult res =
        divsim::run(g, state, kind, rule, rng, opts);
    ordered_json j;
    j["n"] = g.n();
    j["m"] = g.m();
    j["bipartite"] = g.is_bipartite();
    j["kind"] = divsim::to_string(kind);
    j["rule"] = divsim::to_string(rule);
    j["seed"] = sim_seed;
    j["k"] = k;
    j["winner"] = opt_json(res.winner);
    j["consensus_step"] = opt_json(res.consensus_step);
    j["two_left_step"] = opt_json(res.two_left_step);
    j["steps_taken"] = res.steps_taken;
    j["cap_hit"] = res.cap_hit;
    j["initial_min"] = res.initial_min;
    j["initial_max"] = res.initial_max;
    j["s0"] = res.s0;
    j["z0"] = res.z0;
    j["max_drift"] = res.max_drift;
    ordered_json hits = ordered_json::array();
    for (const auto& [eps, step] : res.extr_hits) {
      ordered_json e;
      e["eps"] = eps;
      e["step"] = opt_json(step);
      hits.push_back(e);
    }
    j["extr_hits"] = hits;
    ordered_json samples = ordered_json::array();
    for (const divsim::WeightSample& ws : res.weight_samples) {
      ordered_json e;
      e["step"] = ws.step;
      e["s"] = ws.s;
      e["z"] = ws.z;
      samples.push_back(e);
    }
    j["weight_samples"] = samples;
    ordered_json cps = ordered_json::array();
    for (const auto& [step, w] : res.checkpoint_weights) {
      ordered_json e;
      e["step"] = step;
      e["w"] = w;
      cps.push_back(e);
    }
    j["checkpoint_weights"] = cps;
    emit(j.dump(2), sim_out);
  });

  // oracle
  auto* orc = app.add_subcommand("oracle", "exact absorption distribution");
  std::string orc_graph, orc_init, orc_kind = "vertex", orc_rule = "div",
              orc_out;
  std::uint64_t orc_seed = 1;
  long long orc_state_cap = 2000000;
  orc->add_option("--graph", orc_graph, "edge-list file")->required();
  orc->add_option("--init", orc_init, "initial condition spec")->required();
  orc->add_option("--kind", orc_kind, "vertex|edge");
  orc->add_option("--rule", orc_rule, "div|pull");
  orc->add_option("--seed", orc_seed, "seed (random init specs only)");
  orc->add_option("--state-cap", orc_state_cap, "reachable-state cap");
  orc->add_option("--out", orc_out, "output path (default stdout)");
  orc->callback([&] {
    const Graph g = Graph::load_file(orc_graph);
    divsim::Rng rng(orc_seed);
    const divsim::InitialCondition init =
        divsim::parse_initial_spec(orc_init, g.n(), rng);
    const divsim::WinDistribution dist = divsim::exact_win_distribution(
        g, init.opinions, divsim::parse_process_kind(orc_kind),
        divsim::parse_update_rule(orc_rule), orc_state_cap);
    ordered_json j;
    j["states"] = dist.states;
    ordered_json wd = ordered_json::array();
    for (const auto& [opinion, prob] : dist.probs) {
      ordered_json e;
      e["opinion"] = opinion;
      e["prob"] = prob;
      wd.push_back(e);
    }
    j["win_distribution"] = wd;
    j["residual"] = dist.residual;
    emit(j.dump(2), orc_out);
  });

  // couple
  auto* cpl = app.add_subcommand("couple",
                                 "coupled incremental/pull domination check");
  std::string cpl_graph, cpl_init, cpl_kind = "vertex", cpl_mode = "s-side",
              cpl_out;
  std::uint64_t cpl_seed = 1;
  long long cpl_cap = 0;
  cpl->add_option("--graph", cpl_graph, "edge-list file")->required();
  cpl->add_option("--init", cpl_init, "initial condition spec")->required();
  cpl->add_option("--kind", cpl_kind, "vertex|edge");
  cpl->add_option("--mode", cpl_mode, "s-side|ell-side");
  cpl->add_option("--seed", cpl_seed, "trajectory seed");
  cpl->add_option("--max-steps", cpl_cap, "step cap (default 50 n^2)");
  cpl->add_option("--out", cpl_out, "output path (default stdout)");
  cpl->callback([&] {
    const Graph g = Graph::load_file(cpl_graph);
    divsim::Rng rng(cpl_seed);
    divsim::InitialCondition init =
        divsim::parse_initial_spec(cpl_init, g.n(), rng);
    long long cap = cpl_cap;
    if (cap <= 0) cap = 50LL * g.n() * g.n();
    const divsim::CoupledRunResult res = divsim::coupled_run(
        g, init.opinions, init.k, divsim::parse_coupling_mode(cpl_mode),
        divsim::parse_process_kind(cpl_kind), rng, cap);
    ordered_json j;
    j["steps"] = res.steps;
    j["violations"] = res.violations;
    j["div_winner"] = opt_json(res.div.winner);
    j["pull_winner"] = opt_json(res.pull.winner);
    j["consequence_ok"] = res.consequence_ok;
    emit(j.dump(2), cpl_out);
  });

  // bounds
  auto* bnd = app.add_subcommand("bounds", "theory bound report");
  std::string bnd_graph, bnd_out;
  int bnd_n = 0, bnd_k = 2;
  double bnd_lambda = -1.0, bnd_pimin = 0.0, bnd_eps = 0.0, bnd_eta = 0.0;
  bnd->add_option("--graph", bnd_graph,
                  "edge-list file (supplies n, lambda, pi_min)");
  bnd->add_option("--n", bnd_n, "vertex count (without --graph)");
  bnd->add_option("--k", bnd_k, "opinion count")->required();
  bnd->add_option("--lambda", bnd_lambda, "walk-matrix lambda (without --graph)");
  bnd->add_option("--pi-min", bnd_pimin, "min stationary mass (default 1/n)");
  bnd->add_option("--eps", bnd_eps, "extreme-mass threshold")->required();
  bnd->add_option("--eta", bnd_eta, "failure probability")->required();
  bnd->add_option("--out", bnd_out, "output path (default stdout)");
  bnd->callback([&] {
    int n = bnd_n;
    double lambda = bnd_lambda;
    double pi_min = bnd_pimin;
    if (!bnd_graph.empty()) {
      const Graph g = Graph::load_file(bnd_graph);
      const divsim::SpectralSummary s = divsim::spectrum(g);
      n = g.n();
      lambda = s.lambda;
      pi_min = s.pi_min;
    } else {
      if (n < 2) throw std::runtime_error("--n >= 2 required without --graph");
      if (lambda < 0.0)
        throw std::runtime_error("--lambda required without --graph");
      if (pi_min <= 0.0) pi_min = 1.0 / n;
    }
    const divsim::BoundReport r =
        divsim::bound_report(n, bnd_k, lambda, pi_min, bnd_eps, bnd_eta);
    ordered_json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["lambda"] = r.lambda;
    j["pi_min"] = r.pi_min;
    j["eps"] = r.eps;
    j["eta"] = r.eta;
    ordered_json sched;
    sched["eps1"] = r.schedule.eps1;
    sched["eps2"] = r.schedule.eps2;
    j["eps_schedule"] = sched;
    j["horizons_at_eps"] = horizons_json(r.at_eps);
    ordered_json conf;
    conf["t1"] = r.at_confidence.t1;
    conf["t2"] = r.at_confidence.t2;
    j["horizons_at_confidence"] = conf;
    ordered_json exp;
    exp["order_reference"] = r.expected.order_reference;
    if (r.expected.applicable)
      exp["structured_bound"] = r.expected.structured_bound;
    else
      exp["structured_bound"] = nullptr;
    exp["applicable"] = r.expected.applicable;
    j["expected_bound"] = exp;
    ordered_json hyp;
    hyp["lambda_k"] = r.hypothesis.lambda_k;
    hyp["k_log_n_over_n"] = r.hypothesis.k_log_n_over_n;
    hyp["n_pi_min"] = r.hypothesis.n_pi_min;
    j["hypothesis"] = hyp;
    j["applicable"] = r.applicable;
    emit(j.dump(2), bnd_out);
  });

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a trial campaign");
  std::string exp_config, exp_out, exp_format = "json", exp_records;
  int exp_threads = 0;
  exp->add_option("--config", exp_config, "JSON config file")->required();
  exp->add_option("--threads", exp_threads,
                  "worker threads (overrides config and DIVSIM_THREADS)");
  exp->add_option("--format", exp_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  exp->add_option("--records", exp_records, "also write per-trial CSV here");
  exp->add_option("--out", exp_out, "output path (default stdout)");
  exp->callback([&] {
    divsim::ExperimentConfig cfg = divsim::ExperimentConfig::from_file(exp_config);
    if (exp_threads > 0) cfg.threads = exp_threads;
    const divsim::ExperimentSummary sum = divsim::run_experiment(cfg);
    if (!exp_records.empty()) emit(divsim::records_to_csv(sum), exp_records);
    if (exp_format == "csv")
      emit(divsim::records_to_csv(sum), exp_out);
    else
      emit(divsim::summary_to_json(sum).dump(2), exp_out);
    if (!sum.all_pass) rc = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return rc;
}
