#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "divsim/dynamics.hpp"
#include "divsim/graph.hpp"

namespace divsim {

struct AzumaCheck {
  double h = 0.0;
  long long t = 0;
};

struct HorizonCheck {
  double eps = 0.0;
  double eta = 0.0;
};

// A Monte Carlo campaign: one graph, one initial-condition spec, one process,
// many seeded trials, plus the comparison targets to judge the outcome by.
// Identical configs produce byte-identical summaries; `threads` only changes
// the execution schedule and is excluded from the canonical echo.
struct ExperimentConfig {
  std::string graph_family;  // complete|path|cycle|star|regular|gnp|file
  int graph_n = 0;
  int graph_d = 0;
  double graph_p = 0.0;
  std::uint64_t graph_seed = 1;
  std::string graph_file;

  std::string init_spec;
  ProcessKind kind = ProcessKind::vertex;
  UpdateRule rule = UpdateRule::div;
  long long trials = 1;
  std::uint64_t master_seed = 0;
  long long step_cap = 0;  // 0 -> 50 n^2
  std::vector<double> eps_list;
  long long sample_stride = 0;
  std::vector<long long> weight_checkpoints;  // sorted, deduplicated
  int threads = 0;  // 0 -> DIVSIM_THREADS env var, else 1

  bool target_oracle = false;
  bool target_two_opinion = false;
  bool target_rounded_average = false;
  double min_floor_ceil_freq = 0.99;
  bool target_reduction_bound = false;
  std::vector<AzumaCheck> azuma_grid;
  std::vector<HorizonCheck> extreme_horizons;

  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::ordered_json to_json() const;
  Graph build_graph() const;
  int resolve_threads() const;
};

struct TrialRecord {
  long long trial = 0;
  int winner = -1;  // -1 when the step cap was hit
  long long consensus_step = -1;
  long long two_left_step = -1;  // -1 when never reached
  long long steps_taken = 0;
  bool cap_hit = false;
  int initial_min = 0;
  int initial_max = 0;
  double w0 = 0.0;
  double c0 = 0.0;  // w0 / n
  double max_drift = 0.0;
  std::vector<long long> extr_hits;  // aligned with eps_list; -1 = no hit
  std::vector<std::pair<long long, double>> checkpoint_weights;
};

struct Verdict {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double predicted = 0.0;
  double margin = 0.0;
  std::string detail;
};

struct StepStats {
  long long count = 0;
  double mean = 0.0;
  long long median = 0;
  long long p95 = 0;
  long long max = 0;
};

struct OpinionFrequency {
  int opinion = 0;
  long long wins = 0;
  double freq = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
};

struct EpsHitSummary {
  double eps = 0.0;
  long long hits = 0;
  double hit_fraction = 0.0;
  StepStats steps;  // over trials that hit the threshold
};

struct ExperimentSummary {
  ExperimentConfig config;
  int graph_n = 0;
  long long graph_m = 0;
  int k = 0;
  long long trials = 0;
  long long completed_trials = 0;
  long long cap_hits = 0;
  long long integral_c_trials = 0;
  std::vector<OpinionFrequency> win_freq;  // opinions 1..k, completed trials
  double in_floor_ceil_freq = 0.0;
  StepStats consensus_steps;
  StepStats two_left_steps;
  std::vector<EpsHitSummary> eps_hits;
  double max_drift_mean = 0.0;
  double max_drift_max = 0.0;
  std::vector<Verdict> verdicts;
  bool all_pass = true;
  std::vector<TrialRecord> records;
};

// Wilson 95% score interval.
std::pair<double, double> wilson_interval(long long wins, long long total);

ExperimentSummary run_experiment(const ExperimentConfig& config);

// Rebuilds summary.verdicts and all_pass from the records and the config's
// comparison targets.
void compare(const Graph& g, ExperimentSummary& summary);

nlohmann::ordered_json summary_to_json(const ExperimentSummary& summary);
std::string records_to_csv(const ExperimentSummary& summary);

}  // namespace divsim
