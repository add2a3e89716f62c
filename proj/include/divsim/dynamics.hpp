#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "divsim/graph.hpp"
#include "divsim/rng.hpp"

namespace divsim {

enum class ProcessKind { vertex, edge };
enum class UpdateRule { div, pull };

const char* to_string(ProcessKind kind);
const char* to_string(UpdateRule rule);
ProcessKind parse_process_kind(const std::string& text);
UpdateRule parse_update_rule(const std::string& text);

// Incremental update: move x_v one unit toward x_w (unchanged if equal).
inline int div_update(int x_v, int x_w) {
  if (x_v < x_w) return x_v + 1;
  if (x_v > x_w) return x_v - 1;
  return x_v;
}

struct PairChoice {
  int v;
  int w;  // always a neighbor of v
};

// vertex kind: uniform vertex, then uniform neighbor -> P[(v,w)] = 1/(n d(v)).
// edge kind: uniform edge, then uniform orientation -> P[(v,w)] = 1/(2m).
// Draw order is fixed for reproducibility: vertex then neighbor index,
// or edge index then orientation bit.
PairChoice select_pair(const Graph& g, ProcessKind kind, Rng& rng);

// Per-vertex opinions in [1..k] plus O(1)-maintained aggregates: class counts,
// class pi-masses, extreme present opinions, S = sum x_v and Z = n sum pi_v x_v.
class OpinionState {
 public:
  OpinionState(const Graph& g, std::vector<int> opinions, int k);

  const Graph& graph() const { return *graph_; }
  int n() const { return static_cast<int>(x_.size()); }
  int k() const { return k_; }
  int opinion(int v) const { return x_.at(v); }
  const std::vector<int>& opinions() const { return x_; }
  long long count(int i) const { return counts_.at(check_opinion(i)); }
  double pi_mass(int i) const { return pi_mass_.at(check_opinion(i)); }
  int min_present() const { return min_present_; }
  int max_present() const { return max_present_; }
  bool consensus() const { return min_present_ == max_present_; }
  long long total() const { return s_total_; }        // S
  double weighted_total() const { return z_total_; }  // Z
  double weight(ProcessKind kind) const {
    return kind == ProcessKind::edge ? static_cast<double>(s_total_) : z_total_;
  }

  void apply_div(int v, int w) { move_vertex(v, div_update(x_[v], x_[w])); }
  void apply_pull(int v, int w) { move_vertex(v, x_[w]); }
  void apply(UpdateRule rule, int v, int w) {
    rule == UpdateRule::div ? apply_div(v, w) : apply_pull(v, w);
  }

  // Largest discrepancy between incremental aggregates and a fresh recompute.
  // Integer mismatches (counts, S, extremes) report as +infinity.
  double bookkeeping_drift() const;
  // Recompute aggregates from x; throws logic_error if the incremental values
  // had drifted beyond 1e-9 (that would indicate a bookkeeping bug).
  void refresh();

 private:
  int check_opinion(int i) const;
  void move_vertex(int v, int to);
  void recompute(std::vector<long long>& counts, std::vector<double>& pi_mass,
                 int& mn, int& mx, long long& s, double& z) const;

  const Graph* graph_;
  int k_;
  std::vector<int> x_;
  std::vector<double> pi_;   // pi_v
  std::vector<double> zw_;   // n pi_v; exactly 1.0 on regular graphs
  std::vector<long long> counts_;   // indexed 1..k
  std::vector<double> pi_mass_;     // exactly 0.0 for empty classes
  int min_present_;
  int max_present_;
  long long s_total_;
  double z_total_;
};

struct RunOptions {
  long long step_cap = 0;  // 0 -> default 50 n^2
  std::vector<double> eps_list;
  long long sample_stride = 0;  // 0 -> no periodic weight samples
  std::vector<long long> weight_checkpoints;
  long long recompute_every = 100000;  // 0 -> never
};

struct WeightSample {
  long long step;
  long long s;
  double z;
};

struct TrajectoryResult {
  std::optional<int> winner;
  std::optional<long long> consensus_step;
  std::optional<long long> two_left_step;
  // Same order as RunOptions::eps_list: first step with
  // min(pi-mass of initial smallest opinion, pi-mass of initial largest) <= eps.
  std::vector<std::pair<double, std::optional<long long>>> extr_hits;
  std::vector<WeightSample> weight_samples;
  // (step, W) where W = S for edge kind, Z for vertex kind. Checkpoints past
  // consensus report the absorbed value; checkpoints past a cap hit are omitted.
  std::vector<std::pair<long long, double>> checkpoint_weights;
  long long steps_taken = 0;
  bool cap_hit = false;
  int initial_min = 0;
  int initial_max = 0;
  long long s0 = 0;
  double z0 = 0.0;
  double max_drift = 0.0;  // worst bookkeeping-vs-recompute gap seen
};

TrajectoryResult run(const Graph& g, OpinionState& state, ProcessKind kind,
                     UpdateRule rule, Rng& rng, const RunOptions& opts = {});

struct InitialCondition {
  std::vector<int> opinions;
  int k;
};

// Spec strings: "uniform:k" (i.i.d. uniform on [1..k], drawn in vertex order),
// "blocks:a x c1, b x c2, ..." (first a vertices opinion c1, ...; 'x' may also
// be the multiplication sign), "file:PATH" (one opinion per line).
InitialCondition parse_initial_spec(const std::string& spec, int n, Rng& rng);

}  // namespace divsim
