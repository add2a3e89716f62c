#pragma once

#include <utility>
#include <vector>

#include "divsim/dynamics.hpp"
#include "divsim/graph.hpp"

namespace divsim {

// Full reachable state space of the opinion chain started at one configuration.
// States are opinion vectors; transitions are grouped by target with summed
// probabilities (self-loops included), so every row sums to 1.
struct ChainIndex {
  std::vector<std::vector<int>> states;  // states[0] is the initial state
  std::vector<std::vector<std::pair<int, double>>> transitions;
  std::vector<int> absorbing_winner;  // consensus value, or -1 if transient
  long long state_count() const { return static_cast<long long>(states.size()); }
};

ChainIndex enumerate_chain(const Graph& g, const std::vector<int>& x0,
                           ProcessKind kind, UpdateRule rule,
                           long long state_cap = 2000000);

// Exact one-step expectation of the process weight (S for the edge kind,
// Z for the vertex kind) by summing over every (v,w) selection.
double one_step_expected_weight(const Graph& g, const std::vector<int>& x,
                                ProcessKind kind, UpdateRule rule);

struct WinDistribution {
  std::vector<std::pair<int, double>> probs;  // (opinion, win probability)
  long long states = 0;
  double residual = 0.0;

  double prob_of(int opinion) const;
};

// Absorption probabilities into each consensus value, from exhaustive
// enumeration: direct sparse solve for chains up to 1e4 states, Jacobi sweeps
// to residual <= 1e-12 beyond that.
WinDistribution exact_win_distribution(const Graph& g,
                                       const std::vector<int>& x0,
                                       ProcessKind kind, UpdateRule rule,
                                       long long state_cap = 2000000);

struct FinalStageCheck {
  int i;             // smaller of the two adjacent opinions
  double p;          // predicted P(i wins)   = i + 1 - c'
  double q;          // predicted P(i+1 wins) = c' - i
  double c_prime;    // W(0)/n for the chosen kind
  double max_error;  // vs exact_win_distribution
};

// Two adjacent opinions {i, i+1} (or a consensus state): closed-form winning
// probabilities from the initial weight, cross-checked against the exact
// absorption solve.
FinalStageCheck exact_final_stage_check(const Graph& g,
                                        const std::vector<int>& x0,
                                        ProcessKind kind);

}  // namespace divsim
