#pragma once

#include <span>
#include <vector>

#include "divsim/graph.hpp"

namespace divsim {

struct SpectralSummary {
  std::vector<double> eigenvalues;  // of the walk matrix P, descending
  double lambda = 0.0;              // max(|lambda_2|, |lambda_n|)
  double lambda2 = 0.0;
  double lambdan = 0.0;
  bool bipartite = false;
  double pi_min = 0.0;
  double pi_inf_norm = 0.0;
};

// Dense eigendecomposition of P = D^-1 A through the symmetric similar
// matrix D^-1/2 A D^-1/2 (identical spectrum, real by reversibility).
SpectralSummary spectrum(const Graph& g, int size_cap = 5000);

// Ergodic flow Q(S,U) = sum_{v in S} pi_v P(v,U).
double ergodic_flow(const Graph& g, std::span<const int> s_set,
                    std::span<const int> u_set);

struct MixingCheck {
  double deviation = 0.0;  // |Q(S,U) - pi(S) pi(U)|
  double bound = 0.0;      // lambda * sqrt(pi(S) pi(S^c) pi(U) pi(U^c))
  bool holds = false;      // deviation <= bound + 1e-12
};

MixingCheck mixing_check(const Graph& g, std::span<const int> s_set,
                         std::span<const int> u_set, double lambda);

}  // namespace divsim
