#include "divsim/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace divsim {

SpectralSummary spectrum(const Graph& g, int size_cap) {
  if (!g.connected())
    throw std::invalid_argument("spectrum: graph must be connected");
  if (g.n() > size_cap)
    throw std::invalid_argument("spectrum: n exceeds dense eigensolver cap");

  const int n = g.n();
  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> inv_sqrt_deg(n);
  for (int v = 0; v < n; ++v)
    inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  for (const auto& [u, v] : g.edges()) {
    const double w = inv_sqrt_deg[u] * inv_sqrt_deg[v];
    sym(u, v) = w;
    sym(v, u) = w;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigensolver failed");

  SpectralSummary out;
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + n);
  std::reverse(out.eigenvalues.begin(), out.eigenvalues.end());  // descending
  out.lambda2 = n > 1 ? out.eigenvalues[1] : out.eigenvalues[0];
  out.lambdan = out.eigenvalues.back();
  out.lambda = std::max(std::abs(out.lambda2), std::abs(out.lambdan));
  out.bipartite = out.lambdan <= -1.0 + 1e-9;

  const auto st = g.stationary();
  out.pi_min = st.pi_min;
  out.pi_inf_norm = st.pi_inf_norm;
  return out;
}

namespace {

std::vector<char> make_mask(const Graph& g, std::span<const int> set) {
  std::vector<char> mask(g.n(), 0);
  for (const int v : set) {
    if (v < 0 || v >= g.n())
      throw std::invalid_argument("vertex index out of range");
    mask[v] = 1;
  }
  return mask;
}

double pi_of_set(const Graph& g, std::span<const int> set) {
  double total = 0.0;
  for (const int v : set) total += g.pi(v);
  return total;
}

}  // namespace

double ergodic_flow(const Graph& g, std::span<const int> s_set,
                    std::span<const int> u_set) {
  const auto u_mask = make_mask(g, u_set);
  make_mask(g, s_set);
  // Q(S,U) = (#ordered adjacent pairs S->U) / 2m, exact as an integer ratio.
  long long pairs = 0;
  for (const int v : s_set)
    for (const int u : g.neighbors(v))
      if (u_mask[u]) ++pairs;
  return static_cast<double>(pairs) / static_cast<double>(2 * g.m());
}

MixingCheck mixing_check(const Graph& g, std::span<const int> s_set,
                         std::span<const int> u_set, double lambda) {
  const double pi_s = pi_of_set(g, s_set);
  const double pi_u = pi_of_set(g, u_set);
  MixingCheck out;
  out.deviation = std::abs(ergodic_flow(g, s_set, u_set) - pi_s * pi_u);
  out.bound =
      lambda * std::sqrt(pi_s * (1.0 - pi_s) * pi_u * (1.0 - pi_u));
  out.holds = out.deviation <= out.bound + 1e-12;
  return out;
}

}  // namespace divsim
