#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "divsim/rng.hpp"

namespace divsim {

// Stationary distribution of the simple random walk: pi_v = d(v)/2m.
struct StationaryDistribution {
  std::vector<double> pi;
  double pi_min = 0.0;
  double pi_inf_norm = 0.0;
  double pi_2_norm = 0.0;
};

// Undirected simple graph over dense vertex ids 0..n-1. Immutable once
// constructed; safe to share across concurrent trial workers.
class Graph {
 public:
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edge_list,
                          bool allow_disconnected = false);
  // Text format: header "n m", then one "u v" per line, each undirected edge
  // listed once, 0-indexed.
  static Graph from_edge_list(const std::string& text,
                              bool allow_disconnected = false);
  static Graph load_file(const std::string& path,
                         bool allow_disconnected = false);

  static Graph complete(int n);
  static Graph path(int n);
  static Graph cycle(int n);
  static Graph star(int n);
  // Incremental pairing model: random free points are matched, pairings that
  // would create a loop or multi-edge are rejected as they arise, dead ends
  // restart the matching. Disconnected results are resampled. At most
  // `retry_cap` restarts.
  static Graph random_regular(int n, int d, std::uint64_t seed,
                              int retry_cap = 1000);
  // G(n,p); disconnected samples are resampled up to `retry_cap` times.
  static Graph gnp(int n, double p, std::uint64_t seed, int retry_cap = 1000);

  int n() const { return n_; }
  long long m() const { return m_; }
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const int> neighbors(int v) const {
    return {adjacency_.data() + offsets_[v],
            static_cast<std::size_t>(degree(v))};
  }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool connected() const { return connected_; }
  bool is_regular() const;
  // Two-coloring check by BFS (independent of the spectral route).
  bool is_bipartite() const;

  double pi(int v) const {
    return static_cast<double>(degree(v)) / static_cast<double>(2 * m_);
  }
  // n*pi(v); exactly 1.0 on regular graphs, so S(t) and Z(t) coincide
  // bit-for-bit there.
  double vertex_weight(int v) const {
    return static_cast<double>(static_cast<long long>(n_) * degree(v)) /
           static_cast<double>(2 * m_);
  }
  StationaryDistribution stationary() const;

  std::string to_edge_list() const;

  // Dispatch by family name: complete, path, cycle, star, regular (uses d),
  // gnp (uses p). Shared by the CLI and experiment configs.
  static Graph family(const std::string& name, int n, int d, double p,
                      std::uint64_t seed);

 private:
  Graph() = default;

  int n_ = 0;
  long long m_ = 0;
  std::vector<int> offsets_;    // CSR offsets, size n+1
  std::vector<int> adjacency_;  // sorted neighbor lists
  std::vector<std::pair<int, int>> edges_;  // each edge once, u < v
  bool connected_ = false;
};

}  // namespace divsim
