#include "divsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace divsim {
namespace {

bool bfs_connected(int n, const std::vector<int>& offsets,
                   const std::vector<int>& adjacency) {
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int i = offsets[v]; i < offsets[v + 1]; ++i) {
      const int u = adjacency[i];
      if (!seen[u]) {
        seen[u] = 1;
        ++visited;
        queue.push(u);
      }
    }
  }
  return visited == n;
}

}  // namespace

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edge_list,
                        bool allow_disconnected) {
  if (n < 1) throw std::invalid_argument("graph: need at least one vertex");
  for (auto& [u, v] : edge_list) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("graph: vertex index out of range");
    if (u == v) throw std::invalid_argument("graph: self-loop forbidden");
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  if (std::adjacent_find(edge_list.begin(), edge_list.end()) !=
      edge_list.end())
    throw std::invalid_argument("graph: duplicate edge");

  Graph g;
  g.n_ = n;
  g.m_ = static_cast<long long>(edge_list.size());
  g.edges_ = std::move(edge_list);
  std::vector<int> degree(n, 0);
  for (const auto& [u, v] : g.edges_) {
    ++degree[u];
    ++degree[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.adjacency_.resize(2 * g.m_);
  std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : g.edges_) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  for (int v = 0; v < n; ++v)
    std::sort(g.adjacency_.begin() + g.offsets_[v],
              g.adjacency_.begin() + g.offsets_[v + 1]);
  g.connected_ = bfs_connected(n, g.offsets_, g.adjacency_);
  if (!g.connected_ && !allow_disconnected)
    throw std::invalid_argument("graph: disconnected");
  return g;
}

Graph Graph::from_edge_list(const std::string& text, bool allow_disconnected) {
  std::istringstream in(text);
  int n = 0;
  long long m = 0;
  if (!(in >> n >> m))
    throw std::invalid_argument("edge list: missing 'n m' header");
  std::vector<std::pair<int, int>> edge_list;
  edge_list.reserve(static_cast<std::size_t>(std::max(0LL, m)));
  int u, v;
  while (in >> u >> v) edge_list.emplace_back(u, v);
  if (!in.eof()) throw std::invalid_argument("edge list: parse failure");
  if (static_cast<long long>(edge_list.size()) != m)
    throw std::invalid_argument("edge list: declared m=" + std::to_string(m) +
                                " but found " +
                                std::to_string(edge_list.size()) + " edges");
  return from_edges(n, std::move(edge_list), allow_disconnected);
}

Graph Graph::load_file(const std::string& path, bool allow_disconnected) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_edge_list(buffer.str(), allow_disconnected);
}

Graph Graph::complete(int n) {
  if (n < 2) throw std::invalid_argument("complete: n >= 2 required");
  std::vector<std::pair<int, int>> edge_list;
  edge_list.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edge_list.emplace_back(u, v);
  return from_edges(n, std::move(edge_list));
}

Graph Graph::path(int n) {
  if (n < 2) throw std::invalid_argument("path: n >= 2 required");
  std::vector<std::pair<int, int>> edge_list;
  for (int v = 0; v + 1 < n; ++v) edge_list.emplace_back(v, v + 1);
  return from_edges(n, std::move(edge_list));
}

Graph Graph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: n >= 3 required");
  std::vector<std::pair<int, int>> edge_list;
  for (int v = 0; v < n; ++v) edge_list.emplace_back(v, (v + 1) % n);
  return from_edges(n, std::move(edge_list));
}

Graph Graph::star(int n) {
  if (n < 2) throw std::invalid_argument("star: n >= 2 required");
  std::vector<std::pair<int, int>> edge_list;
  for (int v = 1; v < n; ++v) edge_list.emplace_back(0, v);
  return from_edges(n, std::move(edge_list));
}

Graph Graph::random_regular(int n, int d, std::uint64_t seed, int retry_cap) {
  if (d < 3 || d >= n)
    throw std::invalid_argument("random_regular: need 3 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("random_regular: n*d must be even");

  Rng rng(seed);
  const int points = n * d;
  std::vector<int> free_points(points);
  std::set<std::pair<int, int>> used;
  std::vector<std::pair<int, int>> edge_list;

  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    std::iota(free_points.begin(), free_points.end(), 0);
    used.clear();
    edge_list.clear();
    int remaining = points;
    bool dead_end = false;
    while (remaining > 0 && !dead_end) {
      // Pair a random free point with another; reject pairings that would
      // create a loop or repeat an edge. Bounded local retries, then the
      // whole matching restarts.
      const int tries_cap = 64;
      int tries = 0;
      for (;; ++tries) {
        if (tries >= tries_cap) {
          dead_end = true;
          break;
        }
        const auto i = static_cast<std::size_t>(rng.below(remaining));
        auto j = static_cast<std::size_t>(rng.below(remaining - 1));
        if (j >= i) ++j;
        int u = free_points[i] / d;
        int v = free_points[j] / d;
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (used.count({u, v})) continue;
        used.insert({u, v});
        edge_list.emplace_back(u, v);
        const auto hi = std::max(i, j), lo = std::min(i, j);
        std::swap(free_points[hi], free_points[remaining - 1]);
        std::swap(free_points[lo], free_points[remaining - 2]);
        remaining -= 2;
        break;
      }
    }
    if (dead_end) continue;
    Graph g = from_edges(n, edge_list, /*allow_disconnected=*/true);
    if (g.connected()) return g;
  }
  throw std::runtime_error("random_regular: retry cap exceeded");
}

Graph Graph::gnp(int n, double p, std::uint64_t seed, int retry_cap) {
  if (n < 2) throw std::invalid_argument("gnp: n >= 2 required");
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("gnp: p must be in [0,1]");
  Rng rng(seed);
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    std::vector<std::pair<int, int>> edge_list;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (p >= 1.0 || rng.unit() < p) edge_list.emplace_back(u, v);
    Graph g = from_edges(n, std::move(edge_list), /*allow_disconnected=*/true);
    if (g.connected()) return g;
    if (p == 0.0) break;  // can never connect
  }
  throw std::runtime_error("gnp: disconnected (no connected sample within cap)");
}

bool Graph::is_regular() const {
  for (int v = 1; v < n_; ++v)
    if (degree(v) != degree(0)) return false;
  return true;
}

bool Graph::is_bipartite() const {
  std::vector<int> color(n_, -1);
  std::queue<int> queue;
  for (int start = 0; start < n_; ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    queue.push(start);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (const int u : neighbors(v)) {
        if (color[u] == -1) {
          color[u] = 1 - color[v];
          queue.push(u);
        } else if (color[u] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

StationaryDistribution Graph::stationary() const {
  StationaryDistribution s;
  s.pi.resize(n_);
  s.pi_min = 1.0;
  double sq = 0.0;
  for (int v = 0; v < n_; ++v) {
    s.pi[v] = pi(v);
    s.pi_min = std::min(s.pi_min, s.pi[v]);
    s.pi_inf_norm = std::max(s.pi_inf_norm, s.pi[v]);
    sq += s.pi[v] * s.pi[v];
  }
  s.pi_2_norm = std::sqrt(sq);
  return s;
}

std::string Graph::to_edge_list() const {
  std::ostringstream out;
  out << n_ << ' ' << m_ << '\n';
  for (const auto& [u, v] : edges_) out << u << ' ' << v << '\n';
  return out.str();
}

Graph Graph::family(const std::string& name, int n, int d, double p,
                    std::uint64_t seed) {
  if (name == "complete") return complete(n);
  if (name == "path") return path(n);
  if (name == "cycle") return cycle(n);
  if (name == "star") return star(n);
  if (name == "regular") return random_regular(n, d, seed);
  if (name == "gnp") return gnp(n, p, seed);
  throw std::invalid_argument("unknown graph family: " + name);
}

}  // namespace divsim
