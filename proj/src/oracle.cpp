#include "divsim/oracle.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace divsim {

namespace {

// W(y): S = sum of opinions (edge kind) or Z = n sum pi_v y_v (vertex kind).
// Both reduce to an exact integer over a single division.
long double weight_of(const Graph& g, const std::vector<int>& y,
                      ProcessKind kind) {
  if (kind == ProcessKind::edge) {
    long long s = 0;
    for (const int yi : y) s += yi;
    return static_cast<long double>(s);
  }
  long long weighted = 0;  // sum d(v) y_v
  for (int v = 0; v < g.n(); ++v)
    weighted += static_cast<long long>(g.degree(v)) * y[v];
  return static_cast<long double>(weighted) * g.n() /
         static_cast<long double>(2 * g.m());
}

std::string key_of(const std::vector<int>& x) {
  std::string key(2 * x.size(), '\0');
  for (size_t i = 0; i < x.size(); ++i) {
    key[2 * i] = static_cast<char>(x[i] & 0xff);
    key[2 * i + 1] = static_cast<char>((x[i] >> 8) & 0xff);
  }
  return key;
}

}  // namespace

ChainIndex enumerate_chain(const Graph& g, const std::vector<int>& x0,
                           ProcessKind kind, UpdateRule rule,
                           long long state_cap) {
  if (static_cast<int>(x0.size()) != g.n())
    throw std::invalid_argument("opinion vector length must equal n");
  for (const int xi : x0)
    if (xi < 1 || xi > 65535)
      throw std::invalid_argument("opinions must lie in [1..65535]");
  if (state_cap < 1) throw std::invalid_argument("state cap must be >= 1");

  const int n = g.n();
  const double edge_p = 1.0 / static_cast<double>(2 * g.m());
  ChainIndex chain;
  std::unordered_map<std::string, int> index;

  const auto add_state = [&](const std::vector<int>& x) -> int {
    const std::string key = key_of(x);
    const auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (static_cast<long long>(chain.states.size()) >= state_cap)
      throw std::runtime_error("reachable state space exceeds the state cap");
    const int id = static_cast<int>(chain.states.size());
    index.emplace(key, id);
    chain.states.push_back(x);
    return id;
  };

  add_state(x0);
  for (int cur = 0; cur < static_cast<int>(chain.states.size()); ++cur) {
    const std::vector<int> x = chain.states[cur];  // states may reallocate
    const bool consensus =
        std::all_of(x.begin(), x.end(), [&](int xi) { return xi == x[0]; });
    std::map<int, double> row;
    if (consensus) {
      chain.absorbing_winner.push_back(x[0]);
      row[cur] = 1.0;
    } else {
      chain.absorbing_winner.push_back(-1);
      std::vector<int> y = x;
      for (int v = 0; v < n; ++v) {
        const double pv = kind == ProcessKind::vertex
                              ? 1.0 / (static_cast<double>(n) * g.degree(v))
                              : edge_p;
        for (const int w : g.neighbors(v)) {
          const int to =
              rule == UpdateRule::div ? div_update(x[v], x[w]) : x[w];
          int target = cur;
          if (to != x[v]) {
            y[v] = to;
            target = add_state(y);
            y[v] = x[v];
          }
          row[target] += pv;
        }
      }
    }
    chain.transitions.emplace_back(row.begin(), row.end());
  }
  return chain;
}

double one_step_expected_weight(const Graph& g, const std::vector<int>& x,
                                ProcessKind kind, UpdateRule rule) {
  if (static_cast<int>(x.size()) != g.n())
    throw std::invalid_argument("opinion vector length must equal n");
  const int n = g.n();
  const long double edge_p = 1.0L / static_cast<long double>(2 * g.m());
  long double expected = 0.0L;
  std::vector<int> y = x;
  for (int v = 0; v < n; ++v) {
    const long double pv =
        kind == ProcessKind::vertex
            ? 1.0L / (static_cast<long double>(n) * g.degree(v))
            : edge_p;
    for (const int w : g.neighbors(v)) {
      y[v] = rule == UpdateRule::div ? div_update(x[v], x[w]) : x[w];
      expected += pv * weight_of(g, y, kind);
      y[v] = x[v];
    }
  }
  return static_cast<double>(expected);
}

double WinDistribution::prob_of(int opinion) const {
  for (const auto& [c, p] : probs)
    if (c == opinion) return p;
  return 0.0;
}

namespace {

constexpr long long kDirectSolveCap = 10000;
constexpr long long kSweepCap = 10000000;
constexpr double kResidualTarget = 1e-12;

double chain_residual(const ChainIndex& chain, const std::vector<int>& transient,
                      const std::vector<double>& h) {
  double res = 0.0;
  for (const int t : transient) {
    long double acc = 0.0L;
    for (const auto& [j, p] : chain.transitions[t]) acc += (long double)p * h[j];
    res = std::max(res, std::abs(static_cast<double>(acc) - h[t]));
  }
  return res;
}

// h <- Ph on the transient block until the absorption residual is met.
// No-op when h already satisfies it (e.g. after a direct solve).
void jacobi_polish(const ChainIndex& chain, const std::vector<int>& transient,
                   std::vector<double>& h) {
  std::vector<double> next(h.size(), 0.0);
  for (long long sweep = 0; sweep <= kSweepCap; ++sweep) {
    if (chain_residual(chain, transient, h) <= kResidualTarget) return;
    for (const int t : transient) {
      long double acc = 0.0L;
      for (const auto& [j, p] : chain.transitions[t])
        acc += (long double)p * h[j];
      next[t] = static_cast<double>(acc);
    }
    for (const int t : transient) h[t] = next[t];
  }
  throw std::runtime_error("absorption solve: sweep cap exceeded");
}

}  // namespace

WinDistribution exact_win_distribution(const Graph& g,
                                       const std::vector<int>& x0,
                                       ProcessKind kind, UpdateRule rule,
                                       long long state_cap) {
  const ChainIndex chain = enumerate_chain(g, x0, kind, rule, state_cap);
  const int total = static_cast<int>(chain.state_count());

  std::vector<int> transient;
  std::vector<int> tpos(total, -1);
  std::vector<int> winners;
  for (int i = 0; i < total; ++i) {
    if (chain.absorbing_winner[i] >= 0) {
      winners.push_back(chain.absorbing_winner[i]);
    } else {
      tpos[i] = static_cast<int>(transient.size());
      transient.push_back(i);
    }
  }
  std::sort(winners.begin(), winners.end());
  winners.erase(std::unique(winners.begin(), winners.end()), winners.end());

  const int nt = static_cast<int>(transient.size());
  const bool direct = nt > 0 && nt <= kDirectSolveCap;

  // One factorization of I - Q serves every absorption target.
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  if (direct) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int r = 0; r < nt; ++r) {
      const int t = transient[r];
      double diag = 1.0;
      for (const auto& [j, p] : chain.transitions[t]) {
        if (j == t)
          diag -= p;
        else if (tpos[j] >= 0)
          trips.emplace_back(r, tpos[j], -p);
      }
      trips.emplace_back(r, r, diag);
    }
    Eigen::SparseMatrix<double> A(nt, nt);
    A.setFromTriplets(trips.begin(), trips.end());
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("absorption solve: factorization failed");
  }

  WinDistribution out;
  out.states = total;
  long double prob_sum = 0.0L;
  for (const int c : winners) {
    std::vector<double> h(total, 0.0);
    for (int i = 0; i < total; ++i)
      if (chain.absorbing_winner[i] == c) h[i] = 1.0;
    if (nt > 0) {
      if (direct) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(nt);
        for (int r = 0; r < nt; ++r)
          for (const auto& [j, p] : chain.transitions[transient[r]])
            if (tpos[j] < 0) b[r] += p * h[j];
        const Eigen::VectorXd sol = lu.solve(b);
        if (lu.info() != Eigen::Success)
          throw std::runtime_error("absorption solve: back-substitution failed");
        for (int r = 0; r < nt; ++r) h[transient[r]] = sol[r];
      }
      jacobi_polish(chain, transient, h);
    }
    out.residual =
        std::max(out.residual, chain_residual(chain, transient, h));
    out.probs.emplace_back(c, h[0]);
    prob_sum += h[0];
  }
  if (std::abs(static_cast<double>(prob_sum) - 1.0) > 1e-10)
    throw std::logic_error("absorption probabilities do not sum to 1");
  return out;
}

FinalStageCheck exact_final_stage_check(const Graph& g,
                                        const std::vector<int>& x0,
                                        ProcessKind kind) {
  const std::set<int> present(x0.begin(), x0.end());
  if (present.empty())
    throw std::invalid_argument("opinion vector must be non-empty");
  if (present.size() > 2)
    throw std::invalid_argument("final stage requires at most two opinions");
  const int lo = *present.begin();
  const int hi = *present.rbegin();
  if (hi - lo > 1)
    throw std::invalid_argument("final stage requires adjacent opinions");

  FinalStageCheck out;
  out.i = lo;
  out.c_prime =
      static_cast<double>(weight_of(g, x0, kind) / g.n());
  out.p = (lo + 1) - out.c_prime;
  out.q = out.c_prime - lo;

  const WinDistribution dist =
      exact_win_distribution(g, x0, kind, UpdateRule::div);
  out.max_error = std::max(std::abs(out.p - dist.prob_of(lo)),
                           std::abs(out.q - dist.prob_of(lo + 1)));
  return out;
}

}  // namespace divsim
