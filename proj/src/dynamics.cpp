#include "divsim/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace divsim {

const char* to_string(ProcessKind kind) {
  return kind == ProcessKind::vertex ? "vertex" : "edge";
}

const char* to_string(UpdateRule rule) {
  return rule == UpdateRule::div ? "div" : "pull";
}

ProcessKind parse_process_kind(const std::string& text) {
  if (text == "vertex") return ProcessKind::vertex;
  if (text == "edge") return ProcessKind::edge;
  throw std::invalid_argument("process kind must be 'vertex' or 'edge'");
}

UpdateRule parse_update_rule(const std::string& text) {
  if (text == "div") return UpdateRule::div;
  if (text == "pull") return UpdateRule::pull;
  throw std::invalid_argument("update rule must be 'div' or 'pull'");
}

PairChoice select_pair(const Graph& g, ProcessKind kind, Rng& rng) {
  if (kind == ProcessKind::vertex) {
    const int v = static_cast<int>(rng.below(g.n()));
    const auto nb = g.neighbors(v);
    return {v, nb[static_cast<size_t>(rng.below(nb.size()))]};
  }
  const auto& e = g.edges()[static_cast<size_t>(rng.below(g.edges().size()))];
  return rng.below(2) == 0 ? PairChoice{e.first, e.second}
                           : PairChoice{e.second, e.first};
}

OpinionState::OpinionState(const Graph& g, std::vector<int> opinions, int k)
    : graph_(&g), k_(k), x_(std::move(opinions)) {
  if (k_ < 1) throw std::invalid_argument("opinion bound k must be >= 1");
  if (static_cast<int>(x_.size()) != g.n())
    throw std::invalid_argument("opinion vector length must equal n");
  for (const int xi : x_)
    if (xi < 1 || xi > k_)
      throw std::invalid_argument("opinions must lie in [1..k]");
  const int n = g.n();
  pi_.resize(n);
  zw_.resize(n);
  for (int v = 0; v < n; ++v) {
    pi_[v] = g.pi(v);
    zw_[v] = g.vertex_weight(v);
  }
  counts_.assign(k_ + 1, 0);
  pi_mass_.assign(k_ + 1, 0.0);
  recompute(counts_, pi_mass_, min_present_, max_present_, s_total_, z_total_);
}

int OpinionState::check_opinion(int i) const {
  if (i < 1 || i > k_) throw std::out_of_range("opinion outside [1..k]");
  return i;
}

void OpinionState::recompute(std::vector<long long>& counts,
                             std::vector<double>& pi_mass, int& mn, int& mx,
                             long long& s, double& z) const {
  std::fill(counts.begin(), counts.end(), 0);
  std::fill(pi_mass.begin(), pi_mass.end(), 0.0);
  s = 0;
  z = 0.0;
  for (size_t v = 0; v < x_.size(); ++v) {
    const int xi = x_[v];
    ++counts[xi];
    pi_mass[xi] += pi_[v];
    s += xi;
    z += zw_[v] * xi;
  }
  mn = 1;
  while (counts[mn] == 0) ++mn;
  mx = k_;
  while (counts[mx] == 0) --mx;
}

void OpinionState::move_vertex(int v, int to) {
  const int from = x_[v];
  if (from == to) return;
  if (to < 1 || to > k_)
    throw std::logic_error("update moved an opinion outside [1..k]");
  x_[v] = to;
  --counts_[from];
  ++counts_[to];
  pi_mass_[from] -= pi_[v];
  if (counts_[from] == 0) pi_mass_[from] = 0.0;
  pi_mass_[to] += pi_[v];
  s_total_ += to - from;
  z_total_ += zw_[v] * (to - from);
  if (to < min_present_) min_present_ = to;
  if (to > max_present_) max_present_ = to;
  if (counts_[from] == 0) {
    if (from == min_present_)
      while (counts_[min_present_] == 0) ++min_present_;
    if (from == max_present_)
      while (counts_[max_present_] == 0) --max_present_;
  }
}

double OpinionState::bookkeeping_drift() const {
  std::vector<long long> counts(k_ + 1, 0);
  std::vector<double> pi_mass(k_ + 1, 0.0);
  int mn = 0, mx = 0;
  long long s = 0;
  double z = 0.0;
  recompute(counts, pi_mass, mn, mx, s, z);
  if (counts != counts_ || s != s_total_ || mn != min_present_ ||
      mx != max_present_)
    return std::numeric_limits<double>::infinity();
  double drift = std::abs(z - z_total_);
  for (int i = 1; i <= k_; ++i)
    drift = std::max(drift, std::abs(pi_mass[i] - pi_mass_[i]));
  return drift;
}

void OpinionState::refresh() {
  if (bookkeeping_drift() > 1e-9)
    throw std::logic_error("opinion-state bookkeeping drifted beyond 1e-9");
  recompute(counts_, pi_mass_, min_present_, max_present_, s_total_, z_total_);
}

TrajectoryResult run(const Graph& g, OpinionState& state, ProcessKind kind,
                     UpdateRule rule, Rng& rng, const RunOptions& opts) {
  if (&state.graph() != &g)
    throw std::invalid_argument("run: state belongs to a different graph");
  const long long cap = opts.step_cap > 0
                            ? opts.step_cap
                            : 50LL * g.n() * static_cast<long long>(g.n());
  if (opts.step_cap < 0 || opts.sample_stride < 0 || opts.recompute_every < 0)
    throw std::invalid_argument("run: options must be non-negative");

  TrajectoryResult out;
  out.initial_min = state.min_present();
  out.initial_max = state.max_present();
  out.s0 = state.total();
  out.z0 = state.weighted_total();
  const int s0 = out.initial_min;
  const int l0 = out.initial_max;

  // Thresholds are consumed largest-first as the extreme masses decay.
  std::vector<size_t> eps_order(opts.eps_list.size());
  std::iota(eps_order.begin(), eps_order.end(), size_t{0});
  std::sort(eps_order.begin(), eps_order.end(), [&](size_t a, size_t b) {
    return opts.eps_list[a] > opts.eps_list[b];
  });
  out.extr_hits.reserve(opts.eps_list.size());
  for (const double eps : opts.eps_list)
    out.extr_hits.emplace_back(eps, std::nullopt);
  size_t eps_idx = 0;
  const auto eps_check = [&](long long step) {
    if (eps_idx >= eps_order.size()) return;
    const double q = std::min(state.pi_mass(s0), state.pi_mass(l0));
    while (eps_idx < eps_order.size() &&
           q <= opts.eps_list[eps_order[eps_idx]]) {
      out.extr_hits[eps_order[eps_idx]].second = step;
      ++eps_idx;
    }
  };

  std::vector<long long> checkpoints = opts.weight_checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  if (!checkpoints.empty() && checkpoints.front() < 0)
    throw std::invalid_argument("run: negative weight checkpoint");
  size_t cp_idx = 0;
  const auto cp_check = [&](long long step) {
    while (cp_idx < checkpoints.size() && checkpoints[cp_idx] == step) {
      out.checkpoint_weights.emplace_back(step, state.weight(kind));
      ++cp_idx;
    }
  };

  const auto sample = [&](long long step) {
    out.weight_samples.push_back(
        {step, state.total(), state.weighted_total()});
  };

  eps_check(0);
  cp_check(0);
  if (opts.sample_stride > 0) sample(0);
  if (state.max_present() - state.min_present() <= 1) out.two_left_step = 0;
  if (state.consensus()) {
    out.winner = state.min_present();
    out.consensus_step = 0;
  }

  long long t = 0;
  while (!out.winner && t < cap) {
    ++t;
    const PairChoice pair = select_pair(g, kind, rng);
    state.apply(rule, pair.v, pair.w);
    eps_check(t);
    cp_check(t);
    if (opts.sample_stride > 0 && t % opts.sample_stride == 0) sample(t);
    if (!out.two_left_step &&
        state.max_present() - state.min_present() <= 1)
      out.two_left_step = t;
    if (state.consensus()) {
      out.winner = state.min_present();
      out.consensus_step = t;
    } else if (opts.recompute_every > 0 && t % opts.recompute_every == 0) {
      out.max_drift = std::max(out.max_drift, state.bookkeeping_drift());
      state.refresh();
    }
  }
  out.steps_taken = t;
  out.max_drift = std::max(out.max_drift, state.bookkeeping_drift());
  if (!out.winner) {
    out.cap_hit = true;  // later checkpoints unreachable, leave them out
  } else {
    for (; cp_idx < checkpoints.size(); ++cp_idx)
      out.checkpoint_weights.emplace_back(checkpoints[cp_idx],
                                          state.weight(kind));
  }
  if (opts.sample_stride > 0 && out.weight_samples.back().step != t) sample(t);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int parse_positive(const std::string& token, const char* what) {
  int value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || value < 1)
    throw std::invalid_argument(std::string(what) + " must be a positive integer, got '" +
                                token + "'");
  return value;
}

}  // namespace

InitialCondition parse_initial_spec(const std::string& spec, int n, Rng& rng) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument(
        "initial spec must be uniform:K, blocks:AxC,..., or file:PATH");
  const std::string head = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  if (head == "uniform") {
    const int k = parse_positive(trim(body), "uniform opinion bound");
    std::vector<int> x(n);
    for (int v = 0; v < n; ++v)
      x[v] = static_cast<int>(rng.below(static_cast<uint64_t>(k))) + 1;
    return {std::move(x), k};
  }

  if (head == "blocks") {
    std::vector<int> x;
    x.reserve(n);
    int k = 1;
    size_t pos = 0;
    while (pos <= body.size()) {
      const size_t comma = std::min(body.find(',', pos), body.size());
      const std::string seg = trim(body.substr(pos, comma - pos));
      pos = comma + 1;
      size_t sep = seg.find('x');
      size_t sep_len = 1;
      if (sep == std::string::npos) {
        sep = seg.find("\xc3\x97");  // multiplication sign
        sep_len = 2;
      }
      if (sep == std::string::npos)
        throw std::invalid_argument("block segment must look like 3x1, got '" +
                                    seg + "'");
      const int size = parse_positive(trim(seg.substr(0, sep)), "block size");
      const int c = parse_positive(trim(seg.substr(sep + sep_len)), "block opinion");
      if (static_cast<long long>(x.size()) + size > n)
        throw std::invalid_argument("block sizes must sum to n");
      x.insert(x.end(), size, c);
      k = std::max(k, c);
      if (comma == body.size()) break;
    }
    if (static_cast<int>(x.size()) != n)
      throw std::invalid_argument("block sizes must sum to n");
    return {std::move(x), k};
  }

  if (head == "file") {
    std::ifstream in(body);
    if (!in) throw std::runtime_error("cannot open opinion file: " + body);
    std::vector<int> x;
    int value = 0;
    while (in >> value) x.push_back(value);
    if (static_cast<int>(x.size()) != n)
      throw std::invalid_argument("opinion file must list exactly n opinions");
    int k = 1;
    for (const int xi : x) {
      if (xi < 1) throw std::invalid_argument("opinions must be >= 1");
      k = std::max(k, xi);
    }
    return {std::move(x), k};
  }

  throw std::invalid_argument("unknown initial spec kind: " + head);
}

}  // namespace divsim
