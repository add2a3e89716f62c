#include "divsim/coupling.hpp"

#include <cmath>
#include <stdexcept>

namespace divsim {

const char* to_string(CouplingMode mode) {
  return mode == CouplingMode::s_side ? "s-side" : "ell-side";
}

CouplingMode parse_coupling_mode(const std::string& text) {
  if (text == "s-side" || text == "s") return CouplingMode::s_side;
  if (text == "ell-side" || text == "ell") return CouplingMode::ell_side;
  throw std::invalid_argument("coupling mode must be 's-side' or 'ell-side'");
}

CoupledRunResult coupled_run(const Graph& g,
                             const std::vector<int>& div_initial, int k,
                             CouplingMode mode, ProcessKind kind, Rng& rng,
                             long long step_cap) {
  if (step_cap < 1) throw std::invalid_argument("step cap must be >= 1");
  OpinionState div_state(g, div_initial, k);
  const int s0 = div_state.min_present();
  const int l0 = div_state.max_present();
  if (s0 == l0)
    throw std::invalid_argument(
        "coupled run needs at least two distinct initial opinions");

  // B holds opinion 1 in the pull chain.
  const int tracked = mode == CouplingMode::s_side ? s0 : l0;
  const int opposite = mode == CouplingMode::s_side ? l0 : s0;
  std::vector<int> pull_initial(g.n(), 2);
  for (int v = 0; v < g.n(); ++v)
    if (div_initial[v] == tracked) pull_initial[v] = 1;
  OpinionState pull_state(g, std::move(pull_initial), 2);

  // bad(v): v sits in the tracked class but outside B, or in the opposite
  // class but inside B. Each step touches only one vertex in both chains,
  // so the count maintains in O(1).
  const auto bad = [&](int v) {
    const int x = div_state.opinion(v);
    const bool in_b = pull_state.opinion(v) == 1;
    return (x == tracked && !in_b) || (x == opposite && in_b);
  };
  long long bad_count = 0;
  for (int v = 0; v < g.n(); ++v) bad_count += bad(v) ? 1 : 0;

  CoupledRunResult out;
  const auto snapshot_start = [](TrajectoryResult& r, const OpinionState& st) {
    r.initial_min = st.min_present();
    r.initial_max = st.max_present();
    r.s0 = st.total();
    r.z0 = st.weighted_total();
    if (st.max_present() - st.min_present() <= 1) r.two_left_step = 0;
    if (st.consensus()) {
      r.winner = st.min_present();
      r.consensus_step = 0;
    }
  };
  snapshot_start(out.div, div_state);
  snapshot_start(out.pull, pull_state);
  if (bad_count > 0) ++out.violations;  // malformed only if inputs conspire

  const double div_w0 = div_state.weight(kind);
  const double pull_w0 = pull_state.weight(kind);
  const auto note_step = [&](TrajectoryResult& r, const OpinionState& st,
                             long long t, double w0) {
    r.max_drift = std::max(r.max_drift, std::abs(st.weight(kind) - w0));
    if (!r.two_left_step && st.max_present() - st.min_present() <= 1)
      r.two_left_step = t;
    if (!r.winner && st.consensus()) {
      r.winner = st.min_present();
      r.consensus_step = t;
    }
  };

  long long t = 0;
  while ((!out.div.winner || !out.pull.winner) && t < step_cap) {
    ++t;
    const PairChoice pair = select_pair(g, kind, rng);
    bad_count -= bad(pair.v) ? 1 : 0;
    div_state.apply_div(pair.v, pair.w);
    pull_state.apply_pull(pair.v, pair.w);
    bad_count += bad(pair.v) ? 1 : 0;
    if (bad_count > 0) ++out.violations;
    note_step(out.div, div_state, t, div_w0);
    note_step(out.pull, pull_state, t, pull_w0);
    if (out.pull.winner && *out.pull.consensus_step == t) {
      // B (or its complement) was just consumed; the dominated class must
      // already be gone.
      const int consumed_class = *out.pull.winner == 2 ? tracked : opposite;
      if (div_state.count(consumed_class) != 0) out.consequence_ok = false;
    }
  }
  out.steps = t;
  out.div.steps_taken = t;
  out.pull.steps_taken = t;
  out.div.cap_hit = !out.div.winner;
  out.pull.cap_hit = !out.pull.winner;
  return out;
}

}  // namespace divsim
