#pragma once

#include <string>
#include <vector>

#include "divsim/dynamics.hpp"
#include "divsim/graph.hpp"
#include "divsim/rng.hpp"

namespace divsim {

// Which extreme class of the incremental chain the pull chain's B-side tracks:
// s_side starts B = A_s(0) (holders of the smallest initial opinion),
// ell_side starts B = A_ell(0).
enum class CouplingMode { s_side, ell_side };

const char* to_string(CouplingMode mode);
CouplingMode parse_coupling_mode(const std::string& text);

struct CoupledRunResult {
  TrajectoryResult div;   // incremental-update chain
  TrajectoryResult pull;  // two-opinion pull chain; opinion 1 marks B
  long long steps = 0;
  long long violations = 0;   // steps where the domination invariant failed
  bool consequence_ok = true; // B consumed implies the tracked class was empty
};

// Runs both chains on identical (v,w) draws; the pull chain updates by
// membership copy (v joins B iff w is in B, which is exactly a pull step on
// opinions {1,2}). After every step checks the domination invariant: the
// tracked extreme class stays inside B and the opposite extreme class stays
// outside it. Runs until both chains absorb or step_cap.
CoupledRunResult coupled_run(const Graph& g,
                             const std::vector<int>& div_initial, int k,
                             CouplingMode mode, ProcessKind kind, Rng& rng,
                             long long step_cap);

}  // namespace divsim
