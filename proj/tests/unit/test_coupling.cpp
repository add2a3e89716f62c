#include <stdexcept>
#include <vector>

#include "divsim/coupling.hpp"
#include "divsim/graph.hpp"
#include "divsim/rng.hpp"
#include "doctest.h"

using divsim::CouplingMode;
using divsim::Graph;
using divsim::ProcessKind;
using divsim::Rng;

TEST_CASE("coupling mode names round-trip") {
  CHECK_EQ(divsim::parse_coupling_mode("s-side"), CouplingMode::s_side);
  CHECK_EQ(divsim::parse_coupling_mode("ell-side"), CouplingMode::ell_side);
  CHECK_EQ(divsim::parse_coupling_mode("s"), CouplingMode::s_side);
  CHECK_EQ(divsim::parse_coupling_mode("ell"), CouplingMode::ell_side);
  CHECK_EQ(divsim::to_string(CouplingMode::s_side), std::string("s-side"));
  CHECK_EQ(divsim::to_string(CouplingMode::ell_side), std::string("ell-side"));
  CHECK_THROWS_AS(divsim::parse_coupling_mode("mid"), std::invalid_argument);
}

TEST_CASE("single edge: both chains absorb together in one step") {
  const Graph g = Graph::complete(2);
  Rng rng(4);
  const divsim::CoupledRunResult res = divsim::coupled_run(
      g, {1, 2}, 2, CouplingMode::s_side, ProcessKind::vertex, rng, 1000);
  CHECK_EQ(res.violations, 0);
  CHECK(res.consequence_ok);
  CHECK_EQ(res.steps, 1);
  REQUIRE(res.div.winner.has_value());
  REQUIRE(res.pull.winner.has_value());
}

TEST_CASE("domination invariant holds pathwise across seeds, modes, kinds") {
  const Graph g = Graph::gnp(12, 0.4, 2);
  std::vector<int> x(12);
  for (int v = 0; v < 12; ++v) x[v] = v % 4 + 1;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    for (CouplingMode mode : {CouplingMode::s_side, CouplingMode::ell_side}) {
      for (ProcessKind kind : {ProcessKind::vertex, ProcessKind::edge}) {
        Rng rng(seed);
        const divsim::CoupledRunResult res =
            divsim::coupled_run(g, x, 4, mode, kind, rng, 200000);
        REQUIRE_EQ(res.violations, 0);
        REQUIRE(res.consequence_ok);
        REQUIRE(res.div.winner.has_value());
        REQUIRE(res.pull.winner.has_value());
        REQUIRE_FALSE(res.div.cap_hit);
        REQUIRE_FALSE(res.pull.cap_hit);
      }
    }
  }
}

TEST_CASE("coupled runs are reproducible for a fixed seed") {
  const Graph g = Graph::complete(9);
  std::vector<int> x(9);
  for (int v = 0; v < 9; ++v) x[v] = v % 3 + 1;
  Rng ra(123), rb(123);
  const auto a = divsim::coupled_run(g, x, 3, CouplingMode::ell_side,
                                     ProcessKind::edge, ra, 100000);
  const auto b = divsim::coupled_run(g, x, 3, CouplingMode::ell_side,
                                     ProcessKind::edge, rb, 100000);
  CHECK_EQ(a.steps, b.steps);
  CHECK_EQ(*a.div.winner, *b.div.winner);
  CHECK_EQ(*a.pull.winner, *b.pull.winner);
}

TEST_CASE("coupling needs at least two distinct opinions") {
  const Graph g = Graph::complete(3);
  Rng rng(1);
  CHECK_THROWS_AS(divsim::coupled_run(g, {2, 2, 2}, 3, CouplingMode::s_side,
                                      ProcessKind::vertex, rng, 100),
                  std::invalid_argument);
  CHECK_THROWS_AS(divsim::coupled_run(g, {1, 2, 2}, 2, CouplingMode::s_side,
                                      ProcessKind::vertex, rng, 0),
                  std::invalid_argument);
}
