#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "divsim/dynamics.hpp"
#include "divsim/graph.hpp"
#include "divsim/rng.hpp"
#include "doctest.h"

using divsim::Graph;
using divsim::OpinionState;
using divsim::ProcessKind;
using divsim::Rng;
using divsim::UpdateRule;

namespace {

std::vector<int> striped(int n, int k) {
  std::vector<int> x(n);
  for (int v = 0; v < n; ++v) x[v] = v % k + 1;
  return x;
}

}  // namespace

TEST_CASE("incremental update moves one unit toward the neighbor") {
  CHECK_EQ(divsim::div_update(1, 3), 2);
  CHECK_EQ(divsim::div_update(3, 1), 2);
  CHECK_EQ(divsim::div_update(2, 2), 2);
  CHECK_EQ(divsim::div_update(7, 7), 7);
  CHECK_EQ(divsim::div_update(4, 5), 5);
  CHECK_EQ(divsim::div_update(5, 4), 4);
}

TEST_CASE("kind and rule names round-trip") {
  CHECK_EQ(divsim::parse_process_kind("vertex"), ProcessKind::vertex);
  CHECK_EQ(divsim::parse_process_kind("edge"), ProcessKind::edge);
  CHECK_EQ(divsim::parse_update_rule("div"), UpdateRule::div);
  CHECK_EQ(divsim::parse_update_rule("pull"), UpdateRule::pull);
  CHECK_EQ(divsim::to_string(ProcessKind::vertex), std::string("vertex"));
  CHECK_EQ(divsim::to_string(UpdateRule::pull), std::string("pull"));
  CHECK_THROWS_AS(divsim::parse_process_kind("both"), std::invalid_argument);
  CHECK_THROWS_AS(divsim::parse_update_rule("push"), std::invalid_argument);
}

TEST_CASE("pair selection returns adjacent pairs with the right frequencies") {
  const Graph g = Graph::star(5);
  Rng rng(31);
  const int draws = 40000;
  std::vector<int> v_count(5, 0);
  for (int i = 0; i < draws; ++i) {
    const divsim::PairChoice pc = divsim::select_pair(g, ProcessKind::vertex, rng);
    REQUIRE(pc.v >= 0);
    REQUIRE(pc.v < 5);
    bool adjacent = false;
    for (int w : g.neighbors(pc.v)) adjacent |= (w == pc.w);
    REQUIRE(adjacent);
    ++v_count[pc.v];
  }
  // vertex process: v uniform over n, so each count is near draws/5
  for (int v = 0; v < 5; ++v) {
    CHECK(v_count[v] > draws / 5 - 5 * 80);  // 5 sigma, sigma ~= 80
    CHECK(v_count[v] < draws / 5 + 5 * 80);
  }

  // edge process: each ordered (u,w) has probability 1/2m
  std::vector<std::vector<int>> pair_count(5, std::vector<int>(5, 0));
  for (int i = 0; i < draws; ++i) {
    const divsim::PairChoice pc = divsim::select_pair(g, ProcessKind::edge, rng);
    bool adjacent = false;
    for (int w : g.neighbors(pc.v)) adjacent |= (w == pc.w);
    REQUIRE(adjacent);
    ++pair_count[pc.v][pc.w];
  }
  for (const auto& [u, w] : g.edges()) {
    CHECK(pair_count[u][w] > draws / 8 - 5 * 67);  // sigma ~= 66.1
    CHECK(pair_count[u][w] < draws / 8 + 5 * 67);
    CHECK(pair_count[w][u] > draws / 8 - 5 * 67);
    CHECK(pair_count[w][u] < draws / 8 + 5 * 67);
  }
}

TEST_CASE("opinion state bookkeeping matches a direct recomputation") {
  const Graph g = Graph::gnp(30, 0.2, 11);
  const std::vector<int> x = striped(30, 5);
  OpinionState st(g, x, 5);
  CHECK_EQ(st.n(), 30);
  CHECK_EQ(st.k(), 5);
  CHECK_EQ(st.min_present(), 1);
  CHECK_EQ(st.max_present(), 5);
  CHECK_FALSE(st.consensus());

  long long s = 0;
  double z = 0.0, mass = 0.0;
  std::vector<long long> counts(6, 0);
  for (int v = 0; v < 30; ++v) {
    s += x[v];
    z += 30.0 * g.pi(v) * x[v];
    ++counts[x[v]];
  }
  CHECK_EQ(st.total(), s);
  CHECK(st.weighted_total() == doctest::Approx(z).epsilon(1e-12));
  for (int i = 1; i <= 5; ++i) {
    CHECK_EQ(st.count(i), counts[i]);
    mass += st.pi_mass(i);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(st.bookkeeping_drift() <= 1e-13);

  CHECK_THROWS_AS(OpinionState(g, striped(30, 5), 4), std::invalid_argument);
  CHECK_THROWS_AS(OpinionState(g, std::vector<int>(29, 1), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(st.count(0), std::out_of_range);
  CHECK_THROWS_AS(st.pi_mass(6), std::out_of_range);
}

TEST_CASE("edge and vertex weights coincide exactly on regular graphs") {
  const Graph g = Graph::complete(6);
  OpinionState st(g, striped(6, 3), 3);
  CHECK_EQ(st.weighted_total(), static_cast<double>(st.total()));
  Rng rng(17);
  for (int i = 0; i < 5000; ++i) {
    const divsim::PairChoice pc = divsim::select_pair(g, ProcessKind::vertex, rng);
    st.apply_div(pc.v, pc.w);
    REQUIRE_EQ(st.weighted_total(), static_cast<double>(st.total()));
  }
}

TEST_CASE("incremental steps change weight by bounded amounts and never widen "
          "the opinion range") {
  const Graph g = Graph::gnp(25, 0.25, 5);
  OpinionState st(g, striped(25, 4), 4);
  double z_cap = 0.0;  // n * max_v pi(v), the largest possible Z increment
  for (int v = 0; v < 25; ++v)
    z_cap = std::max(z_cap, 25.0 * g.pi(v));
  Rng rng(99);
  long long s_prev = st.total();
  double z_prev = st.weighted_total();
  const int mn0 = st.min_present(), mx0 = st.max_present();
  for (int step = 0; step < 20000; ++step) {
    const divsim::PairChoice pc = divsim::select_pair(g, ProcessKind::vertex, rng);
    st.apply_div(pc.v, pc.w);
    REQUIRE(std::llabs(st.total() - s_prev) <= 1);
    REQUIRE(std::abs(st.weighted_total() - z_prev) <= z_cap + 1e-12);
    REQUIRE(st.min_present() >= mn0);
    REQUIRE(st.max_present() <= mx0);
    s_prev = st.total();
    z_prev = st.weighted_total();
  }
  CHECK(st.bookkeeping_drift() <= 1e-9);
}

TEST_CASE("pull adopts the neighbor opinion wholesale") {
  const Graph g = Graph::complete(4);
  OpinionState st(g, {1, 4, 2, 3}, 4);
  st.apply_pull(0, 1);
  CHECK_EQ(st.opinion(0), 4);
  st.apply(UpdateRule::pull, 2, 1);
  CHECK_EQ(st.opinion(2), 4);
  st.apply(UpdateRule::div, 3, 1);  // 3 toward 4 moves one unit
  CHECK_EQ(st.opinion(3), 4);
  CHECK(st.consensus());
  CHECK_EQ(st.min_present(), 4);
}

TEST_CASE("a vanished extreme opinion never returns") {
  const Graph g = Graph::complete(5);
  OpinionState st(g, {1, 1, 2, 2, 3}, 3);
  Rng rng(7);
  bool vanished = false;
  for (int step = 0; step < 20000 && !st.consensus(); ++step) {
    const divsim::PairChoice pc = divsim::select_pair(g, ProcessKind::vertex, rng);
    st.apply_div(pc.v, pc.w);
    if (st.count(3) == 0) vanished = true;
    if (vanished) {
      REQUIRE_EQ(st.count(3), 0);
      REQUIRE_EQ(st.pi_mass(3), 0.0);
      REQUIRE(st.max_present() <= 2);
    }
  }
  CHECK(st.consensus());  // K5 reaches consensus well within the budget
}

TEST_CASE("consensus initial condition finishes immediately") {
  const Graph g = Graph::path(4);
  OpinionState st(g, {2, 2, 2, 2}, 3);
  Rng rng(1);
  const divsim::TrajectoryResult res =
      divsim::run(g, st, ProcessKind::vertex, UpdateRule::div, rng, {});
  REQUIRE(res.winner.has_value());
  CHECK_EQ(*res.winner, 2);
  CHECK_EQ(*res.consensus_step, 0);
  CHECK_EQ(*res.two_left_step, 0);
  CHECK_EQ(res.steps_taken, 0);
  CHECK_FALSE(res.cap_hit);
}

TEST_CASE("trajectories are reproducible for a fixed seed") {
  const Graph g = Graph::complete(8);
  for (int trial = 0; trial < 3; ++trial) {
    OpinionState a(g, striped(8, 4), 4), b(g, striped(8, 4), 4);
    Rng ra(55), rb(55);
    const auto res_a = divsim::run(g, a, ProcessKind::edge, UpdateRule::div, ra, {});
    const auto res_b = divsim::run(g, b, ProcessKind::edge, UpdateRule::div, rb, {});
    REQUIRE_EQ(res_a.winner.has_value(), res_b.winner.has_value());
    CHECK_EQ(*res_a.winner, *res_b.winner);
    CHECK_EQ(*res_a.consensus_step, *res_b.consensus_step);
    CHECK_EQ(res_a.steps_taken, res_b.steps_taken);
  }
}

TEST_CASE("step cap halts long runs without declaring a winner") {
  const Graph g = Graph::path(30);
  std::vector<int> x(30, 1);
  for (int v = 15; v < 30; ++v) x[v] = 3;
  OpinionState st(g, x, 3);
  Rng rng(5);
  divsim::RunOptions opts;
  opts.step_cap = 10;
  const auto res = divsim::run(g, st, ProcessKind::vertex, UpdateRule::div, rng, opts);
  CHECK_FALSE(res.winner.has_value());
  CHECK(res.cap_hit);
  CHECK_EQ(res.steps_taken, 10);
}

TEST_CASE("two-left time is zero when only adjacent opinions remain") {
  const Graph g = Graph::complete(4);
  OpinionState st(g, {1, 1, 2, 2}, 3);
  Rng rng(2);
  const auto res = divsim::run(g, st, ProcessKind::vertex, UpdateRule::div, rng, {});
  CHECK_EQ(*res.two_left_step, 0);
  REQUIRE(res.winner.has_value());
  CHECK((*res.winner == 1 || *res.winner == 2));
}

TEST_CASE("extreme-mass thresholds follow the input order and record first "
          "hits") {
  const Graph g = Graph::complete(4);
  OpinionState st(g, {1, 1, 2, 2}, 2);
  Rng rng(9);
  divsim::RunOptions opts;
  opts.eps_list = {0.25, 1.0};  // deliberately ascending
  const auto res = divsim::run(g, st, ProcessKind::vertex, UpdateRule::div, rng, opts);
  REQUIRE_EQ(res.extr_hits.size(), 2);
  CHECK_EQ(res.extr_hits[0].first, 0.25);
  CHECK_EQ(res.extr_hits[1].first, 1.0);
  REQUIRE(res.extr_hits[1].second.has_value());
  CHECK_EQ(*res.extr_hits[1].second, 0);  // min mass 0.5 <= 1 at the start
  REQUIRE(res.winner.has_value());
  REQUIRE(res.extr_hits[0].second.has_value());  // consensus kills one extreme
  CHECK(*res.extr_hits[0].second <= *res.consensus_step);
}

TEST_CASE("checkpoints past consensus report the absorbed weight") {
  const Graph g = Graph::complete(3);
  OpinionState st(g, {1, 2, 3}, 3);
  Rng rng(13);
  divsim::RunOptions opts;
  opts.weight_checkpoints = {0, 1000000};
  const auto res = divsim::run(g, st, ProcessKind::edge, UpdateRule::div, rng, opts);
  REQUIRE(res.winner.has_value());
  REQUIRE_EQ(res.checkpoint_weights.size(), 2);
  CHECK_EQ(res.checkpoint_weights[0].first, 0);
  CHECK_EQ(res.checkpoint_weights[0].second, 6.0);  // 1+2+3
  CHECK_EQ(res.checkpoint_weights[1].first, 1000000);
  CHECK_EQ(res.checkpoint_weights[1].second, 3.0 * *res.winner);
}

TEST_CASE("weight samples land on the stride and at the final step") {
  const Graph g = Graph::path(12);
  std::vector<int> x(12, 1);
  for (int v = 6; v < 12; ++v) x[v] = 2;
  OpinionState st(g, x, 2);
  Rng rng(3);
  divsim::RunOptions opts;
  opts.sample_stride = 7;
  const auto res = divsim::run(g, st, ProcessKind::vertex, UpdateRule::div, rng, opts);
  REQUIRE_FALSE(res.weight_samples.empty());
  CHECK_EQ(res.weight_samples.front().step, 0);
  CHECK_EQ(res.weight_samples.back().step, res.steps_taken);
  for (size_t i = 1; i + 1 < res.weight_samples.size(); ++i)
    CHECK_EQ(res.weight_samples[i].step % 7, 0);
}

TEST_CASE("long runs keep incremental bookkeeping within tolerance") {
  const Graph g = Graph::gnp(40, 0.15, 21);
  std::vector<int> x(40);
  for (int v = 0; v < 40; ++v) x[v] = v % 6 + 1;
  OpinionState st(g, x, 6);
  Rng rng(77);
  divsim::RunOptions opts;
  opts.recompute_every = 5000;
  const auto res = divsim::run(g, st, ProcessKind::vertex, UpdateRule::div, rng, opts);
  CHECK(res.max_drift <= 1e-9);
  CHECK(res.max_drift >= 0.0);
}

TEST_CASE("initial condition specs") {
  Rng rng(20);
  SUBCASE("uniform draws opinions in range, deterministically per seed") {
    const divsim::InitialCondition a = divsim::parse_initial_spec("uniform:3", 50, rng);
    CHECK_EQ(a.k, 3);
    CHECK_EQ(a.opinions.size(), 50);
    for (int v : a.opinions) {
      CHECK(v >= 1);
      CHECK(v <= 3);
    }
    Rng r1(4), r2(4);
    const auto b = divsim::parse_initial_spec("uniform:5", 30, r1);
    const auto c = divsim::parse_initial_spec("uniform:5", 30, r2);
    CHECK(b.opinions == c.opinions);
  }
  SUBCASE("blocks fill vertices in order, with ascii or multiplication sign") {
    const auto a = divsim::parse_initial_spec("blocks:2x1,3x4", 5, rng);
    CHECK_EQ(a.k, 4);
    CHECK(a.opinions == std::vector<int>{1, 1, 4, 4, 4});
    const auto b = divsim::parse_initial_spec("blocks:2\xc3\x97" "1,1\xc3\x97" "2", 3, rng);
    CHECK(b.opinions == std::vector<int>{1, 1, 2});
  }
  SUBCASE("file specs read exactly n opinions") {
    const std::string path = "/tmp/divsim_test_init.txt";
    {
      std::ofstream out(path);
      out << "1 2 2\n";
    }
    const auto a = divsim::parse_initial_spec("file:" + path, 3, rng);
    CHECK_EQ(a.k, 2);
    CHECK(a.opinions == std::vector<int>{1, 2, 2});
    CHECK_THROWS_AS(divsim::parse_initial_spec("file:" + path, 4, rng),
                    std::invalid_argument);
    std::remove(path.c_str());
  }
  SUBCASE("malformed specs are rejected") {
    CHECK_THROWS_AS(divsim::parse_initial_spec("uniform:0", 5, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(divsim::parse_initial_spec("blocks:2x1", 5, rng),
                    std::invalid_argument);  // sizes must total n
    CHECK_THROWS_AS(divsim::parse_initial_spec("blocks:2x1,4x2", 5, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(divsim::parse_initial_spec("blocks:ax1,5x2", 5, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(divsim::parse_initial_spec("stripes:3", 5, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(divsim::parse_initial_spec("file:/tmp/divsim_missing_init",
                                               5, rng),
                    std::runtime_error);
  }
}

TEST_CASE("run rejects mismatched state and bad options") {
  const Graph g = Graph::complete(4);
  const Graph h = Graph::complete(4);
  OpinionState st(h, striped(4, 2), 2);
  Rng rng(1);
  CHECK_THROWS_AS(divsim::run(g, st, ProcessKind::vertex, UpdateRule::div, rng, {}),
                  std::invalid_argument);
  OpinionState ok(g, striped(4, 2), 2);
  divsim::RunOptions bad;
  bad.sample_stride = -1;
  CHECK_THROWS_AS(divsim::run(g, ok, ProcessKind::vertex, UpdateRule::div, rng, bad),
                  std::invalid_argument);
}
