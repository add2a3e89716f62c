#include <cmath>
#include <stdexcept>

#include "divsim/theory.hpp"
#include "doctest.h"

TEST_CASE("epsilon schedule: quadratic and linear stages with floors") {
  const divsim::EpsilonSchedule a = divsim::epsilon_schedule(100, 1.0 / 99);
  CHECK(a.eps1 == doctest::Approx(4.081216202428324e-4).epsilon(1e-12));
  CHECK(a.eps2 == doctest::Approx(0.046415888336127795).epsilon(1e-12));

  const divsim::EpsilonSchedule b = divsim::epsilon_schedule(200, 1.0 / 199);
  CHECK(b.eps1 == doctest::Approx(1.01007550314386e-4).epsilon(1e-12));
  CHECK(b.eps2 == doctest::Approx(0.029240177382128665).epsilon(1e-12));

  // floors kick in when lambda is tiny
  const divsim::EpsilonSchedule c = divsim::epsilon_schedule(100, 0.0);
  CHECK(c.eps1 == doctest::Approx(1e-4).epsilon(1e-14));
  CHECK(c.eps2 == doctest::Approx(std::pow(100.0, -2.0 / 3)).epsilon(1e-12));

  // large lambda saturates both stages at 1
  const divsim::EpsilonSchedule d = divsim::epsilon_schedule(10, 0.5);
  CHECK_EQ(d.eps1, 1.0);
  CHECK_EQ(d.eps2, 1.0);

  CHECK_THROWS_AS(divsim::epsilon_schedule(1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(divsim::epsilon_schedule(10, 1.5), std::invalid_argument);
}

TEST_CASE("horizons at a target epsilon") {
  const divsim::Horizons h = divsim::horizons(100, 0.25, 0.01, 0.01);
  CHECK(h.applicable);
  CHECK_EQ(h.t1, 1704);
  CHECK_EQ(h.t2, 170344);
  CHECK_EQ(h.tp, 603398);
  CHECK_EQ(h.tp_of_eps, 60340);

  const divsim::EpsilonSchedule s = divsim::epsilon_schedule(200, 1.0 / 199);
  const divsim::Horizons h1 = divsim::horizons(200, 1.0 / 199, 1.0 / 200, s.eps1);
  CHECK_EQ(h1.t1, 7083);
  CHECK_EQ(h1.t2, 70123405);
  CHECK_EQ(h1.tp, 1819336);
  CHECK_EQ(h1.tp_of_eps, 18285);
  const divsim::Horizons h2 = divsim::horizons(200, 1.0 / 199, 1.0 / 200, s.eps2);
  CHECK_EQ(h2.t1, 2549);
  CHECK_EQ(h2.t2, 87158);
  CHECK_EQ(h2.tp_of_eps, 311103);

  // degenerate epsilon 1/sqrt(2) zeroes the log; horizons floor at 1
  const divsim::Horizons f = divsim::horizons(100, 0.25, 0.01, 1.0 / std::sqrt(2.0));
  CHECK_EQ(f.t1, 1);

  // horizons grow as epsilon shrinks, and t2 dominates t1
  long long prev_t1 = 0, prev_t2 = 0;
  for (double eps : {0.5, 0.1, 0.01, 0.001}) {
    const divsim::Horizons cur = divsim::horizons(100, 0.25, 0.01, eps);
    CHECK(cur.t1 >= prev_t1);
    CHECK(cur.t2 >= prev_t2);
    CHECK(cur.t2 >= cur.t1);
    prev_t1 = cur.t1;
    prev_t2 = cur.t2;
  }
}

TEST_CASE("horizons near lambda = 1 are reported not applicable") {
  const divsim::Horizons h = divsim::horizons(50, 1.0, 0.02, 0.1);
  CHECK_FALSE(h.applicable);
  CHECK(h.t1 >= 1);
  CHECK(h.t2 >= 1);
  const divsim::Horizons close = divsim::horizons(50, 1.0 - 1e-12, 0.02, 0.1);
  CHECK_FALSE(close.applicable);
}

TEST_CASE("confidence-form horizons") {
  const divsim::ConfidenceHorizons c =
      divsim::horizons_at_confidence(100, 0.05, 0.25);
  CHECK_EQ(c.t1, 1199);
  CHECK_EQ(c.t2, 23966);
  CHECK_THROWS_AS(divsim::horizons_at_confidence(100, 0.05, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(divsim::horizons_at_confidence(100, 0.05, 1.5),
                  std::invalid_argument);
}

TEST_CASE("expected-time bound: order reference and structured form") {
  const divsim::ExpectedTimeBound a =
      divsim::expected_T_bound(100, 5, 0.25, 0.01);
  CHECK(a.applicable);
  CHECK(a.order_reference == doctest::Approx(29724.123495187378).epsilon(1e-12));
  CHECK(a.structured_bound == doctest::Approx(4124700.0).epsilon(1e-12));

  const divsim::ExpectedTimeBound b =
      divsim::expected_T_bound(200, 5, 1.0 / 199, 1.0 / 200);
  CHECK(b.structured_bound == doctest::Approx(1795988.0).epsilon(1e-12));

  const divsim::ExpectedTimeBound c =
      divsim::expected_T_bound(100, 3, 0.25, 0.01);
  CHECK(c.structured_bound == doctest::Approx(1707780.0).epsilon(1e-12));

  // vacuous schedule (both stages at 1) still yields a positive bound
  const divsim::ExpectedTimeBound d = divsim::expected_T_bound(10, 2, 0.5, 0.1);
  CHECK(d.structured_bound == doctest::Approx(36208.0).epsilon(1e-12));

  const divsim::ExpectedTimeBound e = divsim::expected_T_bound(50, 4, 1.0, 0.02);
  CHECK_FALSE(e.applicable);
}

TEST_CASE("final two-opinion distribution from the average opinion") {
  const divsim::FinalDistribution a = divsim::final_distribution(1.5);
  CHECK_EQ(a.i, 1);
  CHECK(a.p == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(a.q == doctest::Approx(0.5).epsilon(1e-14));
  const divsim::FinalDistribution b = divsim::final_distribution(2.25);
  CHECK_EQ(b.i, 2);
  CHECK(b.p == doctest::Approx(0.75).epsilon(1e-13));
  const divsim::FinalDistribution c = divsim::final_distribution(3.0);
  CHECK_EQ(c.i, 3);
  CHECK_EQ(c.p, 1.0);
  CHECK_EQ(c.q, 0.0);
  for (double cbar = 1.0; cbar < 5.0; cbar += 0.23) {
    const divsim::FinalDistribution f = divsim::final_distribution(cbar);
    CHECK(f.p + f.q == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(f.i <= cbar);
    CHECK(cbar < f.i + 1);
  }
  CHECK_THROWS_AS(divsim::final_distribution(0.5), std::invalid_argument);
}

TEST_CASE("martingale tail bounds") {
  CHECK(divsim::azuma_tail(100.0, 1000.0) ==
        doctest::Approx(0.013475893998170934).epsilon(1e-14));
  CHECK_EQ(divsim::azuma_tail(0.0, 5.0), 1.0);    // capped at 1
  CHECK_EQ(divsim::azuma_tail(1.0, 100000.0), 1.0);
  CHECK(divsim::restart_tail(5.0) ==
        doctest::Approx(0.006737946999085467).epsilon(1e-14));
  CHECK_EQ(divsim::restart_tail(0.0), 1.0);
  CHECK_THROWS_AS(divsim::azuma_tail(-1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(divsim::azuma_tail(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(divsim::restart_tail(-0.1), std::invalid_argument);
}

TEST_CASE("bound report bundles schedule, horizons, and hypothesis numbers") {
  const divsim::BoundReport r =
      divsim::bound_report(100, 5, 0.25, 0.01, 0.01, 0.01);
  CHECK_EQ(r.n, 100);
  CHECK_EQ(r.k, 5);
  CHECK(r.applicable);
  CHECK(r.schedule.eps1 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.schedule.eps2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_EQ(r.at_eps.t1, 1704);
  CHECK_EQ(r.at_eps.tp_of_eps, 60340);
  CHECK_EQ(r.at_confidence.t1, 2486);
  CHECK(r.hypothesis.lambda_k == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(r.hypothesis.k_log_n_over_n ==
        doctest::Approx(5.0 * std::log(100.0) / 100.0).epsilon(1e-13));
  CHECK(r.hypothesis.n_pi_min == doctest::Approx(1.0).epsilon(1e-13));

  const divsim::BoundReport flat = divsim::bound_report(64, 3, 1.0, 1.0 / 64, 0.1, 0.1);
  CHECK_FALSE(flat.applicable);
  CHECK_FALSE(flat.expected.applicable);
}
