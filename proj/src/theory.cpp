#include "divsim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divsim {

namespace {

constexpr double kLambdaOneTol = 1e-9;  // matches the spectral tolerance

long long ceil_floor_one(double value) {
  return std::max(1LL, static_cast<long long>(std::ceil(value)));
}

void check_eps(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
}

}  // namespace

EpsilonSchedule epsilon_schedule(int n, double lambda) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (lambda < 0.0 || lambda > 1.0 + kLambdaOneTol)
    throw std::invalid_argument("lambda must lie in [0, 1]");
  return {std::max(4.0 * lambda * lambda, std::pow(n, -2.0)),
          std::max(2.0 * lambda, std::pow(n, -2.0 / 3.0))};
}

Horizons horizons(int n, double lambda, double pi_min, double eps) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  check_eps(eps);
  if (!(pi_min > 0.0)) throw std::invalid_argument("pi_min must be positive");
  Horizons out;
  const double log_term = std::log(1.0 / (2.0 * eps * eps));
  out.t1 = ceil_floor_one(2.0 * n * log_term);
  out.t2 = ceil_floor_one((2.0 * n / eps) * log_term);
  out.applicable = lambda < 1.0 - kLambdaOneTol;
  if (out.applicable) {
    out.tp = ceil_floor_one(64.0 * n /
                            (std::sqrt(2.0) * (1.0 - lambda) * pi_min));
    out.tp_of_eps = ceil_floor_one(static_cast<double>(out.tp) * std::sqrt(eps));
  }
  return out;
}

ConfidenceHorizons horizons_at_confidence(int n, double eps, double eta) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  check_eps(eps);
  if (!(eta > 0.0) || eta > 1.0)
    throw std::invalid_argument("eta must lie in (0, 1]");
  const double log_term = std::log(1.0 / (4.0 * eps * eps * eta));
  return {ceil_floor_one(2.0 * n * log_term),
          ceil_floor_one((2.0 * n / eps) * log_term)};
}

ExpectedTimeBound expected_T_bound(int n, int k, double lambda, double pi_min) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  ExpectedTimeBound out;
  const double logn = std::log(static_cast<double>(n));
  const double n2 = static_cast<double>(n) * n;
  out.order_reference = k * n * logn + std::pow(n, 5.0 / 3.0) * logn +
                        lambda * k * n2 + std::sqrt(lambda) * n2;
  out.applicable = lambda < 1.0 - kLambdaOneTol;
  if (out.applicable) {
    const EpsilonSchedule sched = epsilon_schedule(n, lambda);
    const Horizons h1 = horizons(n, lambda, pi_min, sched.eps1);
    const Horizons h2 = horizons(n, lambda, pi_min, sched.eps2);
    out.structured_bound =
        4.0 * std::max(k - 3, 0) * static_cast<double>(h1.t1 + h1.tp_of_eps) +
        4.0 * static_cast<double>(h2.t2 + h2.tp_of_eps);
  }
  return out;
}

FinalDistribution final_distribution(double c) {
  if (c < 1.0) throw std::invalid_argument("average opinion must be >= 1");
  FinalDistribution out;
  out.i = static_cast<int>(std::floor(c));
  out.p = out.i + 1 - c;
  out.q = c - out.i;
  return out;
}

double azuma_tail(double h, double t) {
  if (h < 0.0 || !(t > 0.0))
    throw std::invalid_argument("need h >= 0 and t > 0");
  return std::min(1.0, 2.0 * std::exp(-h * h / (2.0 * t)));
}

double restart_tail(double h) {
  if (h < 0.0) throw std::invalid_argument("h must be >= 0");
  return std::exp(-h);
}

BoundReport bound_report(int n, int k, double lambda, double pi_min, double eps,
                         double eta) {
  BoundReport out;
  out.n = n;
  out.k = k;
  out.lambda = lambda;
  out.pi_min = pi_min;
  out.eps = eps;
  out.eta = eta;
  out.schedule = epsilon_schedule(n, lambda);
  out.at_eps = horizons(n, lambda, pi_min, eps);
  out.at_confidence = horizons_at_confidence(n, eps, eta);
  out.expected = expected_T_bound(n, k, lambda, pi_min);
  out.hypothesis = {lambda * k, k * std::log(static_cast<double>(n)) / n,
                    n * pi_min};
  out.applicable = out.at_eps.applicable;
  return out;
}

}  // namespace divsim
