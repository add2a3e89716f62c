#pragma once

namespace divsim {

// eps1 = max(4 lambda^2, n^-2), eps2 = max(2 lambda, n^-2/3).
struct EpsilonSchedule {
  double eps1;
  double eps2;
};
EpsilonSchedule epsilon_schedule(int n, double lambda);

// T1(eps) = ceil(2n ln(1/(2 eps^2)))          [floored at 1]
// T2(eps) = ceil((2n/eps) ln(1/(2 eps^2)))    [floored at 1]
// Tp      = ceil(64 n / (sqrt(2) (1-lambda) pi_min))
// Tp(eps) = ceil(Tp sqrt(eps))
// applicable = false when lambda is 1 (within spectral tolerance); Tp terms
// are then reported as 0.
struct Horizons {
  long long t1 = 0;
  long long t2 = 0;
  long long tp = 0;
  long long tp_of_eps = 0;
  bool applicable = false;
};
Horizons horizons(int n, double lambda, double pi_min, double eps);

// The eta-confidence variants: T1 = ceil(2n ln(1/(4 eps^2 eta))),
// T2 = ceil((2n/eps) ln(1/(4 eps^2 eta))), each floored at 1; the extreme
// opinion's mass is below eps by these steps except with probability <= eta.
struct ConfidenceHorizons {
  long long t1 = 0;
  long long t2 = 0;
};
ConfidenceHorizons horizons_at_confidence(int n, double eps, double eta);

// order_reference: k n ln n + n^(5/3) ln n + lambda k n^2 + sqrt(lambda) n^2
// with constant 1 -- an order-of-magnitude reference, never a hard threshold.
// structured_bound: 4 max(k-3,0) (T1(eps1)+Tp(eps1)) + 4 (T2(eps2)+Tp(eps2))
// with (eps1, eps2) from epsilon_schedule -- the explicit-constant bound on
// the expected steps until two consecutive opinions remain.
struct ExpectedTimeBound {
  double order_reference = 0.0;
  double structured_bound = 0.0;
  bool applicable = false;
};
ExpectedTimeBound expected_T_bound(int n, int k, double lambda, double pi_min);

// Winning value of the final stage when the initial average is c:
// opinion i = floor(c) wins with probability p = i+1-c, opinion i+1 with
// q = c-i (p = 1 when c is integral).
struct FinalDistribution {
  int i;
  double p;
  double q;
};
FinalDistribution final_distribution(double c);

// P[|W(t) - W(0)| >= h] <= min(1, 2 exp(-h^2/(2t))).
double azuma_tail(double h, double t);

// P[tau > h e E[tau]] <= exp(-h) by independent restarts.
double restart_tail(double h);

struct HypothesisFlags {
  double lambda_k = 0.0;        // lambda * k, wants << 1
  double k_log_n_over_n = 0.0;  // k ln n / n, wants << 1
  double n_pi_min = 0.0;        // n * pi_min, wants order 1
};

struct BoundReport {
  int n = 0;
  int k = 0;
  double lambda = 0.0;
  double pi_min = 0.0;
  double eps = 0.0;
  double eta = 0.0;
  EpsilonSchedule schedule{};
  Horizons at_eps{};                    // horizons at the requested eps
  ConfidenceHorizons at_confidence{};   // eta-form at (eps, eta)
  ExpectedTimeBound expected{};
  HypothesisFlags hypothesis{};
  bool applicable = false;
};
BoundReport bound_report(int n, int k, double lambda, double pi_min, double eps,
                         double eta);

}  // namespace divsim
