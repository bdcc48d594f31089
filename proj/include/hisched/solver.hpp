#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hisched/model.hpp"
#include "hisched/types.hpp"

namespace hisched {

/// One term of the separable spacing program
///
///   minimize   sum  rho/2 * (T + c / T)
///   subject to sum  1 / (p T) <= zeta,   T >= 1.
///
/// c is the inter-delivery variance term: (1-q)/q^2 for the scheduling
/// target, (1-q)/(2 q^2) for the AoI lower bound.
struct SpacingTerm {
  int id = 0;
  double variance = 0.0;
  double rho = 1.0;
  double p = 1.0;
};

struct TStarEntry {
  int id = 0;
  double t_star = 1.0;
};

struct TStarSolution {
  std::vector<TStarEntry> t_star;  // in input order
  double mu = 0.0;                 // multiplier of the budget constraint
  bool binding = false;
  double objective = 0.0;          // sum rho/2 (T + c/T) at the solution
};

/// KKT solution of the spacing program: T(mu) = max(1, sqrt(c + 2 mu / (rho p)))
/// with mu found by bisection. Throws SolverError if zeta <= 0 or the
/// bisection fails to converge within 200 iterations.
TStarSolution solve_spacing(std::span<const SpacingTerm> terms, double zeta);

/// Target inter-delivery spacing for the AoI UEs of a scenario, with
/// c = (1-q)/q^2. `aoi_ues` must all be AoI UEs.
TStarSolution compute_t_star(std::span<const UeConfig> aoi_ues, double zeta);

/// Counter threshold ceil(t_star - 1/q), floored at 0.
std::int64_t hier_threshold(double t_star, double q);

/// Mean latency (slots, inclusive) of a discrete-time Geo/Geo/1 queue with
/// arrival rate q and service rate p under any work-conserving order.
/// Throws SolverError when p <= q.
double geo_geo1_latency(double p, double q);

/// Service rate at which the Geo/Geo/1 latency equals beta.
double effective_rate_for_beta(double q, double beta);

struct LowerBound {
  double lb_f1 = 0.0;
  double lb_f2 = 0.0;
  double lb = 0.0;
};

/// Lower bound on the weighted AoI + latency cost of any feasible policy.
/// lb_f1 solves the spacing program with the lower-bound variance term;
/// lb_f2 simulates the latency UEs alone under the c-mu rule. Requires a
/// feasible LatencyWeighted scenario.
LowerBound lower_bound(const Scenario& scenario, Slot horizon, std::uint64_t seed);

}  // namespace hisched
