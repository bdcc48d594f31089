#include "hisched/solver.hpp"

#include <algorithm>
#include <cmath>

namespace hisched {

namespace {

constexpr double kResidualTol = 1e-9;
constexpr double kMuWidthTol = 1e-12;
constexpr int kMaxIterations = 200;

double spacing_at(const SpacingTerm& t, double mu) {
  return std::max(1.0, std::sqrt(t.variance + 2.0 * mu / (t.rho * t.p)));
}

double attempt_load(std::span<const SpacingTerm> terms, double mu) {
  double sum = 0.0;
  for (const auto& t : terms) sum += 1.0 / (t.p * spacing_at(t, mu));
  return sum;
}

}  // namespace

TStarSolution solve_spacing(std::span<const SpacingTerm> terms, double zeta) {
  if (!(zeta > 0.0)) throw SolverError("spacing program infeasible: zeta must be positive");
  if (terms.empty()) throw SolverError("spacing program has no terms");
  for (const auto& t : terms) {
    if (!(t.rho > 0.0) || !(t.p > 0.0) || t.variance < 0.0) {
      throw SolverError("invalid spacing term for UE " + std::to_string(t.id));
    }
  }

  double mu = 0.0;
  bool binding = false;
  if (attempt_load(terms, 0.0) > zeta) {
    binding = true;
    double lo = 0.0;
    double hi = 1.0;
    int iterations = 0;
    while (attempt_load(terms, hi) > zeta) {
      lo = hi;
      hi *= 2.0;
      if (++iterations > kMaxIterations) throw SolverError("could not bracket the multiplier");
    }
    // Invariant: load(lo) > zeta >= load(hi). Return the feasible end.
    iterations = 0;
    while (hi - lo > kMuWidthTol * std::max(1.0, hi)) {
      if (zeta - attempt_load(terms, hi) <= kResidualTol) break;
      const double mid = 0.5 * (lo + hi);
      if (attempt_load(terms, mid) > zeta) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (++iterations > kMaxIterations) throw SolverError("multiplier bisection did not converge");
    }
    mu = hi;
  }

  TStarSolution sol;
  sol.mu = mu;
  sol.binding = binding;
  for (const auto& t : terms) {
    const double spacing = spacing_at(t, mu);
    sol.t_star.push_back({t.id, spacing});
    sol.objective += 0.5 * t.rho * (spacing + t.variance / spacing);
  }
  return sol;
}

TStarSolution compute_t_star(std::span<const UeConfig> aoi_ues, double zeta) {
  std::vector<SpacingTerm> terms;
  terms.reserve(aoi_ues.size());
  for (const auto& ue : aoi_ues) {
    if (!ue.is_aoi()) throw SolverError("compute_t_star given a non-AoI UE " + std::to_string(ue.id));
    const double q = *ue.q;
    terms.push_back({ue.id, (1.0 - q) / (q * q), *ue.rho, ue.p});
  }
  return solve_spacing(terms, zeta);
}

std::int64_t hier_threshold(double t_star, double q) {
  // A T* that lands a rounding error above an integer must not bump the
  // ceiling.
  const double gap = t_star - 1.0 / q;
  const double snapped = std::ceil(gap - 1e-9);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(snapped));
}

double geo_geo1_latency(double p, double q) {
  if (!(p > q)) throw SolverError("Geo/Geo/1 queue unstable: need p > q");
  return (1.0 - p) / (p - q) + 1.0;
}

double effective_rate_for_beta(double q, double beta) { return q + (1.0 - q) / beta; }

}  // namespace hisched
