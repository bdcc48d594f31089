#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

struct SpacingUe {
  double c;  // variance constant
  double rho;
  double p;
};

inline double term(const SpacingUe& u, double T) { return 0.5 * u.rho * (T + u.c / T); }

/// Best T for one UE given the remaining attempt budget, by convexity of
/// T + c/T: the larger of 1, sqrt(c) and the budget floor 1/(p * budget).
inline double best_last(const SpacingUe& u, double budget) {
  return std::max({1.0, std::sqrt(u.c), 1.0 / (u.p * budget)});
}

/// Full 1e-3 grid over the first n-1 spacings with the last one minimised
/// exactly, inside [1, 200] and below the caps derived next. A single UE
/// gets the grid on [1, 200] plus the constraint boundary point. Returns
/// +inf when no grid point is feasible.
inline double spacing_grid_min(const std::vector<SpacingUe>& ues, double zeta) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kTop = 200.0;
  const std::size_t n = ues.size();
  if (n == 1) {
    // grid points plus the constraint boundary
    double best = term(ues[0], best_last(ues[0], zeta));
    for (std::int64_t k = 0; k <= 199000; ++k) {
      const double T = 1.0 + 1e-3 * static_cast<double>(k);
      if (1.0 / (ues[0].p * T) <= zeta) best = std::min(best, term(ues[0], T));
    }
    return best;
  }

  // Any point better than an equal-split feasible point keeps each term
  // below f0 minus the other terms' unconstrained minima, and each term
  // exceeds rho T / 2.
  double f0 = 0.0;
  double floor_sum = 0.0;
  std::vector<double> floor(n);
  for (std::size_t i = 0; i < n; ++i) {
    f0 += term(ues[i], std::max(1.0, static_cast<double>(n) / (ues[i].p * zeta)));
    floor[i] = term(ues[i], std::max(1.0, std::sqrt(ues[i].c)));
    floor_sum += floor[i];
  }
  std::vector<double> cap(n);
  for (std::size_t i = 0; i < n; ++i) {
    cap[i] = std::min(kTop, 2.0 * (f0 - floor_sum + floor[i]) / ues[i].rho);
  }

  if (n == 2) {
    double best = kInf;
    const auto steps = static_cast<std::int64_t>((cap[0] - 1.0) / 1e-3);
    for (std::int64_t k = 0; k <= steps; ++k) {
      const double t1 = 1.0 + 1e-3 * static_cast<double>(k);
      const double budget = zeta - 1.0 / (ues[0].p * t1);
      if (budget <= 0.0) continue;
      const double t2 = best_last(ues[1], budget);
      if (t2 > kTop) continue;
      best = std::min(best, term(ues[0], t1) + term(ues[1], t2));
    }
    return best;
  }

  auto eval = [&](double t1, double t2) {
    const double budget = zeta - 1.0 / (ues[0].p * t1) - 1.0 / (ues[1].p * t2);
    if (budget <= 0.0) return kInf;
    const double t3 = best_last(ues[2], budget);
    if (t3 > kTop) return kInf;
    return term(ues[0], t1) + term(ues[1], t2) + term(ues[2], t3);
  };
  double best = kInf;
  const auto s1 = static_cast<std::int64_t>((cap[0] - 1.0) / 1e-3);
  const auto s2 = static_cast<std::int64_t>((cap[1] - 1.0) / 1e-3);
  for (std::int64_t i = 0; i <= s1; ++i) {
    const double t1 = 1.0 + 1e-3 * static_cast<double>(i);
    if (1.0 / (ues[0].p * t1) >= zeta) continue;
    for (std::int64_t j = 0; j <= s2; ++j) best = std::min(best, eval(t1, 1.0 + 1e-3 * static_cast<double>(j)));
  }
  return best;
}

/// Direct Geo/Geo/1 simulation: Bernoulli(q) arrival at slot start, one
/// Bernoulli(p) service attempt per slot on the head packet, latency
/// r - g + 1. Mean latency over delivered packets.
inline double geo_geo1_sim(double p, double q, std::int64_t slots, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution arrive(q), serve(p);
  std::deque<std::int64_t> queue;
  double sum = 0.0;
  std::int64_t served = 0;
  for (std::int64_t t = 1; t <= slots; ++t) {
    if (arrive(gen)) queue.push_back(t);
    if (!queue.empty() && serve(gen)) {
      sum += static_cast<double>(t - queue.front() + 1);
      queue.pop_front();
      ++served;
    }
  }
  return sum / static_cast<double>(served);
}

struct TracePacket {
  std::int64_t arrival;
  std::int64_t delivered;
};

/// AoI summed over slots 1..horizon from a delivery trace, with A(t) = t -
/// (freshest arrival delivered before slot t), starting from 0.
inline double aoi_sum(const std::vector<TracePacket>& trace, std::int64_t horizon) {
  double sum = 0.0;
  std::int64_t lambda = 0;
  std::size_t next = 0;
  std::vector<TracePacket> by_delivery = trace;
  std::sort(by_delivery.begin(), by_delivery.end(),
            [](const auto& a, const auto& b) { return a.delivered < b.delivered; });
  for (std::int64_t t = 1; t <= horizon; ++t) {
    sum += static_cast<double>(t - lambda);
    while (next < by_delivery.size() && by_delivery[next].delivered == t) {
      lambda = std::max(lambda, by_delivery[next].arrival);
      ++next;
    }
  }
  return sum;
}

}  // namespace oracle
