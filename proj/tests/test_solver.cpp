#include <doctest.h>

#include <random>

#include "hisched/sim.hpp"
#include "hisched/solver.hpp"
#include "oracles.hpp"

using namespace hisched;

namespace {

UeConfig aoi(int id, double q, double p, double rho = 1.0) {
  return {id, UeClass::AoiSensitive, q, p, rho, std::nullopt, std::nullopt};
}

double load(const TStarSolution& s, const std::vector<UeConfig>& ues) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ues.size(); ++i) sum += 1.0 / (ues[i].p * s.t_star[i].t_star);
  return sum;
}

}  // namespace

TEST_CASE("binding single UE has the closed form 1/(p zeta)") {
  const double zeta = 1.0 - 0.25 - 0.2 / 0.9;
  const std::vector<UeConfig> ues = {aoi(1, 0.9, 0.7)};
  const auto s = compute_t_star(ues, zeta);
  CHECK(s.binding);
  CHECK(s.mu > 0.0);
  CHECK(s.t_star[0].t_star == doctest::Approx(1.0 / (0.7 * zeta)).epsilon(1e-8));
  CHECK(s.t_star[0].t_star == doctest::Approx(2.7068).epsilon(1e-4));
  CHECK(load(s, ues) <= zeta + 1e-9);
}

TEST_CASE("slack constraint leaves the unconstrained minimiser") {
  const std::vector<UeConfig> wide = {aoi(1, 0.1, 0.9)};  // sqrt(c) = sqrt(90)
  const auto s = compute_t_star(wide, 0.5);
  CHECK(s.mu == 0.0);
  CHECK_FALSE(s.binding);
  CHECK(s.t_star[0].t_star == doctest::Approx(std::sqrt(0.9 / 0.01)));

  const std::vector<UeConfig> tight = {aoi(1, 1.0, 1.0)};
  const auto t = compute_t_star(tight, 1.0);
  CHECK(t.mu == 0.0);
  CHECK(t.t_star[0].t_star == 1.0);
}

TEST_CASE("identical UEs share the budget symmetrically") {
  const std::vector<UeConfig> ues = {aoi(1, 0.6, 0.5), aoi(2, 0.6, 0.5)};
  const auto s = compute_t_star(ues, 0.4);
  CHECK(s.t_star[0].t_star == doctest::Approx(s.t_star[1].t_star).epsilon(1e-12));
  CHECK(s.t_star[0].t_star == doctest::Approx(2.0 / (0.5 * 0.4)).epsilon(1e-8));
}

TEST_CASE("solver rejects bad input") {
  const std::vector<UeConfig> ues = {aoi(1, 0.9, 0.7)};
  CHECK_THROWS_AS(compute_t_star(ues, 0.0), SolverError);
  CHECK_THROWS_AS(compute_t_star(ues, -0.1), SolverError);
  CHECK_THROWS_AS(solve_spacing({}, 0.5), SolverError);
}

TEST_CASE("spacing solution matches a brute-force grid") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> uq(0.3, 1.0), up(0.5, 1.0), urho(0.5, 2.0), uzeta(0.5, 1.0);
  for (int instance = 0; instance < 9; ++instance) {
    const std::size_t n = 1 + instance % 3;
    std::vector<UeConfig> ues;
    std::vector<oracle::SpacingUe> ref;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = uq(gen), p = up(gen), rho = urho(gen);
      ues.push_back(aoi(static_cast<int>(i + 1), q, p, rho));
      ref.push_back({(1.0 - q) / (q * q), rho, p});
    }
    const double zeta = uzeta(gen);
    const auto s = compute_t_star(ues, zeta);
    const double grid = oracle::spacing_grid_min(ref, zeta);
    CAPTURE(instance);
    CHECK(load(s, ues) <= zeta + 1e-9);
    CHECK(std::abs(s.objective - grid) <= 1e-4);
    CHECK(s.objective <= grid + 1e-8);
    for (const auto& e : s.t_star) CHECK(e.t_star >= 1.0);
  }
}

TEST_CASE("shrinking zeta never shortens a spacing") {
  const std::vector<UeConfig> ues = {aoi(1, 0.9, 0.7), aoi(2, 0.3, 0.6, 2.0), aoi(3, 0.5, 0.9, 0.5)};
  std::vector<double> prev;
  for (double zeta = 1.0; zeta > 0.05; zeta -= 0.05) {
    const auto s = compute_t_star(ues, zeta);
    for (std::size_t i = 0; i < prev.size(); ++i) CHECK(s.t_star[i].t_star >= prev[i] - 1e-12);
    prev.clear();
    for (const auto& e : s.t_star) prev.push_back(e.t_star);
  }
}

TEST_CASE("thresholds") {
  CHECK(hier_threshold(2.7068, 0.9) == 2);
  CHECK(hier_threshold(1.0, 1.0) == 0);
  CHECK(hier_threshold(1.0 / 0.3, 0.3) == 0);
  CHECK(hier_threshold(1.0, 0.5) == 0);
  CHECK(hier_threshold(4.0 + 1e-12, 1.0) == 3);
  CHECK(hier_threshold(4.01, 1.0) == 4);
}

TEST_CASE("Geo/Geo/1 latency") {
  CHECK(geo_geo1_latency(0.8, 0.2) == doctest::Approx(4.0 / 3.0));
  CHECK(geo_geo1_latency(1.0, 0.7) == 1.0);
  CHECK(geo_geo1_latency(0.9, 0.2) == doctest::Approx(0.1 / 0.7 + 1.0));
  CHECK_THROWS_AS(geo_geo1_latency(0.2, 0.2), SolverError);
  CHECK_THROWS_AS(geo_geo1_latency(0.1, 0.2), SolverError);

  for (auto [p, q] : {std::pair{0.9, 0.2}, std::pair{0.8, 0.2}, std::pair{0.6, 0.4}}) {
    const double sim = oracle::geo_geo1_sim(p, q, 1'000'000, 99);
    CHECK(std::abs(sim - geo_geo1_latency(p, q)) / geo_geo1_latency(p, q) < 0.02);
  }
}

TEST_CASE("effective rate inverts the Geo/Geo/1 latency") {
  CHECK(effective_rate_for_beta(0.2, 2.0) == doctest::Approx(0.6));
  CHECK(geo_geo1_latency(effective_rate_for_beta(0.2, 2.0), 0.2) == doctest::Approx(2.0));
  CHECK(effective_rate_for_beta(0.2, 1e12) == doctest::Approx(0.2));
  CHECK(effective_rate_for_beta(0.2, 4.0 / 3.0) == doctest::Approx(0.8));
}

TEST_CASE("lower bound") {
  const UeConfig a = aoi(1, 0.9, 0.7);
  const UeConfig l{2, UeClass::LatencySensitive, 0.2, 0.8, 1.0, std::nullopt, std::nullopt};
  const UeConfig k{3, UeClass::ThroughputSensitive, std::nullopt, 0.9, std::nullopt, std::nullopt, 0.2};
  const Scenario full({a, l, k}, ProblemVariant::LatencyWeighted);

  SUBCASE("AoI part has the single-UE closed form") {
    const Scenario s({a, k}, ProblemVariant::LatencyWeighted);
    const auto lb = lower_bound(s, 1000, 1);
    const double zeta = 1.0 - 0.2 / 0.9;
    const double c = 0.1 / (2.0 * 0.81);
    const double T = std::max({1.0, std::sqrt(c), 1.0 / (0.7 * zeta)});
    CHECK(lb.lb_f1 == doctest::Approx(0.5 * (T + c / T + 1.0)).epsilon(1e-9));
    CHECK(lb.lb_f2 == 0.0);
  }
  SUBCASE("latency part follows the Geo/Geo/1 mean") {
    const Scenario s({l}, ProblemVariant::LatencyWeighted);
    const auto lb = lower_bound(s, 1'000'000, 5);
    CHECK(lb.lb_f1 == 0.0);
    CHECK(std::abs(lb.lb_f2 - 4.0 / 3.0) / (4.0 / 3.0) < 0.02);
  }
  SUBCASE("doubling every weight doubles both parts") {
    const auto base = lower_bound(full, 200'000, 3);
    const auto twice = lower_bound(full.with_rho_scaled(2.0), 200'000, 3);
    CHECK(twice.lb_f1 == doctest::Approx(2.0 * base.lb_f1).epsilon(1e-12));
    CHECK(twice.lb_f2 == doctest::Approx(2.0 * base.lb_f2).epsilon(1e-12));
    CHECK(base.lb == base.lb_f1 + base.lb_f2);
  }
  SUBCASE("variant and feasibility are enforced") {
    CHECK_THROWS_AS(lower_bound(full.with_variant(ProblemVariant::LatencyConstrained), 10, 1), std::exception);
    const Scenario heavy({a, l, UeConfig{3, UeClass::ThroughputSensitive, std::nullopt, 0.9, std::nullopt,
                                         std::nullopt, 0.8}},
                         ProblemVariant::LatencyWeighted);
    CHECK_THROWS_AS(lower_bound(heavy, 10, 1), SolverError);
  }
}
