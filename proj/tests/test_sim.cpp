#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hisched/experiments.hpp"
#include "hisched/rng.hpp"
#include "hisched/sim.hpp"
#include "hisched/sweep.hpp"
#include "hisched/table.hpp"

using namespace hisched;

namespace {

UeConfig aoi(int id, double q, double p, double rho = 1.0) {
  return {id, UeClass::AoiSensitive, q, p, rho, std::nullopt, std::nullopt};
}
UeConfig throughput(int id, double p, double alpha) {
  return {id, UeClass::ThroughputSensitive, std::nullopt, p, std::nullopt, std::nullopt, alpha};
}

Scenario constrained() { return three_ue_scenario().with_variant(ProblemVariant::LatencyConstrained); }

std::string csv_of(const RunReport& r) {
  std::ostringstream out;
  write_csv(out, run_table({{"r", r}}));
  return out.str();
}

bool within_sigma(double observed, double prob, double n, double k = 3.0) {
  return std::abs(observed - prob) <= k * std::sqrt(prob * (1.0 - prob) / n);
}

}  // namespace

TEST_CASE("single slot run") {
  const auto r = run(RunConfig{three_ue_scenario(), PolicySpec{}, 1, 1, 0});
  CHECK(r.horizon == 1);
  CHECK(r.ue(1).avg_aoi == 1.0);
  for (const auto& u : r.per_ue) CHECK(u.attempts <= 1);
}

TEST_CASE("saturated AoI UE") {
  const Scenario s({aoi(1, 1.0, 1.0)}, ProblemVariant::LatencyWeighted);
  const auto r = run(RunConfig{s, PolicySpec{}, 1000, 4, 0});
  const auto& u = r.ue(1);
  CHECK(u.deliveries == 1000);
  CHECK(u.avg_aoi == doctest::Approx((1.0 + 999.0 * 1.0) / 1000.0));
  CHECK(*u.t_bar == 1.0);
  CHECK(*u.avg_latency == 1.0);
}

TEST_CASE("evaluation system, default weights") {
  const auto r = run(RunConfig{three_ue_scenario(), PolicySpec{}, 1'000'000, 1, 0});
  CHECK(std::abs(r.ue(2).throughput - 0.2) <= 0.01);
  CHECK(r.ue(3).throughput >= 0.2 - 0.01);
  REQUIRE(r.t_star.size() == 1);
  CHECK(r.t_star[0].t_star == doctest::Approx(2.7068).epsilon(1e-4));
  // the split matches the objective up to boundary terms and sampling of q
  CHECK(r.cost.cost_objective == doctest::Approx(r.cost.f1 + r.cost.f2).epsilon(1e-2));
  double share = 0.0;
  for (const auto& u : r.per_ue) share += u.attempts_share;
  CHECK(share <= 1.0 + 1e-12);
}

TEST_CASE("AoI throughput is the reciprocal of the mean spacing") {
  const auto r = run(RunConfig{three_ue_scenario(), PolicySpec{}, 1'000'000, 2, 0});
  const auto& u = r.ue(1);
  REQUIRE(u.t_bar.has_value());
  CHECK(u.throughput * *u.t_bar == doctest::Approx(1.0).epsilon(1e-3));
  REQUIRE(r.audit.size() == 1);
  CHECK(std::abs(r.audit[0].residual) <= 1e-3 * r.audit[0].avg_aoi);
}

TEST_CASE("runs are deterministic") {
  const RunConfig cfg{three_ue_scenario(), PolicySpec{}, 100'000, 9, 0};
  CHECK(csv_of(run(cfg)) == csv_of(run(cfg)));
  RunConfig other = cfg;
  other.seed = 10;
  CHECK(csv_of(run(other)) != csv_of(run(cfg)));
}

TEST_CASE("every policy sees the same arrivals for a seed") {
  auto trace = [](PolicyKind kind) {
    std::vector<std::pair<Slot, std::size_t>> out;
    PolicySpec spec{kind};
    spec.vw.period = 100;
    run(RunConfig{constrained(), spec, 20'000, 5, 0}, [&](const SlotRecord& r) {
      for (auto a : r.arrivals) out.emplace_back(r.t, a);
    });
    return out;
  };
  const auto h = trace(PolicyKind::Hierarchical);
  CHECK(trace(PolicyKind::VirtualWeights) == h);
  CHECK(trace(PolicyKind::Randomized) == h);
}

TEST_CASE("arrival and channel draws follow their probabilities") {
  const Scenario s = three_ue_scenario();
  std::int64_t slots = 0, arrivals_1 = 0, arrivals_2 = 0, attempts = 0, successes = 0;
  run(RunConfig{s, PolicySpec{}, 300'000, 31, 0}, [&](const SlotRecord& r) {
    ++slots;
    for (auto a : r.arrivals) (a == 0 ? arrivals_1 : arrivals_2)++;
    if (const auto* t = std::get_if<Transmit>(&r.action); t && t->ue == 2) {
      ++attempts;
      successes += r.success;
    }
  });
  const double n = static_cast<double>(slots);
  CHECK(within_sigma(arrivals_1 / n, 0.9, n));
  CHECK(within_sigma(arrivals_2 / n, 0.2, n));
  CHECK(within_sigma(static_cast<double>(successes) / attempts, 0.9, static_cast<double>(attempts)));
}

TEST_CASE("throughput is met across alpha") {
  for (double alpha : {0.1, 0.3, 0.5}) {
    CAPTURE(alpha);
    const auto r = run(RunConfig{three_ue_scenario().with_alpha(3, alpha), PolicySpec{}, 500'000, 3, 0});
    CHECK(r.ue(3).throughput >= alpha - 0.01);
    const double shares = r.ue(1).attempts_share + r.ue(2).attempts_share + r.ue(3).attempts_share;
    CHECK(shares <= 1.0 + 1e-12);
  }
}

TEST_CASE("randomized policy tracks beta") {
  const auto r = run(RunConfig{constrained(), PolicySpec{PolicyKind::Randomized}, 1'000'000, 6, 0});
  CHECK(std::abs(*r.ue(2).avg_latency - 2.0) / 2.0 < 0.05);
  CHECK(r.ue(3).throughput >= 0.2 - 0.01);
}

TEST_CASE("adaptive weights keep the throughput of the fixed-weight policy") {
  const auto h = run(RunConfig{constrained(), PolicySpec{PolicyKind::Hierarchical}, 1'000'000, 8, 0});
  const auto v = run(RunConfig{constrained(), PolicySpec{PolicyKind::VirtualWeights}, 1'000'000, 8, 0});
  CHECK(std::abs(h.ue(3).throughput - v.ue(3).throughput) <= 0.005);
  CHECK(v.weights.size() == 100);
  CHECK(v.weights.front().iteration == 1);
  CHECK(v.weights.back().slot == 1'000'000);
}

TEST_CASE("configuration errors") {
  const Scenario s = three_ue_scenario();
  CHECK_THROWS_AS(run(RunConfig{s, PolicySpec{}, 0, 1, 0}), ConfigError);
  CHECK_THROWS_AS(run(RunConfig{s, PolicySpec{}, 10, 1, 10}), ConfigError);
  CHECK_THROWS_AS(run(RunConfig{s, PolicySpec{}, 10, 1, -1}), ConfigError);
  PolicySpec bad{PolicyKind::VirtualWeights};
  bad.vw.eta = 0.0;
  CHECK_THROWS_AS(run(RunConfig{constrained(), bad, 10, 1, 0}), ConfigError);
  const Scenario heavy = s.with_alpha(3, 0.8);
  CHECK_THROWS_AS(run(RunConfig{heavy, PolicySpec{}, 10, 1, 0}), ConfigError);
}

TEST_CASE("warmup shortens the measured window") {
  const auto r = run(RunConfig{three_ue_scenario(), PolicySpec{}, 10'000, 1, 5'000});
  CHECK(r.warmup == 5'000);
  CHECK(r.ue(3).throughput > 0.0);
}

TEST_CASE("grid parsing") {
  const auto g = parse_grid("0.1:0.6:0.1");
  REQUIRE(g.size() == 6);
  CHECK(g.front() == 0.1);
  CHECK(g.back() == 0.6);
  CHECK(parse_grid("2:2:1") == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_grid("1:2:0"), ConfigError);
  CHECK_THROWS_AS(parse_grid("2:1:0.5"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:2"), ConfigError);
  CHECK_THROWS_AS(parse_grid("a:b:c"), ConfigError);
}

TEST_CASE("sweep ordering, seeds and infeasible points") {
  SweepSpec spec{RunConfig{three_ue_scenario(), PolicySpec{}, 5'000, 42, 0}};
  spec.param = SweepParam::Alpha;
  spec.grid = {0.1, 0.9, 0.3};
  spec.seeds = 2;
  spec.threads = 3;
  const auto rows = sweep(spec);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].point == i / 2);
    CHECK(rows[i].replicate == static_cast<int>(i % 2));
    CHECK(rows[i].seed == derive_seed(42, i / 2, i % 2));
  }
  CHECK(rows[0].feasible);
  CHECK_FALSE(rows[2].feasible);
  CHECK_FALSE(rows[2].report.has_value());
  CHECK_FALSE(rows[2].note.empty());
  CHECK(rows[4].report.has_value());

  SweepSpec seq = spec;
  seq.threads = 1;
  std::ostringstream a, b;
  write_csv(a, sweep_table(rows, SweepParam::Alpha));
  write_csv(b, sweep_table(sweep(seq), SweepParam::Alpha));
  CHECK(a.str() == b.str());

  spec.grid.clear();
  CHECK(sweep(spec).empty());
}

TEST_CASE("beta sweep with the randomized policy past its assumption") {
  SweepSpec spec{RunConfig{constrained(), PolicySpec{PolicyKind::Randomized}, 5'000, 1, 0}};
  spec.param = SweepParam::Beta;
  spec.grid = {1.2, 2.0};
  const auto rows = sweep(spec);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].feasible);
  CHECK_FALSE(rows[0].report.has_value());
  CHECK(rows[1].feasible);

  spec.base.policy.rd_saturate = true;
  const auto sat = sweep(spec);
  CHECK_FALSE(sat[0].feasible);
  CHECK(sat[0].report.has_value());
}

TEST_CASE("sweep UE defaults") {
  CHECK(default_sweep_ue(three_ue_scenario(), SweepParam::Alpha) == 3);
  CHECK(default_sweep_ue(constrained(), SweepParam::Beta) == 2);
  const Scenario two({throughput(1, 0.9, 0.1), throughput(2, 0.9, 0.1)}, ProblemVariant::LatencyWeighted);
  CHECK_THROWS_AS(default_sweep_ue(two, SweepParam::Alpha), ConfigError);
}
