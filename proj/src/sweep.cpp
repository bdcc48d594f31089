#include "hisched/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

#include "hisched/rng.hpp"

namespace hisched {

std::string_view to_string(SweepParam p) { return p == SweepParam::Alpha ? "alpha" : "beta"; }

SweepParam parse_sweep_param(std::string_view s) {
  if (s == "alpha") return SweepParam::Alpha;
  if (s == "beta") return SweepParam::Beta;
  throw ConfigError("unknown sweep parameter '" + std::string(s) + "' (expected alpha or beta)");
}

int default_sweep_ue(const Scenario& scenario, SweepParam param) {
  const UeClass want = param == SweepParam::Alpha ? UeClass::ThroughputSensitive : UeClass::LatencySensitive;
  std::optional<int> found;
  for (const auto& ue : scenario.ues()) {
    if (ue.ue_class != want) continue;
    if (found) {
      throw ConfigError(std::string(to_string(param)) + " fits several UEs; name one with --ue");
    }
    found = ue.id;
  }
  if (!found) throw ConfigError("no UE takes parameter " + std::string(to_string(param)));
  return *found;
}

namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("bad number '" + std::string(s) + "' in grid");
  }
  return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw ConfigError("grid must look like a:b:step");
  const double a = parse_number(text.substr(0, c1));
  const double b = parse_number(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = parse_number(text.substr(c2 + 1));
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  if (b < a) throw ConfigError("grid end lies below its start");
  std::vector<double> grid;
  const auto count = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-6));
  for (std::int64_t i = 0; i <= count; ++i) {
    // Snap to 1e-9 so 0.1 + 2 * 0.1 becomes 0.3.
    const double v = a + static_cast<double>(i) * step;
    grid.push_back(std::round(v * 1e9) / 1e9);
  }
  return grid;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (spec.seeds < 1) throw ConfigError("seeds must be at least 1");
  std::vector<SweepRow> rows;
  if (spec.grid.empty()) return rows;
  const int ue_id = spec.ue_id ? *spec.ue_id : default_sweep_ue(spec.base.scenario, spec.param);

  for (std::size_t point = 0; point < spec.grid.size(); ++point) {
    for (int r = 0; r < spec.seeds; ++r) {
      SweepRow row;
      row.point = point;
      row.value = spec.grid[point];
      row.replicate = r;
      row.seed = derive_seed(spec.base.seed, point, static_cast<std::uint64_t>(r));
      rows.push_back(std::move(row));
    }
  }

  auto job = [&](SweepRow& row) {
    try {
      RunConfig cfg = spec.base;
      cfg.seed = row.seed;
      cfg.scenario = spec.param == SweepParam::Alpha ? spec.base.scenario.with_alpha(ue_id, row.value)
                                                     : spec.base.scenario.with_beta(ue_id, row.value);
      const auto feas = validate(cfg.scenario);
      if (!feas.feasible) {
        row.feasible = false;
        row.note = "load " + std::to_string(feas.load) + " >= 1";
        return;
      }
      if (cfg.policy.kind == PolicyKind::Randomized && feas.rd_feasible && !*feas.rd_feasible) {
        row.feasible = false;
        row.note = "latency service probabilities sum to " + std::to_string(*feas.theta_sum) + " > 1";
        if (!cfg.policy.rd_saturate) return;
      }
      row.report = run(cfg);
      if (spec.with_lb && cfg.scenario.variant() == ProblemVariant::LatencyWeighted) {
        row.report->lb = lower_bound(cfg.scenario, cfg.horizon, cfg.seed);
      }
    } catch (const ScenarioError& e) {
      row.feasible = false;
      row.note = e.what();
    } catch (const ConfigError& e) {
      row.feasible = false;
      row.note = e.what();
    }
  };

  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(rows.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        job(rows[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

}  // namespace hisched
