#include "hisched/sim.hpp"

#include "hisched/rng.hpp"

namespace hisched {

const UeSummary& RunReport::ue(int id) const {
  for (const auto& s : per_ue) {
    if (s.id == id) return s;
  }
  throw ConfigError("report has no UE " + std::to_string(id));
}

namespace {

void check_config(const RunConfig& config) {
  if (config.horizon < 1) throw ConfigError("horizon must be at least 1");
  if (config.warmup < 0 || config.warmup >= config.horizon) {
    throw ConfigError("warmup must lie in [0, horizon)");
  }
  if (config.policy.kind == PolicyKind::VirtualWeights) {
    if (config.policy.vw.period < 1) throw ConfigError("weight update period must be at least 1");
    if (!(config.policy.vw.eta > 0.0)) throw ConfigError("eta must be positive");
    if (!(config.policy.vw.initial_rho >= 0.0)) throw ConfigError("initial rho must be nonnegative");
  }
  const auto feas = validate(config.scenario);
  if (!feas.feasible) {
    throw ConfigError("scenario infeasible: load " + std::to_string(feas.load) + " >= 1");
  }
}

}  // namespace

RunReport run(const RunConfig& config, const SlotObserver& observer) {
  check_config(config);
  const Scenario& scenario = config.scenario;
  const auto& ues = scenario.ues();
  const std::size_t n = ues.size();

  PolicyState state = make_policy_state(scenario, config.policy);
  RunStreams rng(config.seed);
  std::vector<UeMetrics> metrics(n, UeMetrics(config.warmup));

  RunReport report;
  report.policy = std::string(to_string(config.policy.kind));
  report.seed = config.seed;
  report.horizon = config.horizon;
  report.warmup = config.warmup;
  report.feasibility = validate(scenario);
  for (const auto& s : state.ues) {
    if (s.ue_class == UeClass::AoiSensitive) {
      report.t_star.push_back({s.id, s.t_star});
      report.thresholds.push_back(s.threshold);
    }
  }

  const PolicyKind kind = config.policy.kind;
  const Slot period = config.policy.vw.period;
  std::vector<std::size_t> arrivals;
  arrivals.reserve(n);
  std::vector<std::optional<double>> latency_now(n);
  std::int64_t vw_iteration = 0;

  for (Slot t = 1; t <= config.horizon; ++t) {
    for (auto& m : metrics) m.step_aoi(t);

    arrivals.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (ues[i].is_throughput()) continue;
      if (rng.arrivals.bernoulli(*ues[i].q)) {
        arrivals.push_back(i);
        metrics[i].on_arrival(t);
      }
    }

    hier_update_index(state, arrivals, t);

    if (kind == PolicyKind::VirtualWeights && t % period == 0) {
      for (std::size_t i = 0; i < n; ++i) {
        latency_now[i] = ues[i].is_latency()
                             ? metrics[i].running_latency(t, pending_packets(state, i))
                             : std::nullopt;
      }
      vw_update(state, latency_now, config.policy.vw.eta);
      ++vw_iteration;
      for (std::size_t i = 0; i < n; ++i) {
        if (!ues[i].is_latency()) continue;
        report.weights.push_back({vw_iteration, t, ues[i].id, state.ues[i].weight, latency_now[i]});
      }
    }

    Action action;
    switch (kind) {
      case PolicyKind::Hierarchical:
      case PolicyKind::VirtualWeights: action = hier_select(state, t); break;
      case PolicyKind::Randomized: action = rd_select(state, t, rng.policy.next()); break;
      case PolicyKind::CMu: action = cmu_select(state, t); break;
    }

    bool success = false;
    if (const auto* tx = std::get_if<Transmit>(&action)) {
      metrics[tx->ue].on_attempt(t);
      success = rng.channel.bernoulli(ues[tx->ue].p);
      hier_on_outcome(state, *tx, success, t);
      if (success) metrics[tx->ue].on_delivery(tx->arrival, t);
    }

    if (observer) observer(SlotRecord{t, arrivals, action, success, &state});
  }

  const Slot measured = config.horizon - config.warmup;
  for (std::size_t i = 0; i < n; ++i) {
    report.per_ue.push_back(finalize(metrics[i], ues[i], config.horizon, pending_packets(state, i)));
  }
  report.cost = assemble_cost(report.per_ue, scenario, measured);
  for (const auto& s : report.per_ue) {
    if (s.ue_class != UeClass::AoiSensitive) continue;
    if (auto a = aoi_decomposition_audit(s, measured)) report.audit.push_back(*a);
  }
  return report;
}

}  // namespace hisched
