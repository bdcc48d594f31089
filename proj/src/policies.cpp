#include "hisched/policies.hpp"

#include <algorithm>

#include "hisched/solver.hpp"

namespace hisched {

std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Hierarchical: return "hier";
    case PolicyKind::VirtualWeights: return "vw";
    case PolicyKind::Randomized: return "rd";
    case PolicyKind::CMu: return "cmu";
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view s) {
  if (s == "hier") return PolicyKind::Hierarchical;
  if (s == "vw") return PolicyKind::VirtualWeights;
  if (s == "rd") return PolicyKind::Randomized;
  if (s == "cmu") return PolicyKind::CMu;
  throw ConfigError("unknown policy '" + std::string(s) + "' (expected hier, vw, rd or cmu)");
}

PolicyState make_policy_state(const Scenario& scenario, const PolicySpec& spec) {
  PolicyState state;
  state.kind = spec.kind;
  state.rd_saturate = spec.rd_saturate;

  const bool needs_beta =
      spec.kind == PolicyKind::VirtualWeights || spec.kind == PolicyKind::Randomized;
  for (const auto& ue : scenario.ues()) {
    UeState s;
    s.id = ue.id;
    s.ue_class = ue.ue_class;
    s.q = ue.arrival_rate();
    s.p = ue.p;
    s.alpha = ue.alpha.value_or(0.0);
    if (ue.is_aoi()) s.weight = *ue.rho;
    if (ue.is_latency()) {
      s.beta = ue.beta.value_or(0.0);
      if (needs_beta && !ue.beta) {
        throw ConfigError("policy " + std::string(to_string(spec.kind)) +
                          " needs beta on latency UE " + std::to_string(ue.id));
      }
      if (spec.kind == PolicyKind::VirtualWeights) {
        s.weight = spec.vw.initial_rho;
      } else if (spec.kind == PolicyKind::Randomized) {
        s.theta = theta(ue);
      } else {
        if (!ue.rho) {
          throw ConfigError("policy " + std::string(to_string(spec.kind)) +
                            " needs rho on latency UE " + std::to_string(ue.id));
        }
        s.weight = *ue.rho;
      }
    }
    state.ues.push_back(std::move(s));
  }

  if (spec.kind == PolicyKind::CMu) {
    if (scenario.has_class(UeClass::AoiSensitive) || scenario.has_class(UeClass::ThroughputSensitive)) {
      throw ConfigError("the c-mu policy serves latency UEs only");
    }
    return state;
  }

  if (spec.kind == PolicyKind::Randomized && !spec.rd_saturate) {
    double sum = 0.0;
    for (const auto& s : state.ues) sum += s.theta;
    if (sum > 1.0) {
      throw ConfigError("randomized policy: latency service probabilities sum to " +
                        std::to_string(sum) + " > 1");
    }
  }

  std::vector<UeConfig> aoi;
  std::copy_if(scenario.ues().begin(), scenario.ues().end(), std::back_inserter(aoi),
               [](const UeConfig& u) { return u.is_aoi(); });
  if (!aoi.empty()) {
    const auto feas = validate(scenario);
    if (!feas.feasible) {
      throw ConfigError("scenario infeasible: latency and throughput load " +
                        std::to_string(feas.load) + " >= 1");
    }
    const auto sol = compute_t_star(aoi, feas.zeta);
    state.mu = sol.mu;
    for (const auto& entry : sol.t_star) {
      auto& s = state.ues[scenario.index_of(entry.id)];
      s.t_star = entry.t_star;
      s.threshold = hier_threshold(entry.t_star, s.q);
    }
  }
  return state;
}

void hier_update_index(PolicyState& state, std::span<const std::size_t> arrivals, Slot t) {
  const bool latency_indexed = state.kind != PolicyKind::Randomized;
  for (std::size_t pos : arrivals) {
    auto& s = state.ues[pos];
    switch (s.ue_class) {
      case UeClass::LatencySensitive:
        s.queue.push_back(t);
        if (latency_indexed) s.index = s.weight * s.p / s.q;
        break;
      case UeClass::AoiSensitive:
        // Strict comparison: the counter advances once the gap exceeds the
        // threshold, which spaces admitted packets by threshold + 1/q on
        // average.
        if (t - s.last_increment > s.threshold) {
          s.last_increment = t;
          ++s.counter;
        }
        if (s.counter > s.deliveries) {
          s.held = t;
          s.index = s.weight * s.p * static_cast<double>(t - s.freshest);
        }
        break;
      case UeClass::ThroughputSensitive:
        break;
    }
  }
}

namespace {

// Lowest position wins ties.
std::optional<std::size_t> best_held(const PolicyState& state, bool include_latency) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < state.ues.size(); ++i) {
    const auto& s = state.ues[i];
    if (!s.in_priority_set()) continue;
    if (!include_latency && s.ue_class == UeClass::LatencySensitive) continue;
    if (!best || s.index > state.ues[*best].index) best = i;
  }
  return best;
}

std::optional<std::size_t> best_throughput(const PolicyState& state, Slot t) {
  std::optional<std::size_t> best;
  double best_value = 0.0;
  for (std::size_t i = 0; i < state.ues.size(); ++i) {
    const auto& s = state.ues[i];
    if (s.ue_class != UeClass::ThroughputSensitive) continue;
    const double value = s.alpha * static_cast<double>(t) / s.p - static_cast<double>(s.attempts);
    if (!best || value > best_value) {
      best = i;
      best_value = value;
    }
  }
  return best;
}

Transmit newest_packet(const PolicyState& state, std::size_t pos, Slot t) {
  const auto& s = state.ues[pos];
  switch (s.ue_class) {
    case UeClass::AoiSensitive: return {pos, *s.held};
    case UeClass::LatencySensitive: return {pos, s.queue.back()};
    case UeClass::ThroughputSensitive: break;
  }
  return {pos, t};
}

}  // namespace

Action hier_select(const PolicyState& state, Slot t) {
  if (auto held = best_held(state, true)) return newest_packet(state, *held, t);
  if (auto k = best_throughput(state, t)) return newest_packet(state, *k, t);
  return Idle{};
}

void hier_on_outcome(PolicyState& state, const Transmit& tx, bool success, Slot t) {
  auto& s = state.ues.at(tx.ue);
  ++s.attempts;
  if (!success) return;
  ++s.deliveries;
  s.freshest = std::max(s.freshest, tx.arrival);
  switch (s.ue_class) {
    case UeClass::AoiSensitive:
      s.held.reset();
      s.index = 0.0;
      break;
    case UeClass::LatencySensitive: {
      auto it = std::find(s.queue.rbegin(), s.queue.rend(), tx.arrival);
      if (it == s.queue.rend()) throw std::logic_error("delivered packet not in queue");
      s.queue.erase(std::next(it).base());
      if (s.queue.empty()) s.index = 0.0;
      break;
    }
    case UeClass::ThroughputSensitive:
      break;
  }
  (void)t;
}

void vw_update(PolicyState& state, std::span<const std::optional<double>> avg_latency, double eta) {
  for (std::size_t i = 0; i < state.ues.size(); ++i) {
    auto& s = state.ues[i];
    if (s.ue_class != UeClass::LatencySensitive || i >= avg_latency.size() || !avg_latency[i]) continue;
    s.weight = std::max(0.0, s.weight - eta * (s.beta - *avg_latency[i]));
    if (!s.queue.empty()) s.index = s.weight * s.p / s.q;
  }
}

Action rd_select(const PolicyState& state, Slot t, double draw) {
  std::optional<std::size_t> fallback = best_held(state, false);
  if (!fallback) fallback = best_throughput(state, t);

  double total = 0.0;
  for (const auto& s : state.ues) {
    if (s.ue_class == UeClass::LatencySensitive && !s.queue.empty()) total += s.theta;
  }
  double scale = 1.0;
  if (total > 1.0) {
    if (!state.rd_saturate) {
      throw std::logic_error("latency service probabilities exceed 1");
    }
    scale = 1.0 / total;
  }

  double edge = 0.0;
  for (std::size_t i = 0; i < state.ues.size(); ++i) {
    const auto& s = state.ues[i];
    if (s.ue_class != UeClass::LatencySensitive || s.queue.empty()) continue;
    edge += s.theta * scale;
    if (draw < edge) return newest_packet(state, i, t);
  }
  if (fallback) return newest_packet(state, *fallback, t);
  return Idle{};
}

Action cmu_select(const PolicyState& state, Slot t) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < state.ues.size(); ++i) {
    const auto& s = state.ues[i];
    if (s.ue_class != UeClass::LatencySensitive || s.queue.empty()) continue;
    if (!best || s.index > state.ues[*best].index) best = i;
  }
  if (best) return newest_packet(state, *best, t);
  return Idle{};
}

std::span<const Slot> pending_packets(const PolicyState& state, std::size_t ue) {
  const auto& s = state.ues.at(ue);
  if (s.ue_class == UeClass::AoiSensitive) {
    if (s.held) return {&*s.held, 1};
    return {};
  }
  return s.queue;
}

}  // namespace hisched
