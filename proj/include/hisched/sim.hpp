#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hisched/metrics.hpp"
#include "hisched/model.hpp"
#include "hisched/policies.hpp"
#include "hisched/solver.hpp"
#include "hisched/types.hpp"

namespace hisched {

struct RunConfig {
  Scenario scenario;
  PolicySpec policy;
  Slot horizon = 1'000'000;
  std::uint64_t seed = 1;
  Slot warmup = 0;  // slots excluded from the averages
};

/// One adaptive-weight update of one latency UE.
struct WeightSample {
  std::int64_t iteration = 0;  // 1-based update count
  Slot slot = 0;
  int ue_id = 0;
  double rho = 0.0;  // after the update
  std::optional<double> avg_latency;  // the estimate the update used
};

struct RunReport {
  std::string policy;
  std::uint64_t seed = 0;
  Slot horizon = 0;
  Slot warmup = 0;
  FeasibilityReport feasibility;
  std::vector<UeSummary> per_ue;  // scenario order
  CostBreakdown cost;
  std::vector<AuditEntry> audit;  // AoI UEs with at least two deliveries
  std::vector<TStarEntry> t_star;
  std::vector<std::int64_t> thresholds;  // parallel to t_star
  std::vector<WeightSample> weights;
  std::optional<LowerBound> lb;

  const UeSummary& ue(int id) const;
};

/// What happened in one slot, handed to an optional observer.
struct SlotRecord {
  Slot t = 0;
  std::span<const std::size_t> arrivals;  // positions, ascending
  Action action;
  bool success = false;
  const PolicyState* state = nullptr;  // after the outcome was applied
};

using SlotObserver = std::function<void(const SlotRecord&)>;

/// Runs one simulation. Slot order: AoI step, arrivals (ascending id),
/// index update, weight update (adaptive policy, t % f == 0), selection
/// (the randomized policy always draws once), channel draw, outcome.
/// Throws ConfigError before slot 1 on a bad configuration.
RunReport run(const RunConfig& config, const SlotObserver& observer = {});

}  // namespace hisched
