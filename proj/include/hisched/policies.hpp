#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "hisched/model.hpp"
#include "hisched/types.hpp"

namespace hisched {

enum class PolicyKind {
  Hierarchical,    // hierarchical index policy
  VirtualWeights,  // hierarchical with adaptive latency weights
  Randomized,      // hierarchical over AoI/throughput, randomized latency service
  CMu,             // c-mu rule over latency UEs only
};

std::string_view to_string(PolicyKind k);
/// Accepts the CLI spellings hier, vw, rd, cmu.
PolicyKind parse_policy_kind(std::string_view s);

struct VwParams {
  Slot period = 10000;  // weights updated when t % period == 0
  double eta = 0.1;
  double initial_rho = 1.0;
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::Hierarchical;
  VwParams vw;
  /// Randomized policy only: when the latency service probabilities of the
  /// backlogged latency UEs sum past 1, scale them to sum to 1 instead of
  /// failing. Lets the policy run where no schedule meets every beta.
  bool rd_saturate = false;
};

struct Transmit {
  std::size_t ue = 0;  // position in the scenario
  Slot arrival = 0;    // arrival slot of the packet sent
  bool operator==(const Transmit&) const = default;
};
struct Idle {
  bool operator==(const Idle&) const = default;
};
using Action = std::variant<Idle, Transmit>;

/// Scheduler bookkeeping for one UE. Only the fields relevant to the UE's
/// class are used.
struct UeState {
  int id = 0;
  UeClass ue_class = UeClass::AoiSensitive;
  double q = 1.0;
  double p = 1.0;
  double alpha = 0.0;
  double weight = 0.0;  // rho; virtual under the adaptive-weight policy
  double index = 0.0;   // W; meaningful only while a packet is held
  double theta = 0.0;   // randomized latency service probability
  double beta = 0.0;    // latency target

  // AoI counter gating
  double t_star = 0.0;
  std::int64_t threshold = 0;
  Slot last_increment = 0;  // a
  std::int64_t counter = 0;  // b
  std::optional<Slot> held;  // the single high-priority packet

  // latency queue; the newest packet sits at the back
  std::vector<Slot> queue;

  Slot freshest = 0;  // lambda
  std::int64_t attempts = 0;
  std::int64_t deliveries = 0;

  /// True while the UE has a packet in the high-priority set.
  bool in_priority_set() const {
    if (ue_class == UeClass::AoiSensitive) return held.has_value();
    if (ue_class == UeClass::LatencySensitive) return !queue.empty();
    return false;
  }
};

struct PolicyState {
  PolicyKind kind = PolicyKind::Hierarchical;
  bool rd_saturate = false;
  double mu = 0.0;  // multiplier of the spacing program
  std::vector<UeState> ues;  // scenario order
};

/// Builds the initial state: solves for T*, fixes counter thresholds and
/// precomputes the randomized service probabilities. Throws ConfigError
/// when the scenario lacks what the policy needs.
PolicyState make_policy_state(const Scenario& scenario, const PolicySpec& spec);

/// Slot-start bookkeeping for this slot's arrivals (positions, ascending).
/// Latency packets are always queued; they receive an index only under the
/// hierarchical, adaptive-weight and c-mu policies.
void hier_update_index(PolicyState& state, std::span<const std::size_t> arrivals, Slot t);

/// Highest-index held packet; throughput UEs only when nothing is held.
Action hier_select(const PolicyState& state, Slot t);

/// Applies the outcome of a transmission.
void hier_on_outcome(PolicyState& state, const Transmit& tx, bool success, Slot t);

/// rho_j := max(0, rho_j - eta (beta_j - L_j)) for every latency UE with a
/// latency estimate; refreshes the index of backlogged latency UEs.
void vw_update(PolicyState& state, std::span<const std::optional<double>> avg_latency, double eta);

/// Randomized step: picks the best AoI or throughput UE, then splits [0,1)
/// among backlogged latency UEs (theta each, ascending id) and that UE
/// (the remainder, last). `draw` is uniform on [0,1).
Action rd_select(const PolicyState& state, Slot t, double draw);

/// Serves the backlogged latency UE with the largest rho p / q.
Action cmu_select(const PolicyState& state, Slot t);

/// Arrival slots of the packets currently held for UE `ue`.
std::span<const Slot> pending_packets(const PolicyState& state, std::size_t ue);

}  // namespace hisched
