#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hisched/model.hpp"
#include "hisched/types.hpp"

namespace hisched {

/// Online statistics for one UE over one run.
///
/// Slots up to `warmup` are excluded from the time averages: AoI samples
/// and deliveries are counted only in slots after warmup, latency only for
/// packets that arrived after warmup. With warmup = 0 every average starts
/// at slot 1.
class UeMetrics {
 public:
  struct Delivery {
    Slot arrival;
    Slot latency;
  };

  explicit UeMetrics(Slot warmup = 0) : warmup_(warmup) {}

  /// Adds A(t) = t - lambda to the AoI sum. Call once per slot, after the
  /// previous slot's deliveries are recorded.
  void step_aoi(Slot t);

  void on_arrival(Slot g);
  void on_attempt(Slot t);
  /// Packet that arrived in slot g delivered in slot t (requires g <= t).
  void on_delivery(Slot g, Slot t);

  Slot warmup() const { return warmup_; }
  /// lambda(t+1): arrival slot of the freshest delivered packet, 0 if none.
  Slot freshest() const { return lambda_; }
  std::int64_t arrivals() const { return arrivals_; }
  std::int64_t deliveries() const { return deliveries_; }
  std::int64_t attempts() const { return attempts_; }
  double aoi_sum() const { return aoi_sum_; }
  std::int64_t latency_sum_delivered() const { return latency_sum_; }
  std::int64_t latency_count_delivered() const { return latency_count_; }
  const std::vector<Delivery>& delivered() const { return delivered_; }

  /// Sum of (t - g + 1) over still-pending packets, which are charged as if
  /// delivered at t. Packets that arrived during warmup are skipped.
  std::int64_t backlog_age_sum(Slot t, std::span<const Slot> pending) const;
  std::int64_t backlog_count(std::span<const Slot> pending) const;

  /// Average latency until slot t with pending packets charged at r = t.
  /// Absent when no measured packet exists.
  std::optional<double> running_latency(Slot t, std::span<const Slot> pending) const;

 private:
  Slot warmup_;
  Slot lambda_ = 0;
  double aoi_sum_ = 0.0;
  std::int64_t arrivals_ = 0;
  std::int64_t deliveries_ = 0;  // deliveries in measured slots
  std::int64_t attempts_ = 0;
  std::int64_t latency_sum_ = 0;         // over measured delivered packets
  std::int64_t latency_count_ = 0;
  std::vector<Delivery> delivered_;      // measured deliveries, delivery order
};

/// Statistics over the inter-arrival times of delivered packets, taken in
/// increasing order of arrival slot.
struct InterArrivalStats {
  std::int64_t samples = 0;        // deliveries - 1
  std::int64_t sum = 0;            // sum T_i == last arrival - first arrival
  double mean = 0.0;               // t_bar
  double variance = 0.0;           // mean of (T_i - t_bar)^2, centred on t_bar
  std::int64_t latency_terms = 0;  // sum T_i * (L_i - 1)
};

InterArrivalStats inter_arrival_stats(std::span<const UeMetrics::Delivery> delivered);

struct UeSummary {
  int id = 0;
  UeClass ue_class = UeClass::AoiSensitive;
  double avg_aoi = 0.0;
  std::optional<double> avg_latency;  // absent for throughput UEs or no packets
  double throughput = 0.0;
  std::optional<double> t_bar;        // absent with fewer than 2 deliveries
  std::optional<double> delta_sq;
  double attempts_share = 0.0;
  std::int64_t arrivals = 0;
  std::int64_t deliveries = 0;
  std::int64_t attempts = 0;
  /// sum T_i (L_i - 1) over delivered packets with a predecessor.
  std::int64_t latency_terms = 0;
  /// sum of L over every measured packet, pending ones charged at r = t.
  std::int64_t latency_total = 0;
};

/// Closes the books at horizon t. `pending` holds arrival slots of packets
/// the scheduler still holds for this UE.
UeSummary finalize(const UeMetrics& m, const UeConfig& ue, Slot horizon,
                   std::span<const Slot> pending);

struct AuditEntry {
  int ue_id = 0;
  double avg_aoi = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
};

/// |avg_aoi - (0.5 (t_bar + delta_sq / t_bar + 1) + sum T (L - 1) / t)|.
/// Absent when the UE has fewer than two deliveries.
std::optional<AuditEntry> aoi_decomposition_audit(const UeSummary& s, Slot measured_slots);

struct CostBreakdown {
  double cost_objective = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Assembles the objective and its two-term split from finalized summaries.
/// `per_ue` is in scenario order.
CostBreakdown assemble_cost(std::span<const UeSummary> per_ue, const Scenario& scenario,
                            Slot measured_slots);

}  // namespace hisched
