#include "hisched/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace hisched {

void UeMetrics::step_aoi(Slot t) {
  if (t > warmup_) aoi_sum_ += static_cast<double>(t - lambda_);
}

void UeMetrics::on_arrival(Slot) { ++arrivals_; }

void UeMetrics::on_attempt(Slot t) {
  if (t > warmup_) ++attempts_;
}

void UeMetrics::on_delivery(Slot g, Slot t) {
  if (g > t) throw std::logic_error("delivery before arrival");
  lambda_ = std::max(lambda_, g);
  if (g > warmup_) {
    latency_sum_ += t - g + 1;
    ++latency_count_;
  }
  if (t > warmup_) {
    ++deliveries_;
    delivered_.push_back({g, t - g + 1});
  }
}

std::int64_t UeMetrics::backlog_age_sum(Slot t, std::span<const Slot> pending) const {
  std::int64_t sum = 0;
  for (Slot g : pending) {
    if (g > warmup_) sum += t - g + 1;
  }
  return sum;
}

std::int64_t UeMetrics::backlog_count(std::span<const Slot> pending) const {
  return std::count_if(pending.begin(), pending.end(), [this](Slot g) { return g > warmup_; });
}

std::optional<double> UeMetrics::running_latency(Slot t, std::span<const Slot> pending) const {
  const std::int64_t count = latency_count_ + backlog_count(pending);
  if (count == 0) return std::nullopt;
  return static_cast<double>(latency_sum_ + backlog_age_sum(t, pending)) /
         static_cast<double>(count);
}

InterArrivalStats inter_arrival_stats(std::span<const UeMetrics::Delivery> delivered) {
  InterArrivalStats s;
  if (delivered.size() < 2) return s;

  // Deliveries may be out of arrival order (LIFO latency queues); the
  // statistics are defined over arrival order.
  std::vector<UeMetrics::Delivery> sorted(delivered.begin(), delivered.end());
  if (!std::is_sorted(sorted.begin(), sorted.end(),
                      [](const auto& a, const auto& b) { return a.arrival < b.arrival; })) {
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.arrival < b.arrival; });
  }

  __int128 sum = 0;
  __int128 sum_sq = 0;
  std::int64_t terms = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const std::int64_t gap = sorted[i].arrival - sorted[i - 1].arrival;
    sum += gap;
    sum_sq += static_cast<__int128>(gap) * gap;
    terms += gap * (sorted[i].latency - 1);
  }
  const auto n = static_cast<std::int64_t>(sorted.size() - 1);
  s.samples = n;
  s.sum = static_cast<std::int64_t>(sum);
  s.mean = static_cast<double>(s.sum) / static_cast<double>(n);
  // n * sum_sq - sum^2 is exact in 128-bit integers.
  const __int128 centred = static_cast<__int128>(n) * sum_sq - sum * sum;
  s.variance = static_cast<double>(static_cast<long double>(centred) /
                                   (static_cast<long double>(n) * static_cast<long double>(n)));
  s.latency_terms = terms;
  return s;
}

UeSummary finalize(const UeMetrics& m, const UeConfig& ue, Slot horizon,
                   std::span<const Slot> pending) {
  const Slot measured = horizon - m.warmup();
  if (measured <= 0) throw std::logic_error("horizon does not exceed warmup");
  const double span = static_cast<double>(measured);

  UeSummary s;
  s.id = ue.id;
  s.ue_class = ue.ue_class;
  s.avg_aoi = m.aoi_sum() / span;
  s.throughput = static_cast<double>(m.deliveries()) / span;
  s.attempts_share = static_cast<double>(m.attempts()) / span;
  s.arrivals = ue.is_throughput() ? measured : m.arrivals();
  s.deliveries = m.deliveries();
  s.attempts = m.attempts();

  if (!ue.is_throughput()) {
    s.latency_total = m.latency_sum_delivered() + m.backlog_age_sum(horizon, pending);
    s.avg_latency = m.running_latency(horizon, pending);
  }

  const auto stats = inter_arrival_stats(m.delivered());
  if (stats.samples > 0) {
    s.t_bar = stats.mean;
    s.delta_sq = stats.variance;
    s.latency_terms = stats.latency_terms;
  }
  return s;
}

std::optional<AuditEntry> aoi_decomposition_audit(const UeSummary& s, Slot measured_slots) {
  if (!s.t_bar || !s.delta_sq) return std::nullopt;
  AuditEntry a;
  a.ue_id = s.id;
  a.avg_aoi = s.avg_aoi;
  a.predicted = 0.5 * (*s.t_bar + *s.delta_sq / *s.t_bar + 1.0) +
                static_cast<double>(s.latency_terms) / static_cast<double>(measured_slots);
  a.residual = std::abs(a.avg_aoi - a.predicted);
  return a;
}

CostBreakdown assemble_cost(std::span<const UeSummary> per_ue, const Scenario& scenario,
                            Slot measured_slots) {
  CostBreakdown c;
  const double span = static_cast<double>(measured_slots);
  const bool weighted_latency = scenario.variant() == ProblemVariant::LatencyWeighted;
  for (std::size_t i = 0; i < per_ue.size(); ++i) {
    const auto& ue = scenario.ues().at(i);
    const auto& s = per_ue[i];
    if (ue.is_aoi()) {
      const double rho = *ue.rho;
      c.cost_objective += rho * s.avg_aoi;
      if (s.t_bar) c.f1 += 0.5 * rho * (*s.t_bar + *s.delta_sq / *s.t_bar + 1.0);
      c.f2 += rho * static_cast<double>(s.latency_terms) / span;
    } else if (ue.is_latency() && ue.rho) {
      const double rho = *ue.rho;
      c.f2 += (rho / *ue.q) * static_cast<double>(s.latency_total) / span;
      if (weighted_latency && s.avg_latency) c.cost_objective += rho * *s.avg_latency;
    }
  }
  return c;
}

}  // namespace hisched
