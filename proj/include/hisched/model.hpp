#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hisched/types.hpp"

namespace hisched {

enum class UeClass { AoiSensitive, LatencySensitive, ThroughputSensitive };

/// Which optimization problem a scenario poses.
///  - LatencyConstrained: minimize weighted AoI subject to average-latency
///    ceilings (beta) and throughput floors (alpha).
///  - LatencyWeighted: minimize weighted AoI plus weighted latency (rho on
///    latency UEs) subject to throughput floors.
enum class ProblemVariant { LatencyConstrained, LatencyWeighted };

std::string_view to_string(UeClass c);
std::string_view to_string(ProblemVariant v);
UeClass parse_ue_class(std::string_view s);
ProblemVariant parse_variant(std::string_view s);

struct UeConfig {
  int id = 0;
  UeClass ue_class = UeClass::AoiSensitive;
  std::optional<double> q;  // arrival probability; absent for throughput UEs
  double p = 1.0;           // transmission success probability
  std::optional<double> rho;
  std::optional<double> beta;
  std::optional<double> alpha;

  /// Per-slot arrival probability. Throughput UEs are always backlogged.
  double arrival_rate() const { return q.value_or(1.0); }

  bool is_aoi() const { return ue_class == UeClass::AoiSensitive; }
  bool is_latency() const { return ue_class == UeClass::LatencySensitive; }
  bool is_throughput() const { return ue_class == UeClass::ThroughputSensitive; }

  bool operator==(const UeConfig&) const = default;
};

/// A validated UE population. UEs are kept sorted by id, so positional
/// index order equals id order everywhere downstream.
class Scenario {
 public:
  /// Throws ScenarioError on any structural violation.
  Scenario(std::vector<UeConfig> ues, ProblemVariant variant);

  const std::vector<UeConfig>& ues() const { return ues_; }
  ProblemVariant variant() const { return variant_; }
  std::size_t size() const { return ues_.size(); }

  /// Position of the UE with this id; throws ScenarioError if absent.
  std::size_t index_of(int id) const;
  const UeConfig& ue(int id) const { return ues_[index_of(id)]; }

  bool has_class(UeClass c) const;

  /// Copies with one parameter replaced; the result is re-validated.
  Scenario with_alpha(int id, double alpha) const;
  Scenario with_beta(int id, double beta) const;
  Scenario with_variant(ProblemVariant v) const;
  /// Multiplies every rho (AoI and latency UEs) by factor.
  Scenario with_rho_scaled(double factor) const;
  /// Keeps only UEs of the given class.
  Scenario only(UeClass c) const;

  bool operator==(const Scenario&) const = default;

 private:
  std::vector<UeConfig> ues_;
  ProblemVariant variant_;
};

struct FeasibilityReport {
  double load = 0.0;  // sum q_j/p_j over latency UEs + sum alpha_k/p_k over throughput UEs
  bool feasible = true;
  double zeta = 1.0;  // 1 - load
  std::optional<double> theta_sum;  // LatencyConstrained only
  std::optional<bool> rd_feasible;  // theta_sum <= 1
};

/// Pure feasibility check. Infeasible scenarios are reported, not rejected.
FeasibilityReport validate(const Scenario& scenario);

/// Per-slot service probability the randomized policy gives latency UE `ue`
/// so that its effective Geo/Geo/1 service rate meets beta exactly.
double theta(const UeConfig& ue);

/// Sum of theta over latency UEs. Throws ScenarioError for the
/// LatencyWeighted variant (no beta to work from).
double theta_sum(const Scenario& scenario);

}  // namespace hisched
