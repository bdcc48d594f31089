#include "hisched/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace hisched {

std::string_view to_string(UeClass c) {
  switch (c) {
    case UeClass::AoiSensitive: return "aoi";
    case UeClass::LatencySensitive: return "latency";
    case UeClass::ThroughputSensitive: return "throughput";
  }
  return "?";
}

std::string_view to_string(ProblemVariant v) {
  switch (v) {
    case ProblemVariant::LatencyConstrained: return "latency_constrained";
    case ProblemVariant::LatencyWeighted: return "latency_weighted";
  }
  return "?";
}

UeClass parse_ue_class(std::string_view s) {
  if (s == "aoi") return UeClass::AoiSensitive;
  if (s == "latency") return UeClass::LatencySensitive;
  if (s == "throughput") return UeClass::ThroughputSensitive;
  throw ScenarioError("unknown UE class '" + std::string(s) +
                      "' (expected aoi, latency or throughput)");
}

ProblemVariant parse_variant(std::string_view s) {
  if (s == "latency_constrained") return ProblemVariant::LatencyConstrained;
  if (s == "latency_weighted") return ProblemVariant::LatencyWeighted;
  throw ScenarioError("unknown variant '" + std::string(s) +
                      "' (expected latency_constrained or latency_weighted)");
}

namespace {

[[noreturn]] void fail(const UeConfig& ue, std::string_view field, std::string_view what) {
  std::ostringstream os;
  os << "UE " << ue.id << " (" << to_string(ue.ue_class) << "): field '" << field
     << "' " << what;
  throw ScenarioError(os.str());
}

void require_absent(const UeConfig& ue, const std::optional<double>& v, std::string_view field) {
  if (v) fail(ue, field, "does not apply to this class");
}

void require_present(const UeConfig& ue, const std::optional<double>& v, std::string_view field) {
  if (!v) fail(ue, field, "is required");
}

bool open_unit(double x) { return x > 0.0 && x < 1.0; }
bool half_open_unit(double x) { return x > 0.0 && x <= 1.0; }

void check_ue(const UeConfig& ue, ProblemVariant variant) {
  if (!std::isfinite(ue.p) || !half_open_unit(ue.p)) fail(ue, "p", "must lie in (0,1]");
  if (ue.rho && !(std::isfinite(*ue.rho) && *ue.rho > 0.0)) fail(ue, "rho", "must be positive");

  switch (ue.ue_class) {
    case UeClass::AoiSensitive:
      require_present(ue, ue.q, "q");
      require_present(ue, ue.rho, "rho");
      require_absent(ue, ue.beta, "beta");
      require_absent(ue, ue.alpha, "alpha");
      break;
    case UeClass::LatencySensitive:
      require_present(ue, ue.q, "q");
      require_absent(ue, ue.alpha, "alpha");
      if (variant == ProblemVariant::LatencyWeighted) require_present(ue, ue.rho, "rho");
      if (variant == ProblemVariant::LatencyConstrained) require_present(ue, ue.beta, "beta");
      if (ue.beta && !(std::isfinite(*ue.beta) && *ue.beta >= 1.0)) fail(ue, "beta", "must be at least 1");
      break;
    case UeClass::ThroughputSensitive:
      // Always backlogged; an explicit q is tolerated only when it says so.
      if (ue.q && *ue.q != 1.0) fail(ue, "q", "must be absent (throughput UEs are always backlogged)");
      require_absent(ue, ue.rho, "rho");
      require_absent(ue, ue.beta, "beta");
      require_present(ue, ue.alpha, "alpha");
      if (!(std::isfinite(*ue.alpha) && open_unit(*ue.alpha))) fail(ue, "alpha", "must lie in (0,1)");
      break;
  }
  if (ue.q && !(std::isfinite(*ue.q) && half_open_unit(*ue.q))) fail(ue, "q", "must lie in (0,1]");
}

}  // namespace

Scenario::Scenario(std::vector<UeConfig> ues, ProblemVariant variant)
    : ues_(std::move(ues)), variant_(variant) {
  if (ues_.empty()) throw ScenarioError("scenario has no UEs");
  std::set<int> ids;
  for (auto& ue : ues_) {
    if (!ids.insert(ue.id).second) {
      throw ScenarioError("duplicate UE id " + std::to_string(ue.id));
    }
    check_ue(ue, variant_);
    if (ue.is_throughput()) ue.q.reset();
  }
  std::sort(ues_.begin(), ues_.end(),
            [](const UeConfig& a, const UeConfig& b) { return a.id < b.id; });
}

std::size_t Scenario::index_of(int id) const {
  auto it = std::lower_bound(ues_.begin(), ues_.end(), id,
                             [](const UeConfig& u, int v) { return u.id < v; });
  if (it == ues_.end() || it->id != id) {
    throw ScenarioError("no UE with id " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - ues_.begin());
}

bool Scenario::has_class(UeClass c) const {
  return std::any_of(ues_.begin(), ues_.end(),
                     [c](const UeConfig& u) { return u.ue_class == c; });
}

Scenario Scenario::with_alpha(int id, double alpha) const {
  auto ues = ues_;
  auto& ue = ues[index_of(id)];
  if (!ue.is_throughput()) throw ScenarioError("alpha applies only to throughput UEs");
  ue.alpha = alpha;
  return Scenario(std::move(ues), variant_);
}

Scenario Scenario::with_beta(int id, double beta) const {
  auto ues = ues_;
  auto& ue = ues[index_of(id)];
  if (!ue.is_latency()) throw ScenarioError("beta applies only to latency UEs");
  ue.beta = beta;
  return Scenario(std::move(ues), variant_);
}

Scenario Scenario::with_variant(ProblemVariant v) const { return Scenario(ues_, v); }

Scenario Scenario::with_rho_scaled(double factor) const {
  auto ues = ues_;
  for (auto& ue : ues) {
    if (ue.rho) *ue.rho *= factor;
  }
  return Scenario(std::move(ues), variant_);
}

Scenario Scenario::only(UeClass c) const {
  std::vector<UeConfig> kept;
  std::copy_if(ues_.begin(), ues_.end(), std::back_inserter(kept),
               [c](const UeConfig& u) { return u.ue_class == c; });
  return Scenario(std::move(kept), variant_);
}

double theta(const UeConfig& ue) {
  if (!ue.is_latency() || !ue.beta || !ue.q) {
    throw ScenarioError("theta needs a latency UE with q and beta (UE " + std::to_string(ue.id) + ")");
  }
  const double q = *ue.q;
  return (q + (1.0 - q) / *ue.beta) / ue.p;
}

double theta_sum(const Scenario& scenario) {
  if (scenario.variant() != ProblemVariant::LatencyConstrained) {
    throw ScenarioError("theta_sum requires the latency_constrained variant");
  }
  double sum = 0.0;
  for (const auto& ue : scenario.ues()) {
    if (ue.is_latency()) sum += theta(ue);
  }
  return sum;
}

FeasibilityReport validate(const Scenario& scenario) {
  FeasibilityReport r;
  double load = 0.0;
  for (const auto& ue : scenario.ues()) {
    if (ue.is_latency()) load += *ue.q / ue.p;
    if (ue.is_throughput()) load += *ue.alpha / ue.p;
  }
  r.load = load;
  r.zeta = 1.0 - load;
  r.feasible = load < 1.0;
  if (scenario.variant() == ProblemVariant::LatencyConstrained) {
    r.theta_sum = theta_sum(scenario);
    r.rd_feasible = *r.theta_sum <= 1.0;
  }
  return r;
}

}  // namespace hisched
