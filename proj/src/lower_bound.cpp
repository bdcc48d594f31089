#include "hisched/sim.hpp"
#include "hisched/solver.hpp"

namespace hisched {

LowerBound lower_bound(const Scenario& scenario, Slot horizon, std::uint64_t seed) {
  if (scenario.variant() != ProblemVariant::LatencyWeighted) {
    throw SolverError("lower bound needs the latency-weighted variant");
  }
  const auto feas = validate(scenario);
  if (!feas.feasible) throw SolverError("lower bound needs a feasible scenario");

  LowerBound lb;
  std::vector<SpacingTerm> terms;
  double offset = 0.0;
  for (const auto& ue : scenario.ues()) {
    if (!ue.is_aoi()) continue;
    const double q = *ue.q;
    terms.push_back({ue.id, (1.0 - q) / (2.0 * q * q), *ue.rho, ue.p});
    offset += 0.5 * *ue.rho;
  }
  if (!terms.empty()) lb.lb_f1 = solve_spacing(terms, feas.zeta).objective + offset;

  if (scenario.has_class(UeClass::LatencySensitive)) {
    RunConfig cfg{scenario.only(UeClass::LatencySensitive), PolicySpec{PolicyKind::CMu}, horizon, seed, 0};
    lb.lb_f2 = run(cfg).cost.f2;
  }
  lb.lb = lb.lb_f1 + lb.lb_f2;
  return lb;
}

}  // namespace hisched
