#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hisched/sim.hpp"

namespace hisched {

enum class SweepParam { Alpha, Beta };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view s);

struct SweepSpec {
  RunConfig base;  // base.seed is the seed base
  SweepParam param = SweepParam::Alpha;
  std::optional<int> ue_id;  // defaults to the single UE the parameter fits
  std::vector<double> grid;
  int seeds = 1;
  bool with_lb = false;  // attach a lower bound to every feasible run
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  std::size_t point = 0;
  double value = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  bool feasible = true;
  std::string note;  // why the point was not run
  std::optional<RunReport> report;
};

/// Grid x replicates, run in parallel, returned in grid order
/// (point-major, then replicate). Seeds come from derive_seed. Points the
/// scenario or policy rejects come back as infeasible rows.
std::vector<SweepRow> sweep(const SweepSpec& spec);

/// a, a+step, ..., up to b inclusive (within step/1e6). Throws ConfigError
/// on a non-positive step or b < a.
std::vector<double> parse_grid(std::string_view text);

/// Id of the UE a parameter applies to when the scenario has exactly one
/// candidate.
int default_sweep_ue(const Scenario& scenario, SweepParam param);

}  // namespace hisched
