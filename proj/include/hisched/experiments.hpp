#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hisched/sim.hpp"
#include "hisched/sweep.hpp"
#include "hisched/table.hpp"

namespace hisched {

/// The three-UE evaluation system: AoI UE 1 (q 0.9, p 0.7), latency UE 2
/// (q 0.2, p 0.8, beta 2), throughput UE 3 (p 0.9, alpha 0.2), all rho 1.
extern const std::string_view kThreeUeJson;
Scenario three_ue_scenario();

/// Per-UE rows plus one "summary" row per run.
Table run_table(const std::vector<std::pair<std::string, RunReport>>& runs);
/// As run_table, prefixed by param, value, replicate, feasible, note.
Table sweep_table(const std::vector<SweepRow>& rows, SweepParam param);

enum class Preset { Fig4, Fig5Cost, Fig5Weights, Fig6, Fig8 };

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view s);
const std::vector<Preset>& all_presets();

struct PresetOptions {
  std::optional<Slot> horizon;  // preset default when absent
  int seeds = 5;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

Slot default_horizon(Preset p);

/// Runs the preset's sweep and returns its per-point CSV table.
Table run_preset(Preset p, const PresetOptions& options);

struct Verdict {
  std::string criterion;
  bool pass = false;
  std::string detail;
};

/// Acceptance checks that apply to a preset table.
std::vector<Verdict> preset_verdicts(Preset p, const Table& table);

/// Recognises a preset table by its header.
std::optional<Preset> detect_preset(const Table& table);

/// Markdown summary: the table, then verdicts when the schema is known.
std::string render_report(const Table& table);

}  // namespace hisched
