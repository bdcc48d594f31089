#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hisched/model.hpp"

namespace hisched {

// Scenario documents are JSON:
//
//   {
//     "variant": "latency_weighted",
//     "ue": [
//       {"id": 1, "class": "aoi",        "q": 0.9, "p": 0.7, "rho": 1},
//       {"id": 2, "class": "latency",    "q": 0.2, "p": 0.8, "rho": 1},
//       {"id": 3, "class": "throughput", "p": 0.9, "alpha": 0.2}
//     ]
//   }
//
// Unknown keys are rejected. Diagnostics name the offending key path
// (for example "ue[2].beta"); syntax errors carry line and column.

Scenario parse_scenario_text(std::string_view text, std::string_view source = "<string>");
Scenario parse_scenario(const std::filesystem::path& path);

/// Canonical JSON form; parse_scenario_text(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& scenario);

}  // namespace hisched
