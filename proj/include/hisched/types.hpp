#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hisched {

/// Slot index. Slot 0 is the virtual origin; simulated slots start at 1.
using Slot = std::int64_t;

/// Structural problem with a scenario (bad field, duplicate id, ...).
/// Infeasibility is not an error; it is reported through FeasibilityReport.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run or sweep configuration that cannot be executed.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical routine failed to converge or was given an unsolvable input.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hisched
