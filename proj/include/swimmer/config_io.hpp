#pragma once

#include <string>
#include <string_view>

#include "swimmer/actuation.hpp"
#include "swimmer/dynamics.hpp"
#include "swimmer/kinematics.hpp"

namespace swimmer {

/// Everything a run needs, as read from a configuration document.
struct RunConfig {
  RobotConfig robot = default_robot();
  MechanismConfig mechanism;
  GaitSchedule gait;  // gait.period is always mechanism.period()
  SimSettings sim;
  int n_cycles = 10;

  bool operator==(const RunConfig&) const = default;
};

constexpr int kConfigVersion = 1;

/// Parses a JSON configuration document. Missing keys take their defaults;
/// unknown keys, syntax errors and invariant violations throw ConfigError
/// whose field() names the offending path.
RunConfig parse_config(std::string_view text);

/// Writes every field explicitly; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Reads and parses a file. Throws std::ios_base::failure when unreadable.
RunConfig load_config(const std::string& path);

/// Closest candidate by edit distance, or empty when nothing is close.
std::string nearest_key(std::string_view key, const std::vector<std::string_view>& candidates);

}  // namespace swimmer
