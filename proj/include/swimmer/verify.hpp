#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "swimmer/config_io.hpp"

namespace swimmer {

/// Pose in a few centimetres / any heading, joint angles in [-1, 1] rad.
GeneralizedCoords random_state(const RobotConfig& config, std::mt19937_64& rng);

/// True when every flagellum has a partner identical except for `mirror`.
bool is_mirror_symmetric(const RobotConfig& config);

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

/// Property suite behind `swimmer verify`: kinematics, resistance matrix,
/// internal actuation, scallop theorem, symmetry breaking, mirror symmetry
/// and SE(2) equivariance on the given configuration.
std::vector<CheckResult> run_verification(const RunConfig& run, std::uint64_t seed = 7);

}  // namespace swimmer
