#pragma once

#include <random>

#include "swimmer/dynamics.hpp"
#include "swimmer/kinematics.hpp"

namespace swimmer::testing {

// Body plus one pair of mirrored three-segment flagella: cheap to simulate.
inline RobotConfig small_robot() {
  RobotConfig config = default_robot();
  config.flagella.resize(2);
  for (auto& f : config.flagella) {
    f.n_segments = 3;
    f.segment_length = 0.03;
  }
  return config;
}

inline SimSettings coarse_settings(int steps = 400) {
  SimSettings s;
  s.dt = 10.0 / steps;
  return s;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace swimmer::testing
