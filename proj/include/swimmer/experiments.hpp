#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swimmer/dynamics.hpp"

namespace swimmer {

/// Default schedule for one of the tested flagella configurations.
/// Throws std::invalid_argument for an unknown name.
GaitSchedule preset_gait(GaitMode mode, const GaitSchedule& base = {});
GaitSchedule preset_gait(std::string_view name, const GaitSchedule& base = {});

struct CycleMetrics {
  /// Body-center displacement per cycle, projected on the travel direction.
  std::vector<double> per_cycle_displacement;  // m
  double mean = 0.0;              // m/cycle over cycles 2..n (cycle 1 if n == 1)
  double std = 0.0;               // m/cycle, sample standard deviation, same cycles
  double first_cycle = 0.0;       // m
  double net_displacement = 0.0;  // m
  Eigen::Vector2d travel_direction = Eigen::Vector2d::UnitX();
  int n_cycles = 0;
  double cycle_period = 0.0;      // s

  double coefficient_of_variation() const;
};

/// Throws std::invalid_argument when the trajectory spans less than a cycle.
CycleMetrics displacement_per_cycle(const Trajectory& traj);

struct NetDisplacement {
  Eigen::Vector2d vector = Eigen::Vector2d::Zero();
  double magnitude = 0.0;
};

NetDisplacement net_displacement(const Trajectory& traj);

struct TipPoint {
  double t = 0.0;
  Eigen::Vector2d position;
};

/// Path of the body's forward tip (center + length/2 along the body axis).
std::vector<TipPoint> tip_trajectory(const Trajectory& traj, const RobotConfig& config);

/// Non-reciprocal prescribed stroke: joints bend proximal-first during the
/// first half cycle and straighten proximal-first during the second.
PrescribedMotion two_phase_stroke(const RobotConfig& config, double amplitude, double period);

struct ScallopReport {
  double displacement_per_cycle = 0.0;       // m, at the requested dt
  double displacement_per_cycle_half = 0.0;  // m, at dt / 2
  double body_lengths = 0.0;                 // per-cycle displacement / body length
  double refinement_ratio = 0.0;             // coarse / fine residual
  bool at_roundoff = false;                  // both residuals below kRoundoffFloor
  bool passed = false;
  bool symmetry_broken = false;
  std::string summary;
};

/// Residuals below this many body lengths per cycle are round-off; they
/// cannot shrink further under refinement.
constexpr double kScallopRoundoffFloor = 1e-12;
constexpr double kScallopTolerance = 1e-6;  // body lengths per cycle
constexpr double kScallopRefinement = 3.5;

/// Runs the prescribed-shape integrator at dt and dt/2 and checks the
/// per-cycle displacement against the scallop theorem. Without `motion`
/// a reciprocal sinusoid of amplitude `amplitude` on every joint is used.
ScallopReport scallop_check(const RobotConfig& config, const SimSettings& settings,
                            const PrescribedMotion* motion = nullptr, double amplitude = 0.35,
                            double period = 10.0, int n_cycles = 2);

struct PresetResult {
  std::string name;
  GaitSchedule gait;
  CycleMetrics metrics;
};

struct ComparisonReport {
  std::vector<PresetResult> presets;
  /// Preset names by decreasing magnitude of mean per-cycle displacement.
  std::vector<std::string> ordering;
  /// controlled_flexible mean / fully_flexible mean; NaN when either is missing.
  double controlled_to_flexible = 0.0;
  int n_cycles = 0;
  RobotConfig config;
  SimSettings settings;
};

ComparisonReport compare_gaits(const RobotConfig& config, const std::vector<GaitMode>& presets,
                               int n_cycles, const SimSettings& settings,
                               const GaitSchedule& base = {});

}  // namespace swimmer
