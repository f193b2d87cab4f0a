#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "swimmer/actuation.hpp"
#include "swimmer/kinematics.hpp"

namespace swimmer {

enum class Scheme { implicit_midpoint, backward_euler };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

struct SimSettings {
  double dt = 0.0;  // s; 0 selects period / 2000
  Scheme scheme = Scheme::implicit_midpoint;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  double condition_limit = 1e12;
  int max_halvings = 10;

  bool operator==(const SimSettings&) const = default;
};

void validate_settings(const SimSettings& settings);

/// Steps per stroke cycle implied by `settings.dt`; the step actually taken
/// is period / steps so cycle boundaries land on samples.
int steps_per_cycle(const SimSettings& settings, double period);

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  GeneralizedCoords q;
  double phase = 0.0;
  double stiffness = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  RobotConfig config;
  GaitSchedule gait;
  double dt = 0.0;
  int steps_per_cycle = 0;

  double period() const { return gait.period; }
  int completed_cycles() const;
};

/// Overdamped force balance R(q) q-dot = Q_elastic(q, t).
Eigen::VectorXd solve_velocity(const GeneralizedCoords& q, double t, const RobotConfig& config,
                               const GaitSchedule& gait, double condition_limit = 1e12);

/// One step of size `dt` from time t. Newton failures halve the step
/// internally up to `settings.max_halvings` times before throwing
/// NumericalError.
GeneralizedCoords step(const GeneralizedCoords& q, double t, double dt,
                       const SimSettings& settings, const RobotConfig& config,
                       const GaitSchedule& gait);

/// Integrates `n_cycles` stroke cycles from straight flagella at the
/// phase-0 rest angle. reciprocal_prescribed gaits are routed through
/// simulate_prescribed.
Trajectory simulate(const RobotConfig& config, const GaitSchedule& gait, int n_cycles,
                    const SimSettings& settings, const Pose2& start = {});

/// Joint angles imposed as functions of time; only the body pose is solved for.
struct PrescribedMotion {
  double period = 10.0;
  std::function<Eigen::VectorXd(double)> angles;
  std::function<Eigen::VectorXd(double)> rates;
};

/// theta_j(t) = amplitude * sin(2 pi t / period) on every joint.
PrescribedMotion reciprocal_sinusoid(const RobotConfig& config, double amplitude,
                                     double period);

/// Body-frame velocity (vx, vy, omega) of the body for a given shape and
/// shape rate, from the 3x3 force/torque balance.
Eigen::Vector3d body_velocity(const Eigen::VectorXd& joints, const Eigen::VectorXd& joint_rates,
                              const RobotConfig& config);

Trajectory simulate_prescribed(const RobotConfig& config, const PrescribedMotion& motion,
                               int n_cycles, const SimSettings& settings,
                               const Pose2& start = {});

}  // namespace swimmer
