#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "swimmer/kinematics.hpp"

namespace swimmer {

/// Motor -> threaded shaft -> carriage drive.
struct MechanismConfig {
  double motor_rpm = 100.0;      // rev/min
  double thread_pitch = 0.0025;  // m/rev
  double shaft_travel = 0.053;   // m
  double half_period = 5.0;      // s between motor reversals

  double carriage_speed() const { return motor_rpm / 60.0 * thread_pitch; }
  double period() const { return 2.0 * half_period; }

  bool operator==(const MechanismConfig&) const = default;
};

void validate_mechanism(const MechanismConfig& mech);

/// Carriage height above its start: a triangle wave rising for the first
/// half period and falling for the second.
double carriage_position(double t, const MechanismConfig& mech);

/// Shape of the rigid <-> flexible transition.
///  - cosine: k follows (1 + cos 2 pi phase) / 2 between k_max and k_min.
///  - linear_smoothed: k switches with the carriage direction; smoothstep
///    transitions of width `ramp_width` start at each reversal (phase 0 and
///    0.5) and k sits on a plateau for the rest of each half stroke.
///  - geometric: like cosine but interpolates log k.
/// The rest angle always follows the cosine profile.
enum class Ramp { cosine, linear_smoothed, geometric };

std::string_view to_string(Ramp ramp);
Ramp ramp_from_string(std::string_view name);

enum class GaitMode { controlled_flexible, fully_flexible, fully_rigid, reciprocal_prescribed };

std::string_view to_string(GaitMode mode);
/// Throws std::invalid_argument for unknown names.
GaitMode gait_mode_from_string(std::string_view name);

/// Periodic stiffness / rest-angle program shared by every joint.
///
/// Phase 0 is the end of the recovery stroke (rigid, straight); the power
/// stroke occupies [0, duty) and ends fully flexible and bent to `beta`.
/// `phase_offset` delays the rest-angle schedule relative to stiffness.
struct GaitSchedule {
  double period = 10.0;   // s
  double k_min = 1e-4;    // N m/rad
  double k_max = 1.0;     // N m/rad
  double beta = 0.7;      // rad per joint
  double duty = 0.5;
  double phase_offset = 0.0;
  Ramp ramp = Ramp::linear_smoothed;
  double ramp_width = 0.1;  // fraction of the cycle, linear_smoothed only
  GaitMode mode = GaitMode::controlled_flexible;

  bool operator==(const GaitSchedule&) const = default;
};

constexpr double kMaxStiffnessRatio = 1e6;

void validate_gait(const GaitSchedule& gait);

/// Stiffness and rest angle at one instant (identical for all joints).
struct JointActuation {
  double stiffness = 0.0;   // N m/rad
  double rest_angle = 0.0;  // rad
};

/// Piecewise-linear phase warp sending [0, duty) onto [0, 0.5) and
/// [duty, 1) onto [0.5, 1). Composed with the cosine ramps, whose slopes
/// vanish at warped phases 0 and 0.5, the schedules stay C1.
double warp_phase(double phase, double duty);

/// Throws std::out_of_range for phase outside [0, 1).
JointActuation gait_evaluate(const GaitSchedule& gait, double phase);

/// Phase in [0, 1) of time t.
double phase_at(double t, double period);

/// Per-joint stiffness and rest angles for the whole robot, indexed like the
/// joint block of q.
struct ActuationField {
  Eigen::VectorXd stiffness;
  Eigen::VectorXd rest_angle;
};

ActuationField actuation_field(const RobotConfig& config, const JointActuation& joint);

/// -k (theta - theta_rest) on each joint, zero on the body pose.
Eigen::VectorXd elastic_generalized_force(const GeneralizedCoords& q,
                                          const ActuationField& actuation);

/// Sum over joints of k (theta - theta_rest)^2 / 2.
double elastic_energy(const GeneralizedCoords& q, const ActuationField& actuation);

}  // namespace swimmer
