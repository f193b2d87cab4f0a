#include "swimmer/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "swimmer/errors.hpp"

namespace swimmer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

double cosine_weight(double phase) { return 0.5 * (1.0 + std::cos(kTwoPi * phase)); }

double stiffness_weight(const GaitSchedule& gait, double phase) {
  if (gait.ramp != Ramp::linear_smoothed) return cosine_weight(phase);
  // Cables slacken right after the carriage reverses upward and pull taut
  // right after it reverses downward.
  if (phase < 0.5) return 1.0 - smoothstep(phase / gait.ramp_width);
  return smoothstep((phase - 0.5) / gait.ramp_width);
}

}  // namespace

void validate_mechanism(const MechanismConfig& mech) {
  if (!(mech.motor_rpm > 0.0)) throw ConfigError("mechanism.motor_rpm", "must be > 0");
  if (!(mech.thread_pitch > 0.0)) throw ConfigError("mechanism.thread_pitch", "must be > 0");
  if (!(mech.shaft_travel > 0.0)) throw ConfigError("mechanism.shaft_travel", "must be > 0");
  if (!(mech.half_period > 0.0)) throw ConfigError("mechanism.half_period", "must be > 0");
  if (mech.carriage_speed() * mech.half_period > mech.shaft_travel)
    throw ConfigError("mechanism.half_period", "carriage would overrun the shaft travel");
}

double carriage_position(double t, const MechanismConfig& mech) {
  if (t < 0.0) throw std::invalid_argument("carriage_position: t must be >= 0");
  const double period = mech.period();
  const double local = t - period * std::floor(t / period);
  const double speed = mech.carriage_speed();
  if (local < mech.half_period) return speed * local;
  return std::max(0.0, speed * (period - local));
}

std::string_view to_string(GaitMode mode) {
  switch (mode) {
    case GaitMode::controlled_flexible: return "controlled_flexible";
    case GaitMode::fully_flexible: return "fully_flexible";
    case GaitMode::fully_rigid: return "fully_rigid";
    case GaitMode::reciprocal_prescribed: return "reciprocal_prescribed";
  }
  return "unknown";
}

std::string_view to_string(Ramp ramp) {
  switch (ramp) {
    case Ramp::cosine: return "cosine";
    case Ramp::linear_smoothed: return "linear_smoothed";
    case Ramp::geometric: return "geometric";
  }
  return "unknown";
}

Ramp ramp_from_string(std::string_view name) {
  for (Ramp r : {Ramp::cosine, Ramp::linear_smoothed, Ramp::geometric}) {
    if (to_string(r) == name) return r;
  }
  throw std::invalid_argument("unknown stiffness ramp '" + std::string(name) + "'");
}

GaitMode gait_mode_from_string(std::string_view name) {
  for (GaitMode m : {GaitMode::controlled_flexible, GaitMode::fully_flexible,
                     GaitMode::fully_rigid, GaitMode::reciprocal_prescribed}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown gait mode '" + std::string(name) + "'");
}

void validate_gait(const GaitSchedule& gait) {
  if (!(gait.period > 0.0)) throw ConfigError("gait.period", "must be > 0");
  if (!(gait.k_min > 0.0)) throw ConfigError("gait.k_min", "must be > 0");
  if (!(gait.k_max >= gait.k_min)) throw ConfigError("gait.k_max", "must be >= gait.k_min");
  if (gait.k_max / gait.k_min > kMaxStiffnessRatio)
    throw ConfigError("gait.k_max", "k_max / k_min must not exceed 1e6");
  if (!(std::abs(gait.beta) < std::numbers::pi / 2))
    throw ConfigError("gait.beta", "|beta| must be < pi/2");
  if (!(gait.ramp_width > 0.0 && gait.ramp_width <= 0.5))
    throw ConfigError("gait.ramp_width", "must lie in (0, 0.5]");
  if (!(gait.duty > 0.0 && gait.duty < 1.0))
    throw ConfigError("gait.duty", "must lie in (0, 1)");
  if (!(gait.phase_offset >= 0.0 && gait.phase_offset < 1.0))
    throw ConfigError("gait.phase_offset", "must lie in [0, 1)");
}

double warp_phase(double phase, double duty) {
  if (phase < duty) return 0.5 * phase / duty;
  return 0.5 + 0.5 * (phase - duty) / (1.0 - duty);
}

double phase_at(double t, double period) { return wrap_unit(t / period); }

JointActuation gait_evaluate(const GaitSchedule& gait, double phase) {
  if (!(phase >= 0.0 && phase < 1.0))
    throw std::out_of_range("gait phase must lie in [0, 1)");

  const double stiff_phase = warp_phase(phase, gait.duty);
  const double rest_phase = warp_phase(wrap_unit(phase - gait.phase_offset), gait.duty);
  const double rigid_weight = stiffness_weight(gait, stiff_phase);
  const double bend = gait.beta * (1.0 - cosine_weight(rest_phase));

  switch (gait.mode) {
    case GaitMode::controlled_flexible: {
      const double k = gait.ramp == Ramp::geometric
                           ? gait.k_min * std::pow(gait.k_max / gait.k_min, rigid_weight)
                           : gait.k_min + (gait.k_max - gait.k_min) * rigid_weight;
      return {k, bend};
    }
    case GaitMode::fully_flexible:
      return {gait.k_min, bend};
    case GaitMode::fully_rigid:
      return {gait.k_max, bend};
    case GaitMode::reciprocal_prescribed:
      return {gait.k_max, gait.beta * std::sin(kTwoPi * phase)};
  }
  throw std::logic_error("unhandled gait mode");
}

ActuationField actuation_field(const RobotConfig& config, const JointActuation& joint) {
  const int n = config.joint_count();
  return {Eigen::VectorXd::Constant(n, joint.stiffness),
          Eigen::VectorXd::Constant(n, joint.rest_angle)};
}

Eigen::VectorXd elastic_generalized_force(const GeneralizedCoords& q,
                                          const ActuationField& actuation) {
  const Eigen::Index n = actuation.stiffness.size();
  if (q.size() != n + 3 || actuation.rest_angle.size() != n)
    throw std::invalid_argument("elastic_generalized_force: dimension mismatch");
  Eigen::VectorXd force = Eigen::VectorXd::Zero(q.size());
  force.tail(n) = -actuation.stiffness.cwiseProduct(q.tail(n) - actuation.rest_angle);
  return force;
}

double elastic_energy(const GeneralizedCoords& q, const ActuationField& actuation) {
  const Eigen::Index n = actuation.stiffness.size();
  const Eigen::VectorXd strain = q.tail(n) - actuation.rest_angle;
  return 0.5 * actuation.stiffness.dot(strain.cwiseProduct(strain));
}

}  // namespace swimmer
