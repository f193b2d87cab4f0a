#include "swimmer/dynamics.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "swimmer/errors.hpp"
#include "swimmer/hydrodynamics.hpp"

namespace swimmer {

namespace {

class NewtonDiverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

Eigen::LLT<Eigen::MatrixXd> factor_resistance(const Eigen::MatrixXd& r, double condition_limit) {
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() != Eigen::Success)
    throw NumericalError("singular configuration: resistance matrix is not positive definite");
  const double rcond = llt.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > condition_limit) {
    std::ostringstream msg;
    msg << "singular configuration: resistance matrix condition number "
        << std::setprecision(3) << (rcond > 0.0 ? 1.0 / rcond : INFINITY) << " exceeds limit "
        << condition_limit;
    throw NumericalError(msg.str());
  }
  return llt;
}

double stage_weight(Scheme scheme) { return scheme == Scheme::implicit_midpoint ? 0.5 : 1.0; }

// Solves Delta = h f(q + c Delta, t + c h) by simplified Newton; the
// Jacobian keeps the stiff elastic term and drops dR/dq.
GeneralizedCoords newton_step(const GeneralizedCoords& q, double t, double h,
                              const SimSettings& settings, const RobotConfig& config,
                              const GaitSchedule& gait) {
  const double c = stage_weight(settings.scheme);
  const ActuationField act =
      actuation_field(config, gait_evaluate(gait, phase_at(t + c * h, gait.period)));
  const Eigen::Index nj = act.stiffness.size();

  Eigen::MatrixXd r = assemble_resistance_matrix(q, config);
  Eigen::MatrixXd newton_matrix = r;
  newton_matrix.diagonal().tail(nj) += c * h * act.stiffness;
  Eigen::VectorXd delta = newton_matrix.llt().solve(h * elastic_generalized_force(q, act));

  for (int iter = 0; iter < settings.newton_max_iter; ++iter) {
    const GeneralizedCoords stage = q + c * delta;
    r = assemble_resistance_matrix(stage, config);
    const Eigen::VectorXd residual_force = r * delta - h * elastic_generalized_force(stage, act);
    // The stage pose moves by round-off between iterations; one condition
    // estimate per step is enough.
    const auto llt = iter == 0 ? factor_resistance(r, settings.condition_limit)
                               : Eigen::LLT<Eigen::MatrixXd>(r);
    const Eigen::VectorXd residual = llt.solve(residual_force);
    if (!residual.allFinite()) break;
    if (residual.lpNorm<Eigen::Infinity>() <= settings.newton_tol) return q + delta;

    newton_matrix = r;
    newton_matrix.diagonal().tail(nj) += c * h * act.stiffness;
    delta -= newton_matrix.llt().solve(residual_force);
  }
  throw NewtonDiverged("Newton iteration did not converge");
}

GeneralizedCoords step_with_halving(const GeneralizedCoords& q, double t, double h,
                                    const SimSettings& settings, const RobotConfig& config,
                                    const GaitSchedule& gait, int halvings_left) {
  try {
    return newton_step(q, t, h, settings, config, gait);
  } catch (const NewtonDiverged&) {
    if (halvings_left == 0)
      throw NumericalError("Newton iteration did not converge after " +
                           std::to_string(settings.max_halvings) + " step halvings at t = " +
                           std::to_string(t));
  }
  const double half = 0.5 * h;
  const GeneralizedCoords mid =
      step_with_halving(q, t, half, settings, config, gait, halvings_left - 1);
  return step_with_halving(mid, t + half, half, settings, config, gait, halvings_left - 1);
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::implicit_midpoint ? "implicit_midpoint" : "backward_euler";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "implicit_midpoint") return Scheme::implicit_midpoint;
  if (name == "backward_euler") return Scheme::backward_euler;
  throw std::invalid_argument("unknown integration scheme '" + std::string(name) + "'");
}

void validate_settings(const SimSettings& settings) {
  if (!(settings.dt >= 0.0) || !std::isfinite(settings.dt))
    throw ConfigError("sim.dt", "must be >= 0 (0 selects period/2000)");
  if (!(settings.newton_tol > 0.0)) throw ConfigError("sim.newton_tol", "must be > 0");
  if (settings.newton_max_iter < 1) throw ConfigError("sim.newton_max_iter", "must be >= 1");
  if (!(settings.condition_limit > 1.0))
    throw ConfigError("sim.condition_limit", "must be > 1");
  if (settings.max_halvings < 0) throw ConfigError("sim.max_halvings", "must be >= 0");
}

int steps_per_cycle(const SimSettings& settings, double period) {
  if (settings.dt == 0.0) return 2000;
  return std::max(1, static_cast<int>(std::lround(period / settings.dt)));
}

int Trajectory::completed_cycles() const {
  if (samples.empty() || steps_per_cycle <= 0) return 0;
  return static_cast<int>(samples.size() - 1) / steps_per_cycle;
}

Eigen::VectorXd solve_velocity(const GeneralizedCoords& q, double t, const RobotConfig& config,
                               const GaitSchedule& gait, double condition_limit) {
  const Eigen::MatrixXd r = assemble_resistance_matrix(q, config);
  const ActuationField act =
      actuation_field(config, gait_evaluate(gait, phase_at(t, gait.period)));
  const Eigen::VectorXd force = elastic_generalized_force(q, act);
  const auto llt = factor_resistance(r, condition_limit);
  Eigen::VectorXd velocity = llt.solve(force);
  velocity += llt.solve(force - r * velocity);  // one refinement sweep
  return velocity;
}

GeneralizedCoords step(const GeneralizedCoords& q, double t, double dt,
                       const SimSettings& settings, const RobotConfig& config,
                       const GaitSchedule& gait) {
  if (q.size() != config.dof()) throw std::invalid_argument("step: state dimension mismatch");
  if (!q.allFinite()) throw std::invalid_argument("step: state is not finite");
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  return step_with_halving(q, t, dt, settings, config, gait, settings.max_halvings);
}

Trajectory simulate(const RobotConfig& config, const GaitSchedule& gait, int n_cycles,
                    const SimSettings& settings, const Pose2& start) {
  if (n_cycles < 1) throw std::invalid_argument("simulate: n_cycles must be >= 1");
  validate_settings(settings);
  if (gait.mode == GaitMode::reciprocal_prescribed) {
    PrescribedMotion motion = reciprocal_sinusoid(config, gait.beta, gait.period);
    Trajectory traj = simulate_prescribed(config, motion, n_cycles, settings, start);
    traj.gait = gait;
    return traj;
  }

  Trajectory traj;
  traj.config = config;
  traj.gait = gait;
  traj.steps_per_cycle = steps_per_cycle(settings, gait.period);
  traj.dt = gait.period / traj.steps_per_cycle;
  const long total = static_cast<long>(n_cycles) * traj.steps_per_cycle;
  traj.samples.reserve(total + 1);

  GeneralizedCoords q = straight_state(config, start.x, start.y, start.phi);
  const JointActuation initial = gait_evaluate(gait, 0.0);
  q.tail(config.joint_count()).setConstant(initial.rest_angle);
  traj.samples.push_back({0.0, q, 0.0, initial.stiffness});

  for (long n = 0; n < total; ++n) {
    const double t = n * traj.dt;
    q = step(q, t, traj.dt, settings, config, gait);
    const double t_next = (n + 1) * traj.dt;
    const double phase = phase_at(t_next, gait.period);
    traj.samples.push_back({t_next, q, phase, gait_evaluate(gait, phase).stiffness});
  }
  return traj;
}

PrescribedMotion reciprocal_sinusoid(const RobotConfig& config, double amplitude, double period) {
  const int n = config.joint_count();
  const double omega = 2.0 * std::numbers::pi / period;
  PrescribedMotion motion;
  motion.period = period;
  motion.angles = [=](double t) {
    return Eigen::VectorXd::Constant(n, amplitude * std::sin(omega * t)).eval();
  };
  motion.rates = [=](double t) {
    return Eigen::VectorXd::Constant(n, amplitude * omega * std::cos(omega * t)).eval();
  };
  return motion;
}

Eigen::Vector3d body_velocity(const Eigen::VectorXd& joints, const Eigen::VectorXd& joint_rates,
                              const RobotConfig& config) {
  GeneralizedCoords q = straight_state(config);
  q.tail(joints.size()) = joints;
  const Eigen::MatrixXd r = assemble_resistance_matrix(q, config);
  const Eigen::Index nj = joints.size();
  const Eigen::Matrix3d rbb = r.topLeftCorner<3, 3>();
  const Eigen::Vector3d rhs = -r.topRightCorner(3, nj) * joint_rates;
  Eigen::LLT<Eigen::Matrix3d> llt(rbb);
  if (llt.info() != Eigen::Success)
    throw NumericalError("singular configuration: body resistance block is not positive definite");
  return llt.solve(rhs);
}

Trajectory simulate_prescribed(const RobotConfig& config, const PrescribedMotion& motion,
                               int n_cycles, const SimSettings& settings, const Pose2& start) {
  if (n_cycles < 1) throw std::invalid_argument("simulate_prescribed: n_cycles must be >= 1");
  if (!motion.angles) throw std::invalid_argument("simulate_prescribed: no joint trajectory");
  validate_settings(settings);

  auto rates = motion.rates;
  if (!rates) {
    rates = [&motion](double t) {
      const double eps = 1e-6 * motion.period;
      return ((motion.angles(t + eps) - motion.angles(t - eps)) / (2.0 * eps)).eval();
    };
  }

  Trajectory traj;
  traj.config = config;
  traj.gait.period = motion.period;
  traj.gait.mode = GaitMode::reciprocal_prescribed;
  traj.steps_per_cycle = steps_per_cycle(settings, motion.period);
  traj.dt = motion.period / traj.steps_per_cycle;
  const long total = static_cast<long>(n_cycles) * traj.steps_per_cycle;
  traj.samples.reserve(total + 1);

  const int nj = config.joint_count();
  GeneralizedCoords q = straight_state(config, start.x, start.y, start.phi);
  q.tail(nj) = motion.angles(0.0);
  traj.samples.push_back({0.0, q, 0.0, 0.0});

  const double c = stage_weight(settings.scheme);
  for (long n = 0; n < total; ++n) {
    const double t = n * traj.dt;
    const double ts = t + c * traj.dt;
    // Body-frame velocity does not depend on the pose, so the implicit stage
    // equations for (x, y, phi) have a closed-form solution.
    const Eigen::Vector3d xi = body_velocity(motion.angles(ts), rates(ts), config);
    const double phi_next = q(2) + traj.dt * xi(2);
    const double phi_stage = q(2) + c * (phi_next - q(2));
    const double cs = std::cos(phi_stage);
    const double sn = std::sin(phi_stage);
    q(0) += traj.dt * (cs * xi(0) - sn * xi(1));
    q(1) += traj.dt * (sn * xi(0) + cs * xi(1));
    q(2) = phi_next;
    const double t_next = (n + 1) * traj.dt;
    q.tail(nj) = motion.angles(t_next);
    traj.samples.push_back({t_next, q, phase_at(t_next, motion.period), 0.0});
  }
  return traj;
}

}  // namespace swimmer
