#include "swimmer/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "swimmer/experiments.hpp"
#include "swimmer/hydrodynamics.hpp"

namespace swimmer {

namespace {

constexpr int kRandomStates = 20;

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& check) {
  try {
    return check();
  } catch (const std::exception& e) {
    return {name, false, false, std::string("error: ") + e.what()};
  }
}

CheckResult chain_closure(const RobotConfig& config, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < kRandomStates; ++k) {
    const LinkFrames frames = forward_kinematics(random_state(config, rng), config);
    for (std::size_t f = 0; f < config.flagella.size(); ++f) {
      const int first = first_link_of(config, f);
      for (int s = 1; s < config.flagella[f].n_segments; ++s)
        worst = std::max(worst,
                         (frames[first + s].proximal() - frames[first + s - 1].distal()).norm());
    }
  }
  return {"kinematics.chain_closure", worst <= 1e-12, false, "max gap " + sci(worst) + " m"};
}

CheckResult jacobian_fd(const RobotConfig& config, std::mt19937_64& rng) {
  constexpr double eps = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < kRandomStates; ++k) {
    const GeneralizedCoords q = random_state(config, rng);
    for (int link = 0; link < config.link_count(); ++link) {
      const LinkJacobian jac = link_jacobian(q, config, link);
      for (int j = 0; j < config.dof(); ++j) {
        GeneralizedCoords qp = q, qm = q;
        qp(j) += eps;
        qm(j) -= eps;
        const LinkFrame a = forward_kinematics(qp, config)[link];
        const LinkFrame b = forward_kinematics(qm, config)[link];
        Eigen::Vector3d fd;
        fd << (a.center - b.center) / (2 * eps), (a.angle - b.angle) / (2 * eps);
        const double scale = std::max(1.0, jac.col(j).norm());
        worst = std::max(worst, (fd - jac.col(j)).norm() / scale);
      }
    }
  }
  return {"kinematics.jacobian_fd", worst <= 1e-6, false, "max relative error " + sci(worst)};
}

CheckResult resistance_spd(const RobotConfig& config, std::mt19937_64& rng) {
  double asym = 0.0;
  double min_eig = INFINITY;
  for (int k = 0; k < kRandomStates; ++k) {
    const GeneralizedCoords q = random_state(config, rng);
    const ResistanceMatrix r = assemble_resistance_matrix(q, config);
    asym = std::max(asym, (r - r.transpose()).norm() / r.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
  }
  return {"hydrodynamics.resistance_spd", asym <= 1e-12 && min_eig > 0.0, false,
          "asymmetry " + sci(asym) + ", min eigenvalue " + sci(min_eig)};
}

CheckResult assembly_oracle(const RobotConfig& config, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int k = 0; k < kRandomStates; ++k) {
    const GeneralizedCoords q = random_state(config, rng);
    Eigen::VectorXd qdot(config.dof());
    for (auto& v : qdot) v = normal(rng);
    const LinkFrames frames = forward_kinematics(q, config);
    Eigen::VectorXd generalized = Eigen::VectorXd::Zero(config.dof());
    int link = 0;
    auto add = [&](const DragCoefficients& c) {
      const LinkJacobian jac = link_jacobian(q, config, link);
      const Wrench w = link_drag_wrench(frames[link], jac * qdot, c);
      generalized += jac.transpose() * Eigen::Vector3d(w.force.x(), w.force.y(), w.torque);
      ++link;
    };
    add(body_coefficients(config));
    for (std::size_t f = 0; f < config.flagella.size(); ++f)
      for (int s = 0; s < config.flagella[f].n_segments; ++s) add(flagellum_coefficients(config, f));
    const Eigen::VectorXd via_matrix = -assemble_resistance_matrix(q, config) * qdot;
    worst = std::max(worst, (via_matrix - generalized).norm() / generalized.norm());
  }
  return {"hydrodynamics.assembly_oracle", worst <= 1e-10, false,
          "max relative difference " + sci(worst)};
}

CheckResult internal_force(const RunConfig& run, std::mt19937_64& rng) {
  double worst = 0.0;
  std::uniform_real_distribution<double> phase(0.0, 1.0);
  for (int k = 0; k < kRandomStates; ++k) {
    const GeneralizedCoords q = random_state(run.robot, rng);
    const auto act = actuation_field(run.robot, gait_evaluate(run.gait, phase(rng)));
    worst = std::max(worst, elastic_generalized_force(q, act).head<3>().cwiseAbs().maxCoeff());
  }
  return {"actuation.internal_force", worst == 0.0, false,
          "max body-pose component " + sci(worst)};
}

CheckResult scallop(const RunConfig& run) {
  const ScallopReport r = scallop_check(run.robot, run.sim, nullptr, 0.5 * run.gait.beta,
                                        run.gait.period);
  return {"dynamics.scallop_theorem", r.passed, false, r.summary};
}

CheckResult symmetry_breaking(const RunConfig& run) {
  const PrescribedMotion motion = two_phase_stroke(run.robot, 0.5 * run.gait.beta, run.gait.period);
  const ScallopReport r = scallop_check(run.robot, run.sim, &motion, 0.0, run.gait.period, 1);
  return {"dynamics.symmetry_breaking", r.symmetry_broken, false, r.summary};
}

CheckResult mirror_symmetry(const RunConfig& run) {
  if (!is_mirror_symmetric(run.robot))
    return {"dynamics.mirror_symmetry", true, true, "configuration is not mirror-symmetric"};
  const Trajectory traj = simulate(run.robot, run.gait, 1, run.sim);
  double worst = 0.0;
  for (const auto& s : traj.samples)
    worst = std::max({worst, std::abs(s.q(1)), std::abs(s.q(2))});
  return {"dynamics.mirror_symmetry", worst <= 1e-8, false, "max |y|, |phi| " + sci(worst)};
}

CheckResult se2_equivariance(const RunConfig& run) {
  const Pose2 moved{0.031, -0.017, 0.9};
  const Trajectory a = simulate(run.robot, run.gait, 1, run.sim);
  const Trajectory b = simulate(run.robot, run.gait, 1, run.sim, moved);
  const double c = std::cos(moved.phi);
  const double s = std::sin(moved.phi);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& qa = a.samples[i].q;
    const auto& qb = b.samples[i].q;
    const double x = moved.x + c * qa(0) - s * qa(1);
    const double y = moved.y + s * qa(0) + c * qa(1);
    worst = std::max({worst, std::abs(x - qb(0)), std::abs(y - qb(1)),
                      std::abs(qa(2) + moved.phi - qb(2)),
                      (qa.tail(qa.size() - 3) - qb.tail(qb.size() - 3)).cwiseAbs().maxCoeff()});
  }
  return {"dynamics.se2_equivariance", worst <= 1e-8, false, "max deviation " + sci(worst)};
}

}  // namespace

GeneralizedCoords random_state(const RobotConfig& config, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-0.05, 0.05);
  std::uniform_real_distribution<double> angle(-1.0, 1.0);
  std::uniform_real_distribution<double> heading(-3.14159, 3.14159);
  GeneralizedCoords q(config.dof());
  q(0) = pos(rng);
  q(1) = pos(rng);
  q(2) = heading(rng);
  for (Eigen::Index i = 3; i < q.size(); ++i) q(i) = angle(rng);
  return q;
}

bool is_mirror_symmetric(const RobotConfig& config) {
  std::vector<bool> used(config.flagella.size(), false);
  for (std::size_t i = 0; i < config.flagella.size(); ++i) {
    if (used[i]) continue;
    FlagellumConfig partner = config.flagella[i];
    partner.mirror = !partner.mirror;
    bool found = false;
    for (std::size_t j = i + 1; j < config.flagella.size(); ++j) {
      if (!used[j] && config.flagella[j] == partner) {
        used[i] = used[j] = found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<CheckResult> run_verification(const RunConfig& run, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  out.push_back(guarded("kinematics.chain_closure", [&] { return chain_closure(run.robot, rng); }));
  out.push_back(guarded("kinematics.jacobian_fd", [&] { return jacobian_fd(run.robot, rng); }));
  out.push_back(
      guarded("hydrodynamics.resistance_spd", [&] { return resistance_spd(run.robot, rng); }));
  out.push_back(
      guarded("hydrodynamics.assembly_oracle", [&] { return assembly_oracle(run.robot, rng); }));
  out.push_back(guarded("actuation.internal_force", [&] { return internal_force(run, rng); }));
  out.push_back(guarded("dynamics.scallop_theorem", [&] { return scallop(run); }));
  out.push_back(guarded("dynamics.symmetry_breaking", [&] { return symmetry_breaking(run); }));
  out.push_back(guarded("dynamics.mirror_symmetry", [&] { return mirror_symmetry(run); }));
  out.push_back(guarded("dynamics.se2_equivariance", [&] { return se2_equivariance(run); }));
  return out;
}

}  // namespace swimmer
