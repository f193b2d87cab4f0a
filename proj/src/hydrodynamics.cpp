#include "swimmer/hydrodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swimmer {

DragCoefficients rft_coefficients(const FluidModel& fluid, double length, double radius,
                                  double ratio) {
  const double log_arg = 2.0 * length / radius;
  if (!(log_arg > 1.0)) {
    throw std::domain_error("rod too fat for resistive-force theory: 2L/r = " +
                            std::to_string(log_arg) + " must exceed 1");
  }
  const double ct = 2.0 * std::numbers::pi * fluid.viscosity / std::log(log_arg);
  return {ct, ratio * ct};
}

DragCoefficients rft_coefficients(const FluidModel& fluid, const FlagellumConfig& flagellum,
                                  double ratio) {
  return rft_coefficients(fluid, flagellum.total_length(), flagellum.segment_radius, ratio);
}

DragCoefficients body_coefficients(const RobotConfig& config) {
  if (config.body.drag) return *config.body.drag;
  return rft_coefficients(config.fluid, config.body.length, config.body.radius,
                          config.drag_ratio);
}

DragCoefficients flagellum_coefficients(const RobotConfig& config, std::size_t f) {
  const FlagellumConfig& flagellum = config.flagella.at(f);
  if (flagellum.drag) return *flagellum.drag;
  return rft_coefficients(config.fluid, flagellum, config.drag_ratio);
}

Eigen::Matrix3d link_drag_operator(const LinkFrame& frame, const DragCoefficients& coeffs) {
  const Eigen::Vector2d t = frame.tangent();
  const double len = frame.length;
  const Eigen::Matrix2d tt = t * t.transpose();
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  d.topLeftCorner<2, 2>() =
      coeffs.tangential * len * tt + coeffs.normal * len * (Eigen::Matrix2d::Identity() - tt);
  // Rotation about the center only moves points normally; the lever arm
  // integrates to zero net force by symmetry.
  d(2, 2) = coeffs.normal * len * len * len / 12.0;
  return d;
}

Wrench link_drag_wrench(const LinkFrame& frame, const Eigen::Vector3d& velocity,
                        const DragCoefficients& coeffs) {
  const Eigen::Vector3d w = -link_drag_operator(frame, coeffs) * velocity;
  return {w.head<2>(), w(2)};
}

ResistanceMatrix assemble_resistance_matrix(const GeneralizedCoords& q,
                                            const RobotConfig& config) {
  const int n = config.dof();
  ResistanceMatrix r = ResistanceMatrix::Zero(n, n);
  const LinkFrames frames = forward_kinematics(q, config);
  const Eigen::Vector2d origin(q(0), q(1));

  r.topLeftCorner<3, 3>() = link_drag_operator(frames[0], body_coefficients(config));

  // Link Jacobian columns are the pose (0..2) followed by a contiguous run
  // of joints, so J^T D J scatters into three blocks.
  int max_segments = 0;
  for (const auto& f : config.flagella) max_segments = std::max(max_segments, f.n_segments);
  Eigen::Matrix<double, 3, Eigen::Dynamic> jac(3, 3 + max_segments);
  Eigen::Matrix<double, 3, Eigen::Dynamic> djac(3, 3 + max_segments);
  Eigen::MatrixXd local(3 + max_segments, 3 + max_segments);

  int link = 1;
  for (std::size_t fi = 0; fi < config.flagella.size(); ++fi) {
    const FlagellumConfig& f = config.flagella[fi];
    const DragCoefficients coeffs = flagellum_coefficients(config, fi);
    const double sense = f.mirror ? -1.0 : 1.0;
    const int j0 = config.joint_offset(fi);
    const int first = link;
    for (int s = 0; s < f.n_segments; ++s, ++link) {
      const LinkFrame& frame = frames[link];
      const int m = 3 + s + 1;
      jac.col(0) << 1.0, 0.0, 0.0;
      jac.col(1) << 0.0, 1.0, 0.0;
      const Eigen::Vector2d arm = frame.center - origin;
      jac.col(2) << -arm.y(), arm.x(), 1.0;
      for (int k = 0; k <= s; ++k) {
        const Eigen::Vector2d lever = frame.center - frames[first + k].proximal();
        jac.col(3 + k) << -sense * lever.y(), sense * lever.x(), sense;
      }
      const Eigen::Matrix3d d = link_drag_operator(frame, coeffs);
      djac.leftCols(m).noalias() = d * jac.leftCols(m);
      local.topLeftCorner(m, m).noalias() = jac.leftCols(m).transpose() * djac.leftCols(m);

      const int nj = s + 1;
      r.topLeftCorner<3, 3>() += local.topLeftCorner<3, 3>();
      r.block(0, j0, 3, nj) += local.block(0, 3, 3, nj);
      r.block(j0, 0, nj, 3) += local.block(3, 0, nj, 3);
      r.block(j0, j0, nj, nj) += local.block(3, 3, nj, nj);
    }
  }
  return r;
}

double reynolds_number(double speed, double length, const FluidModel& fluid) {
  if (!(speed >= 0.0)) throw std::invalid_argument("speed must be >= 0");
  if (!(length > 0.0)) throw std::invalid_argument("length must be > 0");
  if (!(fluid.viscosity > 0.0) || !(fluid.density > 0.0))
    throw std::invalid_argument("fluid properties must be > 0");
  return fluid.density * speed * length / fluid.viscosity;
}

}  // namespace swimmer
