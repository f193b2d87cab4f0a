#pragma once

#include <Eigen/Dense>

#include "swimmer/kinematics.hpp"

namespace swimmer {

/// Gray-Hancock style coefficients for a slender rod of length `length`
/// and radius `radius`: c_t = 2 pi mu / ln(2 length / radius),
/// c_n = ratio * c_t. Throws std::domain_error when ln(2 length / radius) <= 0.
DragCoefficients rft_coefficients(const FluidModel& fluid, double length, double radius,
                                  double ratio = 2.0);
DragCoefficients rft_coefficients(const FluidModel& fluid, const FlagellumConfig& flagellum,
                                  double ratio = 2.0);

/// Coefficients actually used for the body and for flagellum `f`
/// (explicit overrides win over the fluid-derived values).
DragCoefficients body_coefficients(const RobotConfig& config);
DragCoefficients flagellum_coefficients(const RobotConfig& config, std::size_t f);

struct Wrench {
  Eigen::Vector2d force = Eigen::Vector2d::Zero();  // N
  double torque = 0.0;                              // N m, about the link center
};

/// Drag on a straight link moving with center velocity (vx, vy) and angular
/// velocity omega, integrated along its length. Everything in world frame.
Wrench link_drag_wrench(const LinkFrame& frame, const Eigen::Vector3d& velocity,
                        const DragCoefficients& coeffs);

/// 3x3 operator D with wrench = -D * (vx, vy, omega).
Eigen::Matrix3d link_drag_operator(const LinkFrame& frame, const DragCoefficients& coeffs);

/// Generalized drag force is -R(q) q-dot.
using ResistanceMatrix = Eigen::MatrixXd;

ResistanceMatrix assemble_resistance_matrix(const GeneralizedCoords& q,
                                            const RobotConfig& config);

/// rho U L / mu. Throws std::invalid_argument for negative speed or
/// nonpositive length.
double reynolds_number(double speed, double length, const FluidModel& fluid);

}  // namespace swimmer
