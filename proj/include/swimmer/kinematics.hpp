#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace swimmer {

struct FluidModel {
  double viscosity = 1.49;   // Pa s (glycerine)
  double density = 1000.0;   // kg/m^3

  bool operator==(const FluidModel&) const = default;
};

/// Per-unit-length resistive-force coefficients of a slender rod.
struct DragCoefficients {
  double tangential = 0.0;  // c_t, N s/m^2
  double normal = 0.0;      // c_n, N s/m^2

  bool operator==(const DragCoefficients&) const = default;
};

struct FlagellumConfig {
  int n_segments = 6;
  double segment_length = 0.015;   // m
  double segment_radius = 0.002;   // m
  double attachment_offset = 0.0;  // m along the body axis from the body center
  double attachment_angle = 0.0;   // rad, relative to the body axis
  bool mirror = false;             // reflected across the body axis
  /// Overrides the coefficients derived from the fluid model.
  std::optional<DragCoefficients> drag;

  double total_length() const { return n_segments * segment_length; }

  bool operator==(const FlagellumConfig&) const = default;
};

struct BodyConfig {
  double length = 0.126;  // m
  double radius = 0.0125; // m
  std::optional<DragCoefficients> drag;

  bool operator==(const BodyConfig&) const = default;
};

struct RobotConfig {
  BodyConfig body;
  std::vector<FlagellumConfig> flagella;
  FluidModel fluid;
  double drag_ratio = 2.0;  // c_n / c_t

  int joint_count() const;
  int dof() const { return 3 + joint_count(); }
  int link_count() const { return 1 + joint_count(); }
  /// Index into q of the first joint of flagellum `f`.
  int joint_offset(std::size_t f) const;

  bool operator==(const RobotConfig&) const = default;
};

/// Four six-segment flagella attached at the tail, in two mirrored pairs.
RobotConfig default_robot();

/// Throws ConfigError naming the first violated invariant.
const RobotConfig& validate_config(const RobotConfig& config);

/// q = (x, y, phi_body, joint angles flagellum-major). Joint angles of a
/// mirrored flagellum are measured in its own reflected sense, so equal
/// values on a mirrored pair give mirror-image shapes.
using GeneralizedCoords = Eigen::VectorXd;

GeneralizedCoords straight_state(const RobotConfig& config, double x = 0.0,
                                 double y = 0.0, double phi = 0.0);

struct LinkFrame {
  Eigen::Vector2d center;
  double angle = 0.0;
  double length = 0.0;

  Eigen::Vector2d tangent() const { return {std::cos(angle), std::sin(angle)}; }
  Eigen::Vector2d proximal() const { return center - 0.5 * length * tangent(); }
  Eigen::Vector2d distal() const { return center + 0.5 * length * tangent(); }
};

/// Link 0 is the body, followed by flagellum links (flagellum-major,
/// proximal to distal).
using LinkFrames = std::vector<LinkFrame>;

LinkFrames forward_kinematics(const GeneralizedCoords& q, const RobotConfig& config);

/// 3 x dof map from q-dot to (center vx, center vy, angular velocity).
using LinkJacobian = Eigen::Matrix<double, 3, Eigen::Dynamic>;

LinkJacobian link_jacobian(const GeneralizedCoords& q, const RobotConfig& config,
                           int link_id);

/// Jacobian restricted to the q-columns it can depend on: the body pose
/// plus the joints from the flagellum root up to and including the link.
struct CompactJacobian {
  std::vector<int> columns;
  Eigen::Matrix<double, 3, Eigen::Dynamic> block;
};

/// All link Jacobians at once, in link order.
std::vector<CompactJacobian> compact_link_jacobians(const GeneralizedCoords& q,
                                                    const RobotConfig& config);

/// Index of the first link of flagellum `f`.
int first_link_of(const RobotConfig& config, std::size_t f);

}  // namespace swimmer
