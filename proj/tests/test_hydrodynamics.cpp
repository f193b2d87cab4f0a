#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "swimmer/hydrodynamics.hpp"

using namespace swimmer;
using swimmer::testing::uniform;

namespace {

GeneralizedCoords random_q(const RobotConfig& config, std::mt19937_64& rng) {
  GeneralizedCoords q(config.dof());
  q(0) = uniform(rng, -0.1, 0.1);
  q(1) = uniform(rng, -0.1, 0.1);
  q(2) = uniform(rng, -M_PI, M_PI);
  for (int j = 3; j < config.dof(); ++j) q(j) = uniform(rng, -1.2, 1.2);
  return q;
}

LinkFrame unit_link(double angle = 0.0) { return {Eigen::Vector2d::Zero(), angle, 1.0}; }

Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

// Generalized drag force by 5-point Gauss-Legendre quadrature of the local
// drag law over material points, with each point's velocity and virtual
// displacement taken from the hinge chain directly.
Eigen::VectorXd quadrature_drag(const GeneralizedCoords& q, const Eigen::VectorXd& qdot,
                                const RobotConfig& config) {
  static const double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                  0.5384693101056831, 0.9061798459386640};
  static const double weights[5] = {0.2369268850561891, 0.4786286704993665,
                                    0.5688888888888889, 0.4786286704993665,
                                    0.2369268850561891};
  const LinkFrames frames = forward_kinematics(q, config);
  const Eigen::Vector2d origin(q(0), q(1));
  Eigen::VectorXd gen = Eigen::VectorXd::Zero(config.dof());

  auto integrate = [&](const LinkFrame& frame, const DragCoefficients& c,
                       const std::vector<std::pair<int, Eigen::Vector2d>>& pivots, double sense) {
    const Eigen::Vector2d t = frame.tangent();
    for (int g = 0; g < 5; ++g) {
      const double s = 0.5 * frame.length * nodes[g];
      const Eigen::Vector2d p = frame.center + s * t;
      // Columns of dp/dq for the point.
      std::vector<std::pair<int, Eigen::Vector2d>> cols = {
          {0, Eigen::Vector2d::UnitX()}, {1, Eigen::Vector2d::UnitY()}, {2, perp(p - origin)}};
      for (const auto& [j, pivot] : pivots) cols.push_back({j, sense * perp(p - pivot)});
      Eigen::Vector2d v = Eigen::Vector2d::Zero();
      for (const auto& [j, d] : cols) v += d * qdot(j);
      const double vt = v.dot(t);
      const Eigen::Vector2d force_density = -(c.tangential * vt * t + c.normal * (v - vt * t));
      const double w = 0.5 * frame.length * weights[g];
      for (const auto& [j, d] : cols) gen(j) += w * force_density.dot(d);
    }
  };

  integrate(frames[0], body_coefficients(config), {}, 1.0);
  int link = 1;
  for (std::size_t fi = 0; fi < config.flagella.size(); ++fi) {
    const auto& f = config.flagella[fi];
    const int first = link;
    std::vector<std::pair<int, Eigen::Vector2d>> pivots;
    for (int s = 0; s < f.n_segments; ++s, ++link) {
      pivots.push_back({config.joint_offset(fi) + s, frames[first + s].proximal()});
      integrate(frames[link], flagellum_coefficients(config, fi), pivots, f.mirror ? -1.0 : 1.0);
    }
  }
  return gen;
}

}  // namespace

TEST(Hydrodynamics, RftCoefficientsForDefaultFlagellum) {
  const double ct = 2.0 * M_PI * 1.49 / std::log(2.0 * 0.09 / 0.002);
  const DragCoefficients c = rft_coefficients(FluidModel{}, default_robot().flagella[0]);
  EXPECT_NEAR(c.tangential, ct, 1e-12);
  EXPECT_NEAR(c.tangential, 2.0806, 1e-4);
  EXPECT_NEAR(c.normal, 4.1611, 1e-4);
  EXPECT_EQ(c.normal / c.tangential, 2.0);
  EXPECT_NEAR(rft_coefficients(FluidModel{}, 0.09, 0.002, 3.5).normal, 3.5 * ct, 1e-12);
}

TEST(Hydrodynamics, RftRejectsFatRods) {
  EXPECT_THROW(rft_coefficients(FluidModel{}, 0.09, 0.18), std::domain_error);
  EXPECT_THROW(rft_coefficients(FluidModel{}, 0.09, 0.5), std::domain_error);
  EXPECT_NO_THROW(rft_coefficients(FluidModel{}, 0.09, 0.17));
}

TEST(Hydrodynamics, TranslationalWrenches) {
  const DragCoefficients c{1.0, 2.0};
  const Wrench along = link_drag_wrench(unit_link(), {1.0, 0.0, 0.0}, c);
  EXPECT_NEAR((along.force - Eigen::Vector2d(-1.0, 0.0)).norm(), 0.0, 1e-15);
  EXPECT_EQ(along.torque, 0.0);
  const Wrench across = link_drag_wrench(unit_link(), {0.0, 1.0, 0.0}, c);
  EXPECT_NEAR((across.force - Eigen::Vector2d(0.0, -2.0)).norm(), 0.0, 1e-15);
  EXPECT_EQ(across.torque, 0.0);
}

TEST(Hydrodynamics, RotationalTorqueMatchesQuadrature) {
  const DragCoefficients c{1.0, 2.0};
  const Wrench spin = link_drag_wrench(unit_link(), {0.0, 0.0, 1.0}, c);
  EXPECT_NEAR(spin.force.norm(), 0.0, 1e-15);
  // Midpoint rule on -c_n x^2 over [-1/2, 1/2].
  const int n = 200000;
  double torque = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -0.5 + (i + 0.5) / n;
    torque -= c.normal * x * x / n;
  }
  EXPECT_NEAR(spin.torque, torque, 1e-10);
  EXPECT_NEAR(spin.torque, -1.0 / 6.0, 1e-14);
}

TEST(Hydrodynamics, WrenchIsLinearAndFrameCovariant) {
  std::mt19937_64 rng(8);
  const DragCoefficients c{1.3, 2.9};
  for (int trial = 0; trial < 100; ++trial) {
    const LinkFrame frame{{uniform(rng, -1, 1), uniform(rng, -1, 1)}, uniform(rng, -3, 3),
                          uniform(rng, 0.01, 1.0)};
    const Eigen::Vector3d v(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    const Eigen::Vector3d u(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    const double alpha = uniform(rng, -5, 5);
    const Wrench wv = link_drag_wrench(frame, v, c);
    const Wrench wu = link_drag_wrench(frame, u, c);
    const Wrench sum = link_drag_wrench(frame, alpha * v + u, c);
    EXPECT_LE((sum.force - (alpha * wv.force + wu.force)).norm(), 1e-12);
    EXPECT_NEAR(sum.torque, alpha * wv.torque + wu.torque, 1e-12);

    const double a = uniform(rng, -3, 3);
    const Eigen::Matrix2d rot = Eigen::Rotation2Dd(a).toRotationMatrix();
    LinkFrame turned = frame;
    turned.angle += a;
    Eigen::Vector3d vt = v;
    vt.head<2>() = rot * v.head<2>();
    const Wrench wt = link_drag_wrench(turned, vt, c);
    EXPECT_LE((wt.force - rot * wv.force).norm(), 1e-12);
    EXPECT_NEAR(wt.torque, wv.torque, 1e-12);
  }
  const Wrench rest = link_drag_wrench(unit_link(0.4), Eigen::Vector3d::Zero(), c);
  EXPECT_EQ(rest.force.norm(), 0.0);
  EXPECT_EQ(rest.torque, 0.0);
}

TEST(Hydrodynamics, BodyOnlyRobotHasSingleRodResistance) {
  RobotConfig config;
  config.body.length = 1.0;
  config.body.drag = DragCoefficients{1.0, 2.0};
  const ResistanceMatrix r = assemble_resistance_matrix(straight_state(config), config);
  ASSERT_EQ(r.rows(), 3);
  Eigen::Matrix3d expected = Eigen::Vector3d(1.0, 2.0, 1.0 / 6.0).asDiagonal();
  EXPECT_LE((r - expected).cwiseAbs().maxCoeff(), 1e-10);

  // Analytic single rod with RFT coefficients.
  RobotConfig rod;
  rod.body.length = 0.3;
  rod.body.radius = 0.004;
  const double ct = 2.0 * M_PI * 1.49 / std::log(2.0 * 0.3 / 0.004);
  const double cn = 2.0 * ct;
  const ResistanceMatrix rr = assemble_resistance_matrix(straight_state(rod), rod);
  expected = Eigen::Vector3d(ct * 0.3, cn * 0.3, cn * 0.027 / 12.0).asDiagonal();
  EXPECT_LE((rr - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Hydrodynamics, ResistanceMatrixSymmetricPositiveDefinite) {
  const RobotConfig config = default_robot();
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const ResistanceMatrix r = assemble_resistance_matrix(random_q(config, rng), config);
    EXPECT_LE((r - r.transpose()).norm(), 1e-12 * r.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Hydrodynamics, AssemblyMatchesPointwiseQuadrature) {
  const RobotConfig config = default_robot();
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const GeneralizedCoords q = random_q(config, rng);
    Eigen::VectorXd qdot(config.dof());
    for (int j = 0; j < config.dof(); ++j) qdot(j) = uniform(rng, -1, 1);
    const Eigen::VectorXd direct = quadrature_drag(q, qdot, config);
    const Eigen::VectorXd assembled = -assemble_resistance_matrix(q, config) * qdot;
    EXPECT_LE((direct - assembled).norm(), 1e-10 * std::max(1.0, direct.norm()));
  }
}

TEST(Hydrodynamics, ResistanceScalesWithViscosity) {
  RobotConfig config = default_robot();
  std::mt19937_64 rng(12);
  const GeneralizedCoords q = random_q(config, rng);
  const ResistanceMatrix r1 = assemble_resistance_matrix(q, config);
  config.fluid.viscosity *= 2.0;
  const ResistanceMatrix r2 = assemble_resistance_matrix(q, config);
  EXPECT_LE((r2 - 2.0 * r1).norm(), 1e-13 * r1.norm());
}

TEST(Hydrodynamics, ReynoldsNumber) {
  const FluidModel glycerine;
  EXPECT_NEAR(reynolds_number(7e-4, 0.126, glycerine), 0.0592, 1e-4);
  EXPECT_EQ(reynolds_number(0.0, 0.126, glycerine), 0.0);
  EXPECT_THROW(reynolds_number(-1.0, 0.126, glycerine), std::invalid_argument);
  EXPECT_THROW(reynolds_number(1.0, 0.0, glycerine), std::invalid_argument);
  EXPECT_NEAR(glycerine.viscosity / 0.001, 1490.0, 1e-9);
}
