#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "swimmer/actuation.hpp"
#include "swimmer/errors.hpp"

using namespace swimmer;
using swimmer::testing::uniform;

namespace {

GaitSchedule with_ramp(Ramp ramp) {
  GaitSchedule g;
  g.ramp = ramp;
  return g;
}

double stiffness(const GaitSchedule& g, double phase) { return gait_evaluate(g, phase).stiffness; }
double rest(const GaitSchedule& g, double phase) { return gait_evaluate(g, phase).rest_angle; }

// Value at phase p on the periodic extension.
template <class F>
double periodic(F f, double p) {
  return f(p - std::floor(p));
}

}  // namespace

TEST(Actuation, CarriageFollowsMotorAndPitch) {
  const MechanismConfig mech;
  const double speed = 100.0 / 60.0 * 0.0025;
  EXPECT_EQ(carriage_position(0.0, mech), 0.0);
  EXPECT_NEAR(carriage_position(5.0, mech), speed * 5.0, 1e-15);
  EXPECT_NEAR(carriage_position(5.0, mech), 0.020833, 1e-6);
  EXPECT_NEAR(carriage_position(10.0, mech), 0.0, 1e-15);
  EXPECT_NEAR(carriage_position(2.5, mech), speed * 2.5, 1e-15);
  EXPECT_NEAR(carriage_position(7.5, mech), speed * 2.5, 1e-15);
  EXPECT_LE(carriage_position(5.0, mech), mech.shaft_travel);
  EXPECT_THROW(carriage_position(-0.1, mech), std::invalid_argument);
}

TEST(Actuation, CarriageIsPeriodicContinuousAndBounded) {
  const MechanismConfig mech;
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const double t = uniform(rng, 0.0, 10.0);
    const double x = carriage_position(t, mech);
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, mech.shaft_travel);
    EXPECT_NEAR(carriage_position(t + 30.0, mech), x, 1e-12);
    EXPECT_LE(std::abs(carriage_position(t + 1e-6, mech) - x), mech.carriage_speed() * 1e-6 + 1e-15);
  }
}

TEST(Actuation, MechanismValidation) {
  EXPECT_NO_THROW(validate_mechanism(MechanismConfig{}));
  MechanismConfig m;
  m.half_period = 20.0;  // 83 mm of travel on a 53 mm shaft
  EXPECT_THROW(validate_mechanism(m), ConfigError);
  m = {};
  m.motor_rpm = 0.0;
  EXPECT_THROW(validate_mechanism(m), ConfigError);
}

TEST(Actuation, CosineRampAnchors) {
  const GaitSchedule g = with_ramp(Ramp::cosine);
  EXPECT_DOUBLE_EQ(stiffness(g, 0.0), g.k_max);
  EXPECT_DOUBLE_EQ(rest(g, 0.0), 0.0);
  EXPECT_NEAR(stiffness(g, 0.5), g.k_min, 1e-15);
  EXPECT_NEAR(rest(g, 0.5), g.beta, 1e-15);
  EXPECT_NEAR(stiffness(g, 0.25), 0.5 * (g.k_max + g.k_min), 1e-15);
  EXPECT_NEAR(rest(g, 0.25), 0.5 * g.beta, 1e-15);
  for (double p : {0.1, 0.37, 0.8}) {
    EXPECT_NEAR(stiffness(g, p),
                g.k_min + (g.k_max - g.k_min) * 0.5 * (1.0 + std::cos(2.0 * M_PI * p)), 1e-15);
    EXPECT_NEAR(rest(g, p), g.beta * 0.5 * (1.0 - std::cos(2.0 * M_PI * p)), 1e-15);
  }
}

TEST(Actuation, SmoothedRampSwitchesWithCarriageDirection) {
  const GaitSchedule g;  // default ramp
  EXPECT_EQ(g.ramp, Ramp::linear_smoothed);
  EXPECT_DOUBLE_EQ(stiffness(g, 0.0), g.k_max);
  EXPECT_DOUBLE_EQ(rest(g, 0.0), 0.0);
  EXPECT_NEAR(rest(g, 0.5), g.beta, 1e-15);
  EXPECT_NEAR(stiffness(g, 0.5), g.k_min, 1e-15);
  // Plateaus between transitions.
  EXPECT_DOUBLE_EQ(stiffness(g, g.ramp_width), g.k_min);
  EXPECT_DOUBLE_EQ(stiffness(g, 0.3), g.k_min);
  EXPECT_DOUBLE_EQ(stiffness(g, 0.5 + g.ramp_width), g.k_max);
  EXPECT_DOUBLE_EQ(stiffness(g, 0.9), g.k_max);
  EXPECT_NEAR(stiffness(g, 0.5 * g.ramp_width), 0.5 * (g.k_max + g.k_min), 1e-15);
}

TEST(Actuation, GeometricRampInterpolatesLogStiffness) {
  const GaitSchedule g = with_ramp(Ramp::geometric);
  EXPECT_NEAR(stiffness(g, 0.0), g.k_max, 1e-15);
  EXPECT_NEAR(stiffness(g, 0.5), g.k_min, 1e-15);
  EXPECT_NEAR(stiffness(g, 0.25), std::sqrt(g.k_min * g.k_max), 1e-15);
}

TEST(Actuation, ConstantPresets) {
  GaitSchedule flexible;
  flexible.mode = GaitMode::fully_flexible;
  GaitSchedule rigid;
  rigid.mode = GaitMode::fully_rigid;
  GaitSchedule controlled;
  for (double p = 0.0; p < 1.0; p += 0.01) {
    EXPECT_EQ(stiffness(flexible, p), flexible.k_min);
    EXPECT_EQ(stiffness(rigid, p), rigid.k_max);
    EXPECT_EQ(rest(flexible, p), rest(controlled, p));
    EXPECT_EQ(rest(rigid, p), rest(controlled, p));
  }
}

TEST(Actuation, NegatedAmplitudeMirrorsRestAngle) {
  GaitSchedule g;
  GaitSchedule m = g;
  m.beta = -g.beta;
  for (double p = 0.0; p < 1.0; p += 0.013) {
    EXPECT_EQ(rest(m, p), -rest(g, p));
    EXPECT_EQ(stiffness(m, p), stiffness(g, p));
  }
}

TEST(Actuation, SchedulesAreContinuouslyDifferentiableAndPeriodic) {
  std::mt19937_64 rng(22);
  const double h = 1e-5;
  for (Ramp ramp : {Ramp::cosine, Ramp::linear_smoothed, Ramp::geometric}) {
    for (int trial = 0; trial < 20; ++trial) {
      GaitSchedule g = with_ramp(ramp);
      g.duty = uniform(rng, 0.2, 0.8);
      g.phase_offset = uniform(rng, 0.0, 0.5);
      g.ramp_width = uniform(rng, 0.05, 0.2);
      auto k = [&](double p) { return stiffness(g, p) / g.k_max; };
      auto r = [&](double p) { return rest(g, p); };
      // Kinks of the warp, the reversal and the offset schedule.
      const double points[] = {0.0, g.duty, g.phase_offset,
                               g.phase_offset + g.duty - std::floor(g.phase_offset + g.duty)};
      const auto check = [&](auto fn, double x, const char* what) {
        // Second-order one-sided slopes; a kink shows up as a jump between them.
        const double left = (3 * periodic(fn, x) - 4 * periodic(fn, x - h) +
                             periodic(fn, x - 2 * h)) / (2 * h);
        const double right = (-3 * periodic(fn, x) + 4 * periodic(fn, x + h) -
                              periodic(fn, x + 2 * h)) / (2 * h);
        EXPECT_NEAR(periodic(fn, x - h), periodic(fn, x + h), 1e-2) << what << " at " << x;
        EXPECT_NEAR(left, right, 1e-2) << what << " slope at " << x << " ramp " << to_string(ramp);
      };
      for (double x : points) {
        check(k, x, "stiffness");
        check(r, x, "rest angle");
      }
    }
  }
}

TEST(Actuation, PhaseOutsideUnitIntervalIsRejected) {
  const GaitSchedule g;
  EXPECT_THROW(gait_evaluate(g, 1.0), std::out_of_range);
  EXPECT_THROW(gait_evaluate(g, -1e-9), std::out_of_range);
  EXPECT_DOUBLE_EQ(phase_at(25.0, 10.0), 0.5);
  EXPECT_DOUBLE_EQ(phase_at(30.0, 10.0), 0.0);
}

TEST(Actuation, GaitValidation) {
  EXPECT_NO_THROW(validate_gait(GaitSchedule{}));
  auto expect_field = [](GaitSchedule g, const std::string& field) {
    try {
      validate_gait(g);
      ADD_FAILURE() << "expected ConfigError for " << field;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), field);
    }
  };
  GaitSchedule g;
  g.k_min = -1.0;
  expect_field(g, "gait.k_min");
  g = {};
  g.k_min = 2.0;
  expect_field(g, "gait.k_max");
  g = {};
  g.k_min = 1e-7;
  expect_field(g, "gait.k_max");
  g = {};
  g.beta = 1.6;
  expect_field(g, "gait.beta");
  g = {};
  g.duty = 1.0;
  expect_field(g, "gait.duty");
  g = {};
  g.phase_offset = 1.0;
  expect_field(g, "gait.phase_offset");
  g = {};
  g.ramp_width = 0.0;
  expect_field(g, "gait.ramp_width");
}

TEST(Actuation, ElasticForceIsHookeanAndInternal) {
  RobotConfig config = default_robot();
  const ActuationField field = actuation_field(config, {2.0, 0.3});
  GeneralizedCoords q = straight_state(config);
  q.tail(config.joint_count()).setConstant(0.3);
  EXPECT_TRUE(elastic_generalized_force(q, field).isZero(0.0));

  Eigen::VectorXd one(4);
  one << 0.0, 0.0, 0.0, 0.1;
  const ActuationField single{Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(1)};
  EXPECT_NEAR(elastic_generalized_force(one, single)(3), -0.1, 1e-16);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    for (int j = 0; j < config.dof(); ++j) q(j) = uniform(rng, -2, 2);
    ActuationField f = field;
    for (int j = 0; j < config.joint_count(); ++j) {
      f.stiffness(j) = uniform(rng, 1e-4, 1.0);
      f.rest_angle(j) = uniform(rng, -1, 1);
    }
    const Eigen::VectorXd force = elastic_generalized_force(q, f);
    EXPECT_EQ(force.head<3>(), Eigen::Vector3d::Zero());
    // Force is minus the energy gradient.
    for (int j = 3; j < config.dof(); ++j) {
      GeneralizedCoords qp = q, qm = q;
      qp(j) += 1e-6;
      qm(j) -= 1e-6;
      const double grad = (elastic_energy(qp, f) - elastic_energy(qm, f)) / 2e-6;
      EXPECT_NEAR(force(j), -grad, 1e-8);
    }
  }
  EXPECT_THROW(elastic_generalized_force(Eigen::VectorXd::Zero(5), field), std::invalid_argument);
}
