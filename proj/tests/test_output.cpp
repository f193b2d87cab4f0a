#include <gtest/gtest.h>

#include <expat.h>

#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "support.hpp"
#include "swimmer/experiments.hpp"
#include "swimmer/output.hpp"

using namespace swimmer;
using swimmer::testing::coarse_settings;
using swimmer::testing::small_robot;

namespace {

struct XmlSummary {
  bool well_formed = false;
  std::string root;
  std::map<std::string, int> elements;
  std::map<std::string, int> classes;  // per class token
};

XmlSummary parse_xml(const std::string& text) {
  XmlSummary summary;
  XML_Parser parser = XML_ParserCreate(nullptr);
  XML_SetUserData(parser, &summary);
  XML_SetStartElementHandler(parser, [](void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* s = static_cast<XmlSummary*>(data);
    if (s->root.empty()) s->root = name;
    ++s->elements[name];
    for (int i = 0; attrs[i]; i += 2) {
      if (std::string(attrs[i]) != "class") continue;
      std::istringstream tokens(attrs[i + 1]);
      for (std::string token; tokens >> token;) ++s->classes[token];
    }
  });
  summary.well_formed =
      XML_Parse(parser, text.data(), static_cast<int>(text.size()), 1) == XML_STATUS_OK;
  XML_ParserFree(parser);
  return summary;
}

Trajectory two_samples() {
  Trajectory traj;
  traj.config = small_robot();
  traj.gait.period = 10.0;
  traj.steps_per_cycle = 1;
  traj.dt = 10.0;
  GeneralizedCoords q = straight_state(traj.config);
  traj.samples.push_back({0.0, q, 0.0, 1.0});
  q(0) = 1.0 / 3.0;
  q(3) = -2.0 / 7.0;
  traj.samples.push_back({10.0, q, 0.0, 1e-4});
  return traj;
}

Trajectory stationary(int cycles) {
  Trajectory traj;
  traj.config = small_robot();
  traj.gait.period = 10.0;
  traj.steps_per_cycle = 10;
  traj.dt = 1.0;
  for (int n = 0; n <= cycles * 10; ++n)
    traj.samples.push_back({double(n), straight_state(traj.config), phase_at(n, 10.0), 1.0});
  return traj;
}

}  // namespace

TEST(Output, CsvHeaderAndRows) {
  const Trajectory traj = two_samples();
  std::ostringstream out;
  const std::size_t bytes = write_trajectory_csv(traj, out);
  const std::string text = out.str();
  EXPECT_EQ(bytes, text.size());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "t,x,y,phi,phase,k,theta_0_0,theta_0_1,theta_0_2,theta_1_0,theta_1_1,theta_1_2");

  const CsvTable table = read_csv(text);
  ASSERT_EQ(table.header.size(), 6u + traj.config.joint_count());
  ASSERT_EQ(table.rows.size(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& s = traj.samples[r];
    ASSERT_EQ(table.rows[r].size(), table.header.size());
    EXPECT_NEAR(table.rows[r][0], s.t, 1e-12);
    EXPECT_NEAR(table.rows[r][1], s.q(0), 1e-12);
    EXPECT_NEAR(table.rows[r][5], s.stiffness, 1e-12);
    EXPECT_NEAR(table.rows[r][6], s.q(3), 1e-12);
  }
  EXPECT_EQ(table.rows[1][1], 1.0 / 3.0);  // 17 significant digits round-trip exactly
}

TEST(Output, CsvIsIdenticalAcrossRuns) {
  const RobotConfig config = small_robot();
  std::ostringstream a, b;
  write_trajectory_csv(simulate(config, GaitSchedule{}, 1, coarse_settings(100)), a);
  write_trajectory_csv(simulate(config, GaitSchedule{}, 1, coarse_settings(100)), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_THROW(write_trajectory_csv(two_samples(), "/nonexistent/dir/t.csv"), std::ios_base::failure);
}

TEST(Output, SvgOfSixCycleRun) {
  const RobotConfig config = default_robot();
  const Trajectory traj = simulate(config, GaitSchedule{}, 6, coarse_settings(200));
  const std::string svg = render_trajectory_svg(traj, config);
  XmlSummary xml = parse_xml(svg);
  ASSERT_TRUE(xml.well_formed);
  EXPECT_EQ(xml.root, "svg");
  EXPECT_EQ(xml.classes["cycle-marker"], 6);
  EXPECT_EQ(xml.classes["start-marker"], 1);
  EXPECT_GT(xml.elements["polyline"], 1);
  EXPECT_EQ(xml.elements["linearGradient"], 1);
  for (int c = 1; c <= 6; ++c) EXPECT_NE(svg.find(">C" + std::to_string(c) + "<"), std::string::npos);
  EXPECT_EQ(svg.find(">C7<"), std::string::npos);
  EXPECT_NE(svg.find("x [m]"), std::string::npos);
  EXPECT_NE(svg.find("y [m]"), std::string::npos);
}

TEST(Output, SvgOfStationaryRobotHasOneMarker) {
  const Trajectory traj = stationary(3);
  XmlSummary xml = parse_xml(render_trajectory_svg(traj, traj.config));
  ASSERT_TRUE(xml.well_formed);
  EXPECT_EQ(xml.elements["circle"], 1);
  EXPECT_EQ(xml.elements["polyline"], 0);
}

TEST(Output, MetricsJsonCarriesUnits) {
  const Trajectory traj = stationary(2);
  const auto doc = nlohmann::json::parse(metrics_json(displacement_per_cycle(traj)));
  EXPECT_TRUE(doc.contains("mean_displacement_m_per_cycle"));
  EXPECT_TRUE(doc.contains("std_displacement_m_per_cycle"));
  EXPECT_TRUE(doc.contains("net_displacement_m"));
  EXPECT_TRUE(doc.contains("cycle_period_s"));
  EXPECT_EQ(doc["n_cycles"], 2);
  EXPECT_EQ(doc["per_cycle_displacement_m"].size(), 2u);
}

TEST(Output, SweepAndOptimizationSerialization) {
  GridRow ok{GaitParams{}, 1.5e-3, ""};
  GridRow bad{GaitParams{}, std::nullopt, "boom"};
  const std::string csv = sweep_csv({ok, bad});
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "k_min,k_max,beta,duty,phase_offset,objective_m_per_cycle,status");
  EXPECT_NE(csv.find(",ok\n"), std::string::npos);
  EXPECT_NE(csv.find(",failed\n"), std::string::npos);

  OptResult r;
  r.best_objective = 2e-3;
  r.seed = 9;
  r.evaluations = 1;
  r.history.push_back({GaitParams{}, 2e-3, 0});
  const auto doc = nlohmann::json::parse(optimization_json(r));
  EXPECT_EQ(doc["seed"], 9);
  EXPECT_DOUBLE_EQ(doc["best_objective_m_per_cycle"].get<double>(), 2e-3);
  EXPECT_EQ(doc["history"].size(), 1u);
}
