#include "swimmer/kinematics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "swimmer/errors.hpp"

namespace swimmer {

namespace {

Eigen::Vector2d unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// z-hat cross r
Eigen::Vector2d perp(const Eigen::Vector2d& r) { return {-r.y(), r.x()}; }

void check_dimension(const GeneralizedCoords& q, const RobotConfig& config) {
  if (q.size() != config.dof()) {
    throw std::invalid_argument("generalized coordinates have dimension " +
                                std::to_string(q.size()) + ", robot needs " +
                                std::to_string(config.dof()));
  }
}

std::string flagellum_path(std::size_t f, const char* field) {
  return "flagella[" + std::to_string(f) + "]." + field;
}

}  // namespace

int RobotConfig::joint_count() const {
  return std::accumulate(flagella.begin(), flagella.end(), 0,
                         [](int n, const FlagellumConfig& f) { return n + f.n_segments; });
}

int RobotConfig::joint_offset(std::size_t f) const {
  int offset = 3;
  for (std::size_t i = 0; i < f; ++i) offset += flagella[i].n_segments;
  return offset;
}

int first_link_of(const RobotConfig& config, std::size_t f) {
  return config.joint_offset(f) - 2;
}

RobotConfig default_robot() {
  RobotConfig config;
  const double tail = -0.5 * config.body.length;
  for (double angle : {-2.8, -2.3}) {
    for (bool mirror : {false, true}) {
      FlagellumConfig f;
      f.attachment_offset = tail;
      f.attachment_angle = angle;
      f.mirror = mirror;
      config.flagella.push_back(f);
    }
  }
  return config;
}

const RobotConfig& validate_config(const RobotConfig& config) {
  if (!(config.fluid.viscosity > 0.0)) throw ConfigError("fluid.viscosity", "must be > 0");
  if (!(config.fluid.density > 0.0)) throw ConfigError("fluid.density", "must be > 0");
  if (!(config.body.length > 0.0)) throw ConfigError("body.length", "must be > 0");
  if (!(config.body.radius > 0.0)) throw ConfigError("body.radius", "must be > 0");
  if (!(config.body.radius < config.body.length))
    throw ConfigError("body.radius", "must be < body.length");
  if (!(config.drag_ratio > 1.0)) throw ConfigError("drag_ratio", "must be > 1");
  if (config.flagella.empty()) throw ConfigError("flagella", "at least one flagellum is required");
  const double half = 0.5 * config.body.length;
  for (std::size_t i = 0; i < config.flagella.size(); ++i) {
    const FlagellumConfig& f = config.flagella[i];
    if (f.n_segments < 1) throw ConfigError(flagellum_path(i, "n_segments"), "must be >= 1");
    if (!(f.segment_length > 0.0))
      throw ConfigError(flagellum_path(i, "segment_length"), "must be > 0");
    if (!(f.segment_radius > 0.0))
      throw ConfigError(flagellum_path(i, "segment_radius"), "must be > 0");
    if (!(f.segment_radius < f.segment_length))
      throw ConfigError(flagellum_path(i, "segment_radius"),
                        "must be < segment_length");
    if (!std::isfinite(f.attachment_offset) || std::abs(f.attachment_offset) > half)
      throw ConfigError(flagellum_path(i, "attachment_offset"),
                        "must lie within [-body.length/2, body.length/2]");
    if (!std::isfinite(f.attachment_angle))
      throw ConfigError(flagellum_path(i, "attachment_angle"), "must be finite");
  }
  return config;
}

GeneralizedCoords straight_state(const RobotConfig& config, double x, double y, double phi) {
  GeneralizedCoords q = GeneralizedCoords::Zero(config.dof());
  q(0) = x;
  q(1) = y;
  q(2) = phi;
  return q;
}

LinkFrames forward_kinematics(const GeneralizedCoords& q, const RobotConfig& config) {
  check_dimension(q, config);
  LinkFrames frames;
  frames.reserve(config.link_count());
  const Eigen::Vector2d origin(q(0), q(1));
  const double phi = q(2);
  frames.push_back({origin, phi, config.body.length});

  int j = 3;
  for (const FlagellumConfig& f : config.flagella) {
    const double sense = f.mirror ? -1.0 : 1.0;
    Eigen::Vector2d hinge = origin + f.attachment_offset * unit(phi);
    double relative = f.attachment_angle;
    for (int s = 0; s < f.n_segments; ++s, ++j) {
      relative += q(j);
      const double angle = phi + sense * relative;
      const Eigen::Vector2d t = unit(angle);
      frames.push_back({hinge + 0.5 * f.segment_length * t, angle, f.segment_length});
      hinge += f.segment_length * t;
    }
  }
  return frames;
}

std::vector<CompactJacobian> compact_link_jacobians(const GeneralizedCoords& q,
                                                    const RobotConfig& config) {
  const LinkFrames frames = forward_kinematics(q, config);
  const Eigen::Vector2d origin(q(0), q(1));

  std::vector<CompactJacobian> out;
  out.reserve(frames.size());

  CompactJacobian body;
  body.columns = {0, 1, 2};
  body.block = Eigen::Matrix3d::Identity();
  out.push_back(std::move(body));

  int link = 1;
  for (std::size_t fi = 0; fi < config.flagella.size(); ++fi) {
    const FlagellumConfig& f = config.flagella[fi];
    const double sense = f.mirror ? -1.0 : 1.0;
    const int j0 = config.joint_offset(fi);
    for (int s = 0; s < f.n_segments; ++s, ++link) {
      const LinkFrame& frame = frames[link];
      CompactJacobian jac;
      jac.columns.resize(3 + s + 1);
      jac.block.resize(3, 3 + s + 1);
      jac.columns[0] = 0;
      jac.columns[1] = 1;
      jac.columns[2] = 2;
      jac.block.col(0) << 1.0, 0.0, 0.0;
      jac.block.col(1) << 0.0, 1.0, 0.0;
      jac.block.col(2) << perp(frame.center - origin), 1.0;
      for (int m = 0; m <= s; ++m) {
        // joint m sits at the proximal end of link m of this flagellum
        const Eigen::Vector2d pivot = frames[link - s + m].proximal();
        jac.columns[3 + m] = j0 + m;
        jac.block.col(3 + m) << sense * perp(frame.center - pivot), sense;
      }
      out.push_back(std::move(jac));
    }
  }
  return out;
}

LinkJacobian link_jacobian(const GeneralizedCoords& q, const RobotConfig& config, int link_id) {
  check_dimension(q, config);
  if (link_id < 0 || link_id >= config.link_count()) {
    throw std::out_of_range("link id " + std::to_string(link_id) + " outside [0, " +
                            std::to_string(config.link_count()) + ")");
  }
  const auto all = compact_link_jacobians(q, config);
  const CompactJacobian& c = all[link_id];
  LinkJacobian jac = LinkJacobian::Zero(3, config.dof());
  for (std::size_t k = 0; k < c.columns.size(); ++k) jac.col(c.columns[k]) = c.block.col(k);
  return jac;
}

}  // namespace swimmer
