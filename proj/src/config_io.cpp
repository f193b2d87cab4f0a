#include "swimmer/config_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "swimmer/errors.hpp"

namespace swimmer {

namespace {

using nlohmann::json;
using Keys = std::vector<std::string_view>;

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

// Strict view over one JSON object: rejects unknown keys up front.
class Section {
 public:
  Section(const json& node, std::string path, const Keys& allowed)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
    for (const auto& [key, value] : node_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      std::string msg = "unknown key '" + key + "'";
      const std::string hint = nearest_key(key, allowed);
      if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
      throw ConfigError(join(path_, key), msg);
    }
  }

  void number(std::string_view key, double& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
      out = v->get<double>();
    }
  }

  void integer(std::string_view key, int& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
      out = v->get<int>();
    }
  }

  void boolean(std::string_view key, bool& out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
      out = v->get<bool>();
    }
  }

  template <typename Parse>
  void text(std::string_view key, Parse parse) const {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
      try {
        parse(v->get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(join(path_, key), e.what());
      }
    }
  }

  const json* find(std::string_view key) const {
    auto it = node_.find(std::string(key));
    return it == node_.end() ? nullptr : &*it;
  }

  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
};

const Keys kTopKeys = {"version", "fluid", "body", "flagella", "mechanism", "gait", "sim"};
const Keys kFluidKeys = {"viscosity", "density", "drag_ratio"};
const Keys kBodyKeys = {"length", "radius"};
const Keys kFlagellumKeys = {"n_segments",        "segment_length",   "segment_radius",
                             "attachment_offset", "attachment_angle", "mirror"};
const Keys kMechanismKeys = {"motor_rpm", "thread_pitch", "shaft_travel", "half_period"};
const Keys kGaitKeys = {"mode", "k_min", "k_max", "beta", "duty", "phase_offset", "ramp",
                        "ramp_width"};
const Keys kSimKeys = {"dt", "scheme", "n_cycles"};

std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

std::string nearest_key(std::string_view key, const std::vector<std::string_view>& candidates) {
  std::string best;
  std::size_t best_distance = std::max<std::size_t>(2, key.size() / 3) + 1;
  for (auto c : candidates) {
    const std::size_t d = edit_distance(key, c);
    if (d < best_distance) {
      best_distance = d;
      best = std::string(c);
    }
  }
  return best;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError("", "syntax error at " + locate(text, byte) + ": " + e.what());
  }

  const Section top(doc, "", kTopKeys);
  const json* version = top.find("version");
  if (!version) throw ConfigError("version", "missing mandatory key");
  if (!version->is_number_integer() || version->get<int>() != kConfigVersion)
    throw ConfigError("version", "unsupported version (expected " +
                                     std::to_string(kConfigVersion) + ")");

  RunConfig run;
  RobotConfig& robot = run.robot;

  if (const json* node = top.find("fluid")) {
    const Section s(*node, "fluid", kFluidKeys);
    s.number("viscosity", robot.fluid.viscosity);
    s.number("density", robot.fluid.density);
    s.number("drag_ratio", robot.drag_ratio);
  }
  const double default_length = robot.body.length;
  if (const json* node = top.find("body")) {
    const Section s(*node, "body", kBodyKeys);
    s.number("length", robot.body.length);
    s.number("radius", robot.body.radius);
  }
  if (const json* node = top.find("flagella")) {
    if (!node->is_array()) throw ConfigError("flagella", "expected an array");
    robot.flagella.clear();
    for (std::size_t i = 0; i < node->size(); ++i) {
      const Section s((*node)[i], "flagella[" + std::to_string(i) + "]", kFlagellumKeys);
      FlagellumConfig f;
      f.attachment_offset = -0.5 * robot.body.length;
      f.attachment_angle = default_robot().flagella.front().attachment_angle;
      s.integer("n_segments", f.n_segments);
      s.number("segment_length", f.segment_length);
      s.number("segment_radius", f.segment_radius);
      s.number("attachment_offset", f.attachment_offset);
      s.number("attachment_angle", f.attachment_angle);
      s.boolean("mirror", f.mirror);
      robot.flagella.push_back(f);
    }
  } else if (robot.body.length != default_length) {
    for (auto& f : robot.flagella) f.attachment_offset = -0.5 * robot.body.length;
  }

  if (const json* node = top.find("mechanism")) {
    const Section s(*node, "mechanism", kMechanismKeys);
    s.number("motor_rpm", run.mechanism.motor_rpm);
    s.number("thread_pitch", run.mechanism.thread_pitch);
    s.number("shaft_travel", run.mechanism.shaft_travel);
    s.number("half_period", run.mechanism.half_period);
  }
  run.gait.period = run.mechanism.period();

  if (const json* node = top.find("gait")) {
    const Section s(*node, "gait", kGaitKeys);
    s.text("mode", [&](const std::string& v) { run.gait.mode = gait_mode_from_string(v); });
    s.number("k_min", run.gait.k_min);
    s.number("k_max", run.gait.k_max);
    s.number("beta", run.gait.beta);
    s.number("duty", run.gait.duty);
    s.number("phase_offset", run.gait.phase_offset);
    s.text("ramp", [&](const std::string& v) { run.gait.ramp = ramp_from_string(v); });
    s.number("ramp_width", run.gait.ramp_width);
  }

  if (const json* node = top.find("sim")) {
    const Section s(*node, "sim", kSimKeys);
    s.number("dt", run.sim.dt);
    s.text("scheme", [&](const std::string& v) { run.sim.scheme = scheme_from_string(v); });
    s.integer("n_cycles", run.n_cycles);
  }
  if (run.sim.dt == 0.0) run.sim.dt = run.gait.period / 2000.0;

  validate_config(robot);
  validate_mechanism(run.mechanism);
  validate_gait(run.gait);
  if (!(run.sim.dt > 0.0) || run.sim.dt > run.gait.period)
    throw ConfigError("sim.dt", "must lie in (0, period]");
  validate_settings(run.sim);
  if (run.n_cycles < 1) throw ConfigError("sim.n_cycles", "must be >= 1");
  return run;
}

std::string serialize_config(const RunConfig& config) {
  json doc;
  doc["version"] = kConfigVersion;
  doc["fluid"] = {{"viscosity", config.robot.fluid.viscosity},
                  {"density", config.robot.fluid.density},
                  {"drag_ratio", config.robot.drag_ratio}};
  doc["body"] = {{"length", config.robot.body.length}, {"radius", config.robot.body.radius}};
  json flagella = json::array();
  for (const auto& f : config.robot.flagella) {
    flagella.push_back({{"n_segments", f.n_segments},
                        {"segment_length", f.segment_length},
                        {"segment_radius", f.segment_radius},
                        {"attachment_offset", f.attachment_offset},
                        {"attachment_angle", f.attachment_angle},
                        {"mirror", f.mirror}});
  }
  doc["flagella"] = flagella;
  doc["mechanism"] = {{"motor_rpm", config.mechanism.motor_rpm},
                      {"thread_pitch", config.mechanism.thread_pitch},
                      {"shaft_travel", config.mechanism.shaft_travel},
                      {"half_period", config.mechanism.half_period}};
  doc["gait"] = {{"mode", std::string(to_string(config.gait.mode))},
                 {"k_min", config.gait.k_min},
                 {"k_max", config.gait.k_max},
                 {"beta", config.gait.beta},
                 {"duty", config.gait.duty},
                 {"phase_offset", config.gait.phase_offset},
                 {"ramp", std::string(to_string(config.gait.ramp))},
                 {"ramp_width", config.gait.ramp_width}};
  doc["sim"] = {{"dt", config.sim.dt},
                {"scheme", std::string(to_string(config.sim.scheme))},
                {"n_cycles", config.n_cycles}};
  return doc.dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace swimmer
