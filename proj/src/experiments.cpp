#include "swimmer/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "swimmer/parallel.hpp"

namespace swimmer {

namespace {

Eigen::Vector2d center_at(const Trajectory& traj, std::size_t index) {
  const auto& q = traj.samples[index].q;
  return {q(0), q(1)};
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace

GaitSchedule preset_gait(GaitMode mode, const GaitSchedule& base) {
  GaitSchedule gait = base;
  gait.mode = mode;
  return gait;
}

GaitSchedule preset_gait(std::string_view name, const GaitSchedule& base) {
  return preset_gait(gait_mode_from_string(name), base);
}

double CycleMetrics::coefficient_of_variation() const {
  if (mean == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(std / mean);
}

CycleMetrics displacement_per_cycle(const Trajectory& traj) {
  const int cycles = traj.completed_cycles();
  if (cycles < 1) throw std::invalid_argument("trajectory is shorter than one stroke cycle");

  const std::size_t stride = static_cast<std::size_t>(traj.steps_per_cycle);
  CycleMetrics m;
  m.n_cycles = cycles;
  m.cycle_period = traj.period();

  const Eigen::Vector2d start = center_at(traj, 0);
  const Eigen::Vector2d net = center_at(traj, cycles * stride) - start;
  m.net_displacement = net.norm();
  // Direction of the steady cycles; the first-cycle transient can point
  // elsewhere and would otherwise dominate a short run.
  const Eigen::Vector2d steady = cycles > 1 ? Eigen::Vector2d(center_at(traj, cycles * stride) -
                                                              center_at(traj, stride))
                                            : net;
  if (steady.norm() > 0.0) {
    m.travel_direction = steady.normalized();
  } else if (m.net_displacement > 0.0) {
    m.travel_direction = net / m.net_displacement;
  } else {
    const double phi = traj.samples.front().q(2);
    m.travel_direction = {std::cos(phi), std::sin(phi)};
  }

  for (int c = 1; c <= cycles; ++c) {
    const Eigen::Vector2d d = center_at(traj, c * stride) - center_at(traj, (c - 1) * stride);
    m.per_cycle_displacement.push_back(d.dot(m.travel_direction));
  }
  m.first_cycle = m.per_cycle_displacement.front();

  const auto first = m.per_cycle_displacement.begin() + (cycles > 1 ? 1 : 0);
  const auto last = m.per_cycle_displacement.end();
  const double count = static_cast<double>(last - first);
  m.mean = std::accumulate(first, last, 0.0) / count;
  if (count > 1) {
    double ss = 0.0;
    for (auto it = first; it != last; ++it) ss += (*it - m.mean) * (*it - m.mean);
    m.std = std::sqrt(ss / (count - 1));
  }
  return m;
}

NetDisplacement net_displacement(const Trajectory& traj) {
  if (traj.samples.empty()) return {};
  const Eigen::Vector2d d = center_at(traj, traj.samples.size() - 1) - center_at(traj, 0);
  return {d, d.norm()};
}

std::vector<TipPoint> tip_trajectory(const Trajectory& traj, const RobotConfig& config) {
  std::vector<TipPoint> path;
  path.reserve(traj.samples.size());
  const double half = 0.5 * config.body.length;
  for (const auto& s : traj.samples) {
    const double phi = s.q(2);
    path.push_back({s.t, Eigen::Vector2d(s.q(0) + half * std::cos(phi),
                                         s.q(1) + half * std::sin(phi))});
  }
  return path;
}

PrescribedMotion two_phase_stroke(const RobotConfig& config, double amplitude, double period) {
  // Per-flagellum joint index and count, in q order.
  std::vector<double> lag;
  for (const auto& f : config.flagella)
    for (int j = 0; j < f.n_segments; ++j) lag.push_back(0.5 * j / f.n_segments);

  PrescribedMotion motion;
  motion.period = period;
  motion.angles = [lag, amplitude, period](double t) {
    const double phase = t / period - std::floor(t / period);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(lag.size()));
    for (std::size_t j = 0; j < lag.size(); ++j) {
      const auto i = static_cast<Eigen::Index>(j);
      if (phase < 0.5) {
        theta(i) = amplitude * smoothstep((2.0 * phase - lag[j]) / 0.5);
      } else {
        theta(i) = amplitude * (1.0 - smoothstep((2.0 * phase - 1.0 - lag[j]) / 0.5));
      }
    }
    return theta;
  };
  return motion;
}

ScallopReport scallop_check(const RobotConfig& config, const SimSettings& settings,
                            const PrescribedMotion* motion, double amplitude, double period,
                            int n_cycles) {
  const PrescribedMotion reciprocal = reciprocal_sinusoid(config, amplitude, period);
  const PrescribedMotion& used = motion ? *motion : reciprocal;

  auto worst_cycle = [&](const SimSettings& s) {
    const Trajectory traj = simulate_prescribed(config, used, n_cycles, s);
    const std::size_t stride = static_cast<std::size_t>(traj.steps_per_cycle);
    double worst = 0.0;
    for (int c = 1; c <= n_cycles; ++c) {
      const auto& a = traj.samples[(c - 1) * stride].q;
      const auto& b = traj.samples[c * stride].q;
      worst = std::max(worst, std::hypot(b(0) - a(0), b(1) - a(1)));
    }
    return worst;
  };

  SimSettings coarse = settings;
  coarse.dt = used.period / steps_per_cycle(settings, used.period);
  SimSettings fine = coarse;
  fine.dt = 0.5 * coarse.dt;

  ScallopReport report;
  report.displacement_per_cycle = worst_cycle(coarse);
  report.displacement_per_cycle_half = worst_cycle(fine);
  const double body = config.body.length;
  report.body_lengths = report.displacement_per_cycle / body;
  report.refinement_ratio = report.displacement_per_cycle_half > 0.0
                                ? report.displacement_per_cycle / report.displacement_per_cycle_half
                                : std::numeric_limits<double>::infinity();
  report.at_roundoff = report.body_lengths <= kScallopRoundoffFloor &&
                       report.displacement_per_cycle_half / body <= kScallopRoundoffFloor;
  const bool small = report.body_lengths <= kScallopTolerance;
  const bool shrinking = report.refinement_ratio >= kScallopRefinement || report.at_roundoff;
  report.passed = small && shrinking;
  report.symmetry_broken = !small;

  std::ostringstream msg;
  msg << "per-cycle displacement " << report.body_lengths << " body lengths (dt), "
      << report.displacement_per_cycle_half / body << " (dt/2)";
  if (report.at_roundoff) {
    msg << ", at round-off";
  } else {
    msg << ", refinement ratio " << report.refinement_ratio;
  }
  if (report.symmetry_broken) msg << "; symmetry broken";
  report.summary = msg.str();
  return report;
}

ComparisonReport compare_gaits(const RobotConfig& config, const std::vector<GaitMode>& presets,
                               int n_cycles, const SimSettings& settings,
                               const GaitSchedule& base) {
  if (presets.size() < 2) throw std::invalid_argument("compare_gaits needs at least two presets");

  ComparisonReport report;
  report.n_cycles = n_cycles;
  report.config = config;
  report.settings = settings;
  report.presets = parallel_map(presets.size(), [&](std::size_t i) {
    const GaitSchedule gait = preset_gait(presets[i], base);
    const Trajectory traj = simulate(config, gait, n_cycles, settings);
    return PresetResult{std::string(to_string(presets[i])), gait, displacement_per_cycle(traj)};
  });

  std::vector<const PresetResult*> sorted;
  for (const auto& p : report.presets) sorted.push_back(&p);
  std::stable_sort(sorted.begin(), sorted.end(), [](const PresetResult* a, const PresetResult* b) {
    return std::abs(a->metrics.mean) > std::abs(b->metrics.mean);
  });
  for (const auto* p : sorted) report.ordering.push_back(p->name);

  const PresetResult* controlled = nullptr;
  const PresetResult* flexible = nullptr;
  for (const auto& p : report.presets) {
    if (p.gait.mode == GaitMode::controlled_flexible) controlled = &p;
    if (p.gait.mode == GaitMode::fully_flexible) flexible = &p;
  }
  report.controlled_to_flexible = controlled && flexible
                                      ? controlled->metrics.mean / flexible->metrics.mean
                                      : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace swimmer
