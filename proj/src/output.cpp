#include "swimmer/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace swimmer {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string fmt_short(double v, int digits = 4) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", digits, v);
  return buf.data();
}

json metrics_to_json(const CycleMetrics& m) {
  return {{"n_cycles", m.n_cycles},
          {"cycle_period_s", m.cycle_period},
          {"per_cycle_displacement_m", m.per_cycle_displacement},
          {"mean_displacement_m_per_cycle", m.mean},
          {"std_displacement_m_per_cycle", m.std},
          {"first_cycle_displacement_m", m.first_cycle},
          {"net_displacement_m", m.net_displacement},
          {"travel_direction", {m.travel_direction.x(), m.travel_direction.y()}},
          {"coefficient_of_variation", m.mean != 0.0 ? json(m.coefficient_of_variation())
                                                     : json(nullptr)}};
}

json params_to_json(const GaitParams& p) {
  json out;
  for (std::size_t i = 0; i < GaitParams::kCount; ++i)
    out[std::string(GaitParams::kNames[i])] = p.get(i);
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Dark blue -> teal -> yellow, t in [0, 1].
std::string time_color(double t) {
  static constexpr std::array<std::array<double, 3>, 3> stops = {
      {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0);
  const double s = t * 2.0;
  const int i = std::min(1, static_cast<int>(s));
  const double f = s - i;
  std::array<int, 3> rgb{};
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
  std::array<char, 8> buf{};
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf.data();
}

}  // namespace

std::string trajectory_csv_header(const RobotConfig& config) {
  std::string header = "t,x,y,phi,phase,k";
  for (std::size_t f = 0; f < config.flagella.size(); ++f)
    for (int j = 0; j < config.flagella[f].n_segments; ++j)
      header += ",theta_" + std::to_string(f) + "_" + std::to_string(j);
  return header;
}

std::size_t write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.samples.empty()) throw std::invalid_argument("cannot write an empty trajectory");
  std::size_t bytes = 0;
  auto emit = [&](const std::string& line) {
    out << line << '\n';
    bytes += line.size() + 1;
  };
  emit(trajectory_csv_header(traj.config));
  std::string line;
  for (const auto& s : traj.samples) {
    line = fmt_double(s.t);
    for (int i = 0; i < 3; ++i) line += "," + fmt_double(s.q(i));
    line += "," + fmt_double(s.phase) + "," + fmt_double(s.stiffness);
    for (Eigen::Index i = 3; i < s.q.size(); ++i) line += "," + fmt_double(s.q(i));
    emit(line);
  }
  if (!out) throw std::ios_base::failure("failed writing trajectory CSV");
  return bytes;
}

std::size_t write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  return write_trajectory_csv(traj, out);
}

CsvTable read_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) return table;
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_trajectory_svg(const Trajectory& traj, const RobotConfig& config) {
  if (traj.samples.empty()) throw std::invalid_argument("cannot render an empty trajectory");
  const auto tip = tip_trajectory(traj, config);

  Eigen::Vector2d lo = tip.front().position;
  Eigen::Vector2d hi = lo;
  for (const auto& p : tip) {
    lo = lo.cwiseMin(p.position);
    hi = hi.cwiseMax(p.position);
  }
  const double extent = (hi - lo).maxCoeff();
  const bool stationary = !(extent > 0.0);
  const double span = stationary ? 0.01 : extent * 1.1;
  const Eigen::Vector2d mid = 0.5 * (lo + hi);

  constexpr double kSize = 400.0;
  constexpr double kMargin = 60.0;
  constexpr double kWidth = kSize + 2 * kMargin + 80.0;
  constexpr double kHeight = kSize + 2 * kMargin;
  auto px = [&](const Eigen::Vector2d& p) {
    return Eigen::Vector2d(kMargin + kSize * (0.5 + (p.x() - mid.x()) / span),
                           kMargin + kSize * (0.5 - (p.y() - mid.y()) / span));
  };
  auto coord = [](double v) { return fmt_short(v, 6); };

  const double t_end = traj.samples.back().t;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  // Axes with metre tick labels.
  svg << "  <g class=\"axes\" stroke=\"black\" stroke-width=\"1\" font-size=\"10\" "
         "font-family=\"sans-serif\">\n";
  svg << "    <line x1=\"" << kMargin << "\" y1=\"" << kMargin + kSize << "\" x2=\""
      << kMargin + kSize << "\" y2=\"" << kMargin + kSize << "\"/>\n";
  svg << "    <line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kMargin + kSize << "\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double xv = mid.x() + (f - 0.5) * span;
    const double yv = mid.y() + (f - 0.5) * span;
    const double xp = kMargin + kSize * f;
    const double yp = kMargin + kSize * (1.0 - f);
    svg << "    <text x=\"" << xp << "\" y=\"" << kMargin + kSize + 15
        << "\" text-anchor=\"middle\" stroke=\"none\">" << fmt_short(xv) << "</text>\n";
    svg << "    <text x=\"" << kMargin - 5 << "\" y=\"" << yp
        << "\" text-anchor=\"end\" stroke=\"none\">" << fmt_short(yv) << "</text>\n";
  }
  svg << "    <text x=\"" << kMargin + kSize / 2 << "\" y=\"" << kMargin + kSize + 35
      << "\" text-anchor=\"middle\" stroke=\"none\">x [m]</text>\n";
  svg << "    <text x=\"" << 15 << "\" y=\"" << kMargin + kSize / 2
      << "\" text-anchor=\"middle\" stroke=\"none\" transform=\"rotate(-90 15 "
      << kMargin + kSize / 2 << ")\">y [m]</text>\n";
  svg << "  </g>\n";

  // Time colorbar.
  svg << "  <defs>\n    <linearGradient id=\"time\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
  for (int i = 0; i <= 4; ++i)
    svg << "      <stop offset=\"" << i / 4.0 << "\" stop-color=\"" << time_color(i / 4.0)
        << "\"/>\n";
  svg << "    </linearGradient>\n  </defs>\n";
  const double bar_x = kMargin + kSize + 30;
  svg << "  <g class=\"colorbar\" font-size=\"10\" font-family=\"sans-serif\">\n"
      << "    <rect x=\"" << bar_x << "\" y=\"" << kMargin << "\" width=\"12\" height=\""
      << kSize << "\" fill=\"url(#time)\"/>\n"
      << "    <text x=\"" << bar_x + 16 << "\" y=\"" << kMargin + kSize << "\">0 s</text>\n"
      << "    <text x=\"" << bar_x + 16 << "\" y=\"" << kMargin + 8 << "\">"
      << fmt_short(t_end) << " s</text>\n  </g>\n";

  if (stationary) {
    const Eigen::Vector2d p = px(tip.front().position);
    svg << "  <circle class=\"marker start-marker\" cx=\"" << coord(p.x()) << "\" cy=\""
        << coord(p.y()) << "\" r=\"4\" fill=\"" << time_color(0.0) << "\"/>\n";
    svg << "</svg>\n";
    return svg.str();
  }

  // Tip path as short polylines so each chunk carries its own time color.
  constexpr std::size_t kChunks = 64;
  const std::size_t n = tip.size();
  const std::size_t chunk = std::max<std::size_t>(1, (n - 1 + kChunks - 1) / kChunks);
  const std::size_t stride = std::max<std::size_t>(1, chunk / 16);
  svg << "  <g class=\"tip-path\" fill=\"none\" stroke-width=\"2\">\n";
  for (std::size_t begin = 0; begin + 1 < n; begin += chunk) {
    const std::size_t end = std::min(n - 1, begin + chunk);
    const double t_mid = 0.5 * (tip[begin].t + tip[end].t);
    svg << "    <polyline stroke=\"" << time_color(t_end > 0 ? t_mid / t_end : 0.0)
        << "\" points=\"";
    for (std::size_t i = begin; i < end; i += stride) {
      const Eigen::Vector2d p = px(tip[i].position);
      svg << coord(p.x()) << "," << coord(p.y()) << " ";
    }
    const Eigen::Vector2d p = px(tip[end].position);
    svg << coord(p.x()) << "," << coord(p.y()) << "\"/>\n";
  }
  svg << "  </g>\n";

  const Eigen::Vector2d start = px(tip.front().position);
  svg << "  <circle class=\"marker start-marker\" cx=\"" << coord(start.x()) << "\" cy=\""
      << coord(start.y()) << "\" r=\"3\" fill=\"" << time_color(0.0) << "\"/>\n";

  svg << "  <g class=\"cycles\" font-size=\"9\" font-family=\"sans-serif\">\n";
  const int cycles = traj.completed_cycles();
  for (int c = 1; c <= cycles; ++c) {
    const auto index = static_cast<std::size_t>(c) * traj.steps_per_cycle;
    const Eigen::Vector2d p = px(tip[index].position);
    svg << "    <circle class=\"cycle-marker\" cx=\"" << coord(p.x()) << "\" cy=\""
        << coord(p.y()) << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n"
        << "    <text x=\"" << coord(p.x() + 4) << "\" y=\"" << coord(p.y() - 6) << "\">C"
        << c << "</text>\n";
  }
  svg << "  </g>\n</svg>\n";
  return svg.str();
}

std::string metrics_json(const CycleMetrics& metrics) {
  return metrics_to_json(metrics).dump(2) + "\n";
}

std::string comparison_json(const ComparisonReport& report) {
  json presets = json::array();
  for (const auto& p : report.presets) {
    presets.push_back({{"name", p.name},
                       {"k_min_N_m_per_rad", p.gait.k_min},
                       {"k_max_N_m_per_rad", p.gait.k_max},
                       {"beta_rad", p.gait.beta},
                       {"metrics", metrics_to_json(p.metrics)}});
  }
  json doc = {{"n_cycles", report.n_cycles},
              {"dt_s", report.settings.dt},
              {"presets", presets},
              {"ordering_by_mean_displacement", report.ordering}};
  doc["controlled_to_flexible_ratio"] = std::isfinite(report.controlled_to_flexible)
                                            ? json(report.controlled_to_flexible)
                                            : json(nullptr);
  return doc.dump(2) + "\n";
}

std::string comparison_table(const ComparisonReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "preset" << std::right << std::setw(16)
      << "mean_m_per_cycle" << std::setw(16) << "std_m_per_cycle" << std::setw(14) << "net_m"
      << std::setw(10) << "cv" << "\n";
  for (const auto& p : report.presets) {
    out << std::left << std::setw(24) << p.name << std::right << std::setw(16)
        << fmt_short(p.metrics.mean, 6) << std::setw(16) << fmt_short(p.metrics.std, 6)
        << std::setw(14) << fmt_short(p.metrics.net_displacement, 6) << std::setw(10)
        << fmt_short(p.metrics.coefficient_of_variation(), 3) << "\n";
  }
  if (std::isfinite(report.controlled_to_flexible))
    out << "controlled_flexible / fully_flexible mean ratio: "
        << fmt_short(report.controlled_to_flexible, 6) << "\n";
  return out.str();
}

std::string sweep_csv(const std::vector<GridRow>& rows) {
  std::string out;
  for (auto name : GaitParams::kNames) out += std::string(name) + ",";
  out += "objective_m_per_cycle,status\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < GaitParams::kCount; ++i) out += fmt_double(row.params.get(i)) + ",";
    if (row.objective) {
      out += fmt_double(*row.objective) + ",ok\n";
    } else {
      out += "nan,failed\n";
    }
  }
  return out;
}

std::string optimization_json(const OptResult& result) {
  json history = json::array();
  for (const auto& e : result.history) {
    history.push_back({{"index", e.index},
                       {"params", params_to_json(e.params)},
                       {"objective_m_per_cycle", optional_number(e.objective)}});
  }
  json doc = {{"seed", result.seed},
              {"evaluations", result.evaluations},
              {"best_params", params_to_json(result.best_params)},
              {"best_objective_m_per_cycle", result.best_objective},
              {"history", history}};
  return doc.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::ios_base::failure("failed writing '" + path + "'");
}

}  // namespace swimmer
