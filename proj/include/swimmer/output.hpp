#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "swimmer/dynamics.hpp"
#include "swimmer/experiments.hpp"
#include "swimmer/optimize.hpp"

namespace swimmer {

/// Header "t,x,y,phi,phase,k,theta_<flagellum>_<joint>,...".
std::string trajectory_csv_header(const RobotConfig& config);

/// Writes the trajectory as CSV (17 significant digits, '\n' line ends)
/// and returns the number of bytes written.
std::size_t write_trajectory_csv(const Trajectory& traj, std::ostream& out);
/// Throws std::ios_base::failure when `path` cannot be written.
std::size_t write_trajectory_csv(const Trajectory& traj, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& text);

/// Standalone SVG of the body-tip path, colored by time, with cycle markers.
std::string render_trajectory_svg(const Trajectory& traj, const RobotConfig& config);

std::string metrics_json(const CycleMetrics& metrics);
std::string comparison_json(const ComparisonReport& report);
std::string comparison_table(const ComparisonReport& report);
std::string sweep_csv(const std::vector<GridRow>& rows);
std::string optimization_json(const OptResult& result);

void write_text(const std::string& path, const std::string& text);

}  // namespace swimmer
