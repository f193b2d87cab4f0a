#include "swimmer/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "swimmer/config_io.hpp"
#include "swimmer/errors.hpp"
#include "swimmer/experiments.hpp"
#include "swimmer/optimize.hpp"
#include "swimmer/output.hpp"
#include "swimmer/verify.hpp"

namespace swimmer {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig load_or_default(const std::string& path) {
  if (path.empty()) return RunConfig{};
  if (!fs::exists(path)) throw UsageError("config file not found: " + path);
  try {
    return load_config(path);
  } catch (const std::ios_base::failure& e) {
    throw UsageError(e.what());
  }
}

fs::path prepare_dir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir + "': " + ec.message());
  return path;
}

struct Options {
  std::string config;
  std::string out_dir = ".";
  int cycles = 0;
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  int budget = 50;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::vector<std::string> free;
};

int run_simulate(const Options& opt, std::ostream& out) {
  RunConfig run = load_or_default(opt.config);
  if (opt.cycles > 0) run.n_cycles = opt.cycles;
  const fs::path dir = prepare_dir(opt.out_dir);
  const Trajectory traj = simulate(run.robot, run.gait, run.n_cycles, run.sim);
  const CycleMetrics metrics = displacement_per_cycle(traj);
  write_trajectory_csv(traj, (dir / "trajectory.csv").string());
  write_text((dir / "metrics.json").string(), metrics_json(metrics));
  write_text((dir / "trajectory.svg").string(), render_trajectory_svg(traj, run.robot));
  out << "mean_displacement_m_per_cycle " << metrics.mean << "\n"
      << "net_displacement_m " << metrics.net_displacement << "\n";
  return kExitOk;
}

int run_compare(const Options& opt, std::ostream& out) {
  RunConfig run = load_or_default(opt.config);
  if (opt.cycles > 0) run.n_cycles = opt.cycles;
  const fs::path dir = prepare_dir(opt.out_dir);
  const ComparisonReport report = compare_gaits(
      run.robot,
      {GaitMode::controlled_flexible, GaitMode::fully_flexible, GaitMode::fully_rigid},
      run.n_cycles, run.sim, run.gait);
  write_text((dir / "comparison.json").string(), comparison_json(report));
  out << comparison_table(report);
  return kExitOk;
}

int run_verify(const Options& opt, std::ostream& out) {
  const RunConfig run = load_or_default(opt.config);
  bool all = true;
  for (const auto& check : run_verification(run)) {
    const char* tag = check.skipped ? "SKIP" : (check.passed ? "PASS" : "FAIL");
    out << std::left << std::setw(6) << tag << std::setw(34) << check.name << check.detail << "\n";
    all = all && check.passed;
  }
  out << (all ? "all checks passed" : "verification FAILED") << "\n";
  return all ? kExitOk : kExitNumerical;
}

int run_sweep(const Options& opt, std::ostream& out) {
  const RunConfig run = load_or_default(opt.config);
  if (opt.steps < 1) throw UsageError("--steps must be >= 1");
  GridSpec grid;
  try {
    grid = GridSpec::linear(opt.param, opt.from, opt.to, opt.steps);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const fs::path dir = prepare_dir(opt.out_dir);
  const auto rows = sweep_grid(grid, run.robot, run.gait, run.sim, opt.jobs);
  write_text((dir / "sweep.csv").string(), sweep_csv(rows));
  const std::size_t index = GaitParams::index_of(opt.param);
  for (const auto& row : rows) {
    out << opt.param << "=" << row.params.get(index) << "  ";
    if (row.objective) {
      out << *row.objective << " m/cycle\n";
    } else {
      out << "failed: " << row.error << "\n";
    }
  }
  return kExitOk;
}

ParamBounds default_bounds(const GaitSchedule& base, const std::vector<std::string>& free) {
  ParamBounds bounds = ParamBounds::fixed(GaitParams::from(base));
  const GaitParams lower{1e-5, 0.1, 0.2, 0.2, 0.0};
  const GaitParams upper{1e-3, 5.0, 1.2, 0.8, 0.5};
  for (const auto& name : free) {
    std::size_t i = 0;
    try {
      i = GaitParams::index_of(name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    bounds.lower.set(i, lower.get(i));
    bounds.upper.set(i, upper.get(i));
  }
  return bounds;
}

int run_optimize(const Options& opt, std::ostream& out) {
  const RunConfig run = load_or_default(opt.config);
  if (opt.budget < 10) throw UsageError("--budget must be >= 10");
  const fs::path dir = prepare_dir(opt.out_dir);
  const ParamBounds bounds = default_bounds(run.gait, opt.free);
  const OptResult result = optimize_gait(bounds, opt.budget, opt.seed, run.robot, run.gait, run.sim);
  write_text((dir / "optimization.json").string(), optimization_json(result));
  out << "best_objective_m_per_cycle " << result.best_objective << "\n";
  for (std::size_t i = 0; i < GaitParams::kCount; ++i)
    out << GaitParams::kNames[i] << " " << result.best_params.get(i) << "\n";
  out << "evaluations " << result.evaluations << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Overdamped simulator of a flagellated swimmer with controlled flexibility",
               "swimmer"};
  app.require_subcommand(1);
  Options opt;

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one gait and write CSV/JSON/SVG");
  simulate_cmd->add_option("--config", opt.config, "Configuration document (JSON)");
  simulate_cmd->add_option("--cycles", opt.cycles, "Stroke cycles (default: sim.n_cycles)");
  simulate_cmd->add_option("--out", opt.out_dir, "Output directory");

  auto* compare_cmd = app.add_subcommand("compare", "Compare the gait presets");
  compare_cmd->add_option("--config", opt.config, "Configuration document (JSON)");
  compare_cmd->add_option("--cycles", opt.cycles, "Stroke cycles (default: sim.n_cycles)");
  compare_cmd->add_option("--out", opt.out_dir, "Output directory");

  auto* verify_cmd = app.add_subcommand("verify", "Run the scallop-theorem and invariant suite");
  verify_cmd->add_option("--config", opt.config, "Configuration document (JSON)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep of one gait parameter");
  sweep_cmd->add_option("--config", opt.config, "Configuration document (JSON)");
  sweep_cmd->add_option("--param", opt.param, "k_min, k_max, beta, duty or phase_offset")
      ->required();
  sweep_cmd->add_option("--from", opt.from, "First value")->required();
  sweep_cmd->add_option("--to", opt.to, "Last value")->required();
  sweep_cmd->add_option("--steps", opt.steps, "Number of grid points")->required();
  sweep_cmd->add_option("--jobs", opt.jobs, "Concurrent simulations (0 = all cores)");
  sweep_cmd->add_option("--out", opt.out_dir, "Output directory");

  auto* optimize_cmd = app.add_subcommand("optimize", "Derivative-free gait optimization");
  optimize_cmd->add_option("--config", opt.config, "Configuration document (JSON)");
  optimize_cmd->add_option("--budget", opt.budget, "Objective evaluations");
  optimize_cmd->add_option("--seed", opt.seed, "Random seed for restarts");
  optimize_cmd->add_option("--free", opt.free, "Parameters to optimize")
      ->delimiter(',')
      ->default_str("k_min,k_max,beta,duty,phase_offset");
  optimize_cmd->add_option("--out", opt.out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "swimmer: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  if (opt.free.empty())
    opt.free.assign(GaitParams::kNames.begin(), GaitParams::kNames.end());

  try {
    if (*simulate_cmd) return run_simulate(opt, out);
    if (*compare_cmd) return run_compare(opt, out);
    if (*verify_cmd) return run_verify(opt, out);
    if (*sweep_cmd) return run_sweep(opt, out);
    if (*optimize_cmd) return run_optimize(opt, out);
  } catch (const UsageError& e) {
    err << "swimmer: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "swimmer: invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "swimmer: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "swimmer: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace swimmer
