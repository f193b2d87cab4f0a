#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swimmer/dynamics.hpp"

namespace swimmer {

/// Tunable gait parameters; everything else comes from a base schedule.
struct GaitParams {
  double k_min = 1e-4;
  double k_max = 1.0;
  double beta = 0.7;
  double duty = 0.5;
  double phase_offset = 0.0;

  static constexpr std::size_t kCount = 5;
  static constexpr std::array<std::string_view, kCount> kNames = {"k_min", "k_max", "beta",
                                                                  "duty", "phase_offset"};

  double get(std::size_t i) const;
  void set(std::size_t i, double value);
  /// Index of `name` in kNames; throws std::invalid_argument when unknown.
  static std::size_t index_of(std::string_view name);

  static GaitParams from(const GaitSchedule& gait);
  GaitSchedule apply(const GaitSchedule& base) const;

  bool operator==(const GaitParams&) const = default;
};

struct ParamBounds {
  GaitParams lower;
  GaitParams upper;

  /// Both ends equal to `point`.
  static ParamBounds fixed(const GaitParams& point);
  bool contains(const GaitParams& p) const;
  GaitParams clip(const GaitParams& p) const;
};

constexpr int kObjectiveCycles = 6;

/// Mean per-cycle displacement (m/cycle) over cycles 2..6 of a six-cycle run.
/// Returns std::nullopt when the parameters are invalid or the simulation fails.
std::optional<double> evaluate_objective(const GaitParams& params, const RobotConfig& config,
                                         const GaitSchedule& base, const SimSettings& settings,
                                         std::string* error = nullptr);

struct GridSpec {
  /// Values per parameter; an empty list keeps the base value.
  std::array<std::vector<double>, GaitParams::kCount> values;

  /// `steps` evenly spaced values of `name` in [from, to].
  static GridSpec linear(std::string_view name, double from, double to, int steps);
};

struct GridRow {
  GaitParams params;
  std::optional<double> objective;
  std::string error;
};

/// Exhaustive evaluation in row-major order (last parameter fastest).
std::vector<GridRow> sweep_grid(const GridSpec& grid, const RobotConfig& config,
                                const GaitSchedule& base, const SimSettings& settings,
                                unsigned workers = 0);

struct Evaluation {
  GaitParams params;
  std::optional<double> objective;
  int index = 0;
};

struct OptResult {
  GaitParams best_params;
  double best_objective = 0.0;
  std::vector<Evaluation> history;
  std::uint64_t seed = 0;
  int evaluations = 0;
};

/// Bounded Nelder-Mead in normalized coordinates with seeded random
/// restarts. The first simplex starts from the base schedule's parameters
/// when they lie inside `bounds`. Never exceeds `budget` evaluations.
/// Throws std::invalid_argument for budget < 10 and std::runtime_error
/// when every evaluation failed.
OptResult optimize_gait(const ParamBounds& bounds, int budget, std::uint64_t seed,
                        const RobotConfig& config, const GaitSchedule& base,
                        const SimSettings& settings);

}  // namespace swimmer
