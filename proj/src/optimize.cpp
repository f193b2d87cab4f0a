#include "swimmer/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "swimmer/errors.hpp"
#include "swimmer/experiments.hpp"
#include "swimmer/parallel.hpp"

namespace swimmer {

double GaitParams::get(std::size_t i) const {
  switch (i) {
    case 0: return k_min;
    case 1: return k_max;
    case 2: return beta;
    case 3: return duty;
    case 4: return phase_offset;
  }
  throw std::out_of_range("gait parameter index");
}

void GaitParams::set(std::size_t i, double value) {
  switch (i) {
    case 0: k_min = value; return;
    case 1: k_max = value; return;
    case 2: beta = value; return;
    case 3: duty = value; return;
    case 4: phase_offset = value; return;
  }
  throw std::out_of_range("gait parameter index");
}

std::size_t GaitParams::index_of(std::string_view name) {
  for (std::size_t i = 0; i < kCount; ++i)
    if (kNames[i] == name) return i;
  throw std::invalid_argument("unknown gait parameter '" + std::string(name) + "'");
}

GaitParams GaitParams::from(const GaitSchedule& gait) {
  return {gait.k_min, gait.k_max, gait.beta, gait.duty, gait.phase_offset};
}

GaitSchedule GaitParams::apply(const GaitSchedule& base) const {
  GaitSchedule gait = base;
  gait.k_min = k_min;
  gait.k_max = k_max;
  gait.beta = beta;
  gait.duty = duty;
  gait.phase_offset = phase_offset;
  return gait;
}

ParamBounds ParamBounds::fixed(const GaitParams& point) { return {point, point}; }

bool ParamBounds::contains(const GaitParams& p) const {
  for (std::size_t i = 0; i < GaitParams::kCount; ++i)
    if (p.get(i) < lower.get(i) || p.get(i) > upper.get(i)) return false;
  return true;
}

GaitParams ParamBounds::clip(const GaitParams& p) const {
  GaitParams out = p;
  for (std::size_t i = 0; i < GaitParams::kCount; ++i)
    out.set(i, std::clamp(p.get(i), lower.get(i), upper.get(i)));
  return out;
}

std::optional<double> evaluate_objective(const GaitParams& params, const RobotConfig& config,
                                         const GaitSchedule& base, const SimSettings& settings,
                                         std::string* error) {
  try {
    const GaitSchedule gait = params.apply(base);
    validate_gait(gait);
    const Trajectory traj = simulate(config, gait, kObjectiveCycles, settings);
    const double value = displacement_per_cycle(traj).mean;
    if (!std::isfinite(value)) throw NumericalError("objective is not finite");
    return value;
  } catch (const std::exception& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

GridSpec GridSpec::linear(std::string_view name, double from, double to, int steps) {
  if (steps < 1) throw std::invalid_argument("grid needs at least one step");
  GridSpec grid;
  auto& values = grid.values[GaitParams::index_of(name)];
  for (int i = 0; i < steps; ++i) {
    if (steps == 1) values.push_back(from);
    else if (i == steps - 1) values.push_back(to);
    else values.push_back(from + (to - from) * i / (steps - 1));
  }
  return grid;
}

std::vector<GridRow> sweep_grid(const GridSpec& grid, const RobotConfig& config,
                                const GaitSchedule& base, const SimSettings& settings,
                                unsigned workers) {
  const GaitParams origin = GaitParams::from(base);
  std::vector<GaitParams> points{origin};
  for (std::size_t i = 0; i < GaitParams::kCount; ++i) {
    if (grid.values[i].empty()) continue;
    std::vector<GaitParams> next;
    next.reserve(points.size() * grid.values[i].size());
    for (const auto& p : points) {
      for (double v : grid.values[i]) {
        GaitParams q = p;
        q.set(i, v);
        next.push_back(q);
      }
    }
    points = std::move(next);
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return parallel_map(
      points.size(),
      [&](std::size_t i) {
        GridRow row{points[i], std::nullopt, {}};
        row.objective = evaluate_objective(points[i], config, base, settings, &row.error);
        return row;
      },
      workers);
}

namespace {

struct BudgetExhausted {};

// Maps the free parameters to the unit cube; stiffnesses on a log scale.
class Search {
 public:
  Search(const ParamBounds& bounds, int budget, const RobotConfig& config,
         const GaitSchedule& base, const SimSettings& settings, OptResult& result)
      : bounds_(bounds), budget_(budget), config_(config), base_(base), settings_(settings),
        result_(result) {
    for (std::size_t i = 0; i < GaitParams::kCount; ++i)
      if (bounds.upper.get(i) > bounds.lower.get(i)) free_.push_back(i);
  }

  std::size_t dims() const { return free_.size(); }

  GaitParams to_params(const std::vector<double>& u) const {
    GaitParams p = bounds_.lower;
    for (std::size_t d = 0; d < free_.size(); ++d) {
      const std::size_t i = free_[d];
      const double lo = bounds_.lower.get(i);
      const double hi = bounds_.upper.get(i);
      const double x = std::clamp(u[d], 0.0, 1.0);
      p.set(i, log_scaled(i) ? lo * std::pow(hi / lo, x) : lo + (hi - lo) * x);
    }
    return bounds_.clip(p);
  }

  std::vector<double> to_unit(const GaitParams& p) const {
    std::vector<double> u(free_.size());
    for (std::size_t d = 0; d < free_.size(); ++d) {
      const std::size_t i = free_[d];
      const double lo = bounds_.lower.get(i);
      const double hi = bounds_.upper.get(i);
      u[d] = log_scaled(i) ? std::log(p.get(i) / lo) / std::log(hi / lo)
                           : (p.get(i) - lo) / (hi - lo);
    }
    return u;
  }

  /// Cost (negated objective) of each point, evaluated concurrently and
  /// recorded in submission order. Throws BudgetExhausted when the budget
  /// runs out before all points were evaluated.
  std::vector<double> costs(const std::vector<std::vector<double>>& points) {
    const std::size_t remaining = static_cast<std::size_t>(budget_ - result_.evaluations);
    const std::size_t n = std::min(points.size(), remaining);
    std::vector<GaitParams> params;
    for (std::size_t k = 0; k < n; ++k) {
      params.push_back(to_params(points[k]));
      if (!bounds_.contains(params.back()))
        throw std::logic_error("optimizer proposed a point outside the bounds");
    }
    const auto values = parallel_map(n, [&](std::size_t k) {
      return evaluate_objective(params[k], config_, base_, settings_);
    });
    std::vector<double> out;
    for (std::size_t k = 0; k < n; ++k) {
      result_.history.push_back({params[k], values[k], result_.evaluations});
      ++result_.evaluations;
      if (values[k] && (!have_best_ || *values[k] > result_.best_objective)) {
        have_best_ = true;
        result_.best_objective = *values[k];
        result_.best_params = params[k];
      }
      out.push_back(values[k] ? -*values[k] : std::numeric_limits<double>::infinity());
    }
    if (n < points.size()) throw BudgetExhausted{};
    return out;
  }

  double cost(const std::vector<double>& u) { return costs({u}).front(); }

  bool have_best() const { return have_best_; }

 private:
  bool log_scaled(std::size_t i) const {
    return i <= 1 && bounds_.lower.get(i) > 0.0;  // k_min, k_max
  }

  const ParamBounds& bounds_;
  int budget_;
  const RobotConfig& config_;
  const GaitSchedule& base_;
  const SimSettings& settings_;
  OptResult& result_;
  std::vector<std::size_t> free_;
  bool have_best_ = false;
};

using Point = std::vector<double>;

Point clamp_unit(Point p) {
  for (double& x : p) x = std::clamp(x, 0.0, 1.0);
  return p;
}

Point affine(const Point& a, const Point& b, double t) {  // a + t (b - a)
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return clamp_unit(out);
}

constexpr double kInitialStep = 0.2;
constexpr double kSimplexTolerance = 1e-3;

void nelder_mead(Search& search, const Point& start) {
  const std::size_t d = search.dims();
  std::vector<Point> simplex{clamp_unit(start)};
  for (std::size_t i = 0; i < d; ++i) {
    Point p = simplex.front();
    p[i] += p[i] + kInitialStep <= 1.0 ? kInitialStep : -kInitialStep;
    simplex.push_back(p);
  }
  std::vector<double> cost = search.costs(simplex);

  for (;;) {
    std::vector<std::size_t> order(d + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[d - 1];

    double diameter = 0.0;
    for (const auto& p : simplex)
      for (std::size_t i = 0; i < d; ++i)
        diameter = std::max(diameter, std::abs(p[i] - simplex[best][i]));
    if (diameter < kSimplexTolerance) return;

    Point centroid(d, 0.0);
    for (std::size_t k = 0; k <= d; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k][i] / d;
    }

    const Point reflected = affine(centroid, simplex[worst], -1.0);
    const double reflected_cost = search.cost(reflected);
    if (reflected_cost < cost[best]) {
      const Point expanded = affine(centroid, simplex[worst], -2.0);
      const double expanded_cost = search.cost(expanded);
      if (expanded_cost < reflected_cost) {
        simplex[worst] = expanded;
        cost[worst] = expanded_cost;
      } else {
        simplex[worst] = reflected;
        cost[worst] = reflected_cost;
      }
      continue;
    }
    if (reflected_cost < cost[second]) {
      simplex[worst] = reflected;
      cost[worst] = reflected_cost;
      continue;
    }
    const bool outside = reflected_cost < cost[worst];
    const Point contracted =
        outside ? affine(centroid, reflected, 0.5) : affine(centroid, simplex[worst], 0.5);
    const double contracted_cost = search.cost(contracted);
    if (contracted_cost < std::min(cost[worst], reflected_cost)) {
      simplex[worst] = contracted;
      cost[worst] = contracted_cost;
      continue;
    }
    std::vector<Point> shrunk;
    std::vector<std::size_t> which;
    for (std::size_t k = 0; k <= d; ++k) {
      if (k == best) continue;
      shrunk.push_back(affine(simplex[best], simplex[k], 0.5));
      which.push_back(k);
    }
    const auto shrunk_cost = search.costs(shrunk);
    for (std::size_t m = 0; m < which.size(); ++m) {
      simplex[which[m]] = shrunk[m];
      cost[which[m]] = shrunk_cost[m];
    }
  }
}

}  // namespace

OptResult optimize_gait(const ParamBounds& bounds, int budget, std::uint64_t seed,
                        const RobotConfig& config, const GaitSchedule& base,
                        const SimSettings& settings) {
  if (budget < 10) throw std::invalid_argument("optimize_gait: budget must be >= 10");
  for (std::size_t i = 0; i < GaitParams::kCount; ++i) {
    if (!(bounds.lower.get(i) <= bounds.upper.get(i)))
      throw ConfigError(std::string("bounds.") + std::string(GaitParams::kNames[i]),
                        "lower bound exceeds upper bound");
  }

  OptResult result;
  result.seed = seed;
  Search search(bounds, budget, config, base, settings, result);

  try {
    if (search.dims() == 0) {
      search.cost({});
    } else {
      const GaitParams start = GaitParams::from(base);
      Point first = bounds.contains(start) ? search.to_unit(start)
                                           : Point(search.dims(), 0.5);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (;;) {
        nelder_mead(search, first);
        for (double& x : first) x = unit(rng);
      }
    }
  } catch (const BudgetExhausted&) {
  }

  if (!search.have_best()) throw std::runtime_error("optimize_gait: every evaluation failed");
  return result;
}

}  // namespace swimmer
