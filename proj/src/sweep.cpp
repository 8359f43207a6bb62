#include "mml/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mml/catalog.hpp"
#include "mml/continuous.hpp"
#include "mml/csv.hpp"
#include "mml/rng.hpp"
#include "mml/spectral.hpp"
#include "mml/threads.hpp"

namespace mml {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_axis(const std::vector<double>& values, const char* name, bool positive) {
  if (values.empty()) {
    throw std::invalid_argument(std::string("sweep: ") + name + " grid must be nonempty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (positive && !(values[i] > 0.0)) {
      throw std::invalid_argument(std::string("sweep: ") + name + " values must be > 0");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw std::invalid_argument(std::string("sweep: ") + name +
                                  " grid must be strictly increasing");
    }
  }
}

struct CellOutcome {
  double rate = kNaN;
  Verdict verdict = Verdict::Undecided;
};

// RK4 on the adaptive flow with the discrete driver's early-stop rules; the
// recorded trajectory feeds the shared classifier.
CellOutcome run_flow_cell(const ZeroSumGame& game, const AdamParams& params,
                          long long max_steps) {
  const OdeRhs rhs = [&game, params](const JointPoint& p) {
    return rhs_continuous_adam_da(p, game, params);
  };
  const double dt = params.h / 10.0;
  const StopRule stop{};
  const JointPoint reference = origin_like(game.d1, game.d2);

  Trajectory traj;
  JointPoint p = default_sweep_init(game);
  double t = 0.0;
  auto record = [&](const JointPoint& q) {
    traj.times.push_back(t);
    traj.points.push_back(q);
    const bool finite = q.all_finite();
    traj.grad_l1_sum.push_back(
        finite ? game.grad_x(q).lpNorm<1>() + game.grad_y(q).lpNorm<1>()
               : std::numeric_limits<double>::infinity());
    traj.dist_to_ref.push_back(finite ? joint_distance(q, reference)
                                      : std::numeric_limits<double>::infinity());
  };
  record(p);
  const double d0 = traj.dist_to_ref.front();
  for (long long n = 0; n < max_steps; ++n) {
    p = rk4_step(rhs, p, dt);
    t = dt * static_cast<double>(n + 1);
    record(p);
    if (!p.all_finite()) {
      traj.truncated = true;
      break;
    }
    const double d = traj.dist_to_ref.back();
    if (joint_inf_norm(p) > stop.hard_cap) break;
    if (d0 > 0.0 && d >= stop.diverge_factor * d0) break;
    if (d <= stop.converge_tol) break;
  }

  const ConvergenceVerdict verdict = classify(traj, stop);
  CellOutcome out;
  out.verdict = verdict.status;
  out.rate = verdict.fitted_rate.value_or(kNaN);
  return out;
}

CellOutcome run_cell(const ZeroSumGame& game, const AdamParams& params, SweepMode mode,
                     long long max_steps) {
  CellOutcome out;
  switch (mode) {
    case SweepMode::ContinuousSpectral: {
      const Mat j = gda_jacobian(game, origin_like(game.d1, game.d2));
      out.rate = continuous_rate(eig(j), params);
      out.verdict = out.rate < 0.0   ? Verdict::Converged
                    : out.rate > 0.0 ? Verdict::Diverged
                                     : Verdict::Undecided;
      return out;
    }
    case SweepMode::ContinuousSimulated:
      return run_flow_cell(game, params, max_steps);
    case SweepMode::DiscreteSimulated: {
      const RunResult r = run_adam_da(game, params, default_sweep_init(game), max_steps);
      out.verdict = r.verdict.status;
      out.rate = r.verdict.fitted_rate.value_or(kNaN);
      return out;
    }
    case SweepMode::MinimizationSimulated: {
      const RunResult r = run_adam_min(game, params, default_sweep_init(game), max_steps);
      out.verdict = r.verdict.status;
      out.rate = r.verdict.fitted_rate.value_or(kNaN);
      return out;
    }
  }
  throw std::logic_error("run_cell: unhandled sweep mode");
}

HeatmapResult run_grid(SweepAxis axis, const std::vector<double>& primary_values,
                       const std::vector<double>& h_values, SweepMode mode,
                       const std::string& game_id, const AdamParams& fixed,
                       std::uint64_t seed, long long max_steps) {
  if (max_steps < 1) throw std::invalid_argument("sweep: max_steps must be >= 1");
  const ZeroSumGame game = catalog(game_id);

  // Every cell's parameter tuple must be admissible up front.
  for (double primary : primary_values) {
    for (double h : h_values) {
      AdamParams p = fixed;
      p.h = h;
      if (axis == SweepAxis::Beta) {
        p.beta = primary;
      } else {
        p.eps = primary;
      }
      validate(p);
    }
  }

  HeatmapResult result;
  result.axis = axis;
  result.primary_values = primary_values;
  result.h_values = h_values;
  result.mode = mode;
  result.game_id = game_id;
  result.fixed = fixed;
  result.seed = seed;
  result.cells.resize(primary_values.size() * h_values.size());

  const std::size_t h_count = h_values.size();
  parallel_for(result.cells.size(), [&](std::size_t idx) {
    const std::size_t i = idx / h_count;
    const std::size_t j = idx % h_count;
    HeatmapCell& cell = result.cells[idx];
    cell.primary = primary_values[i];
    cell.h = h_values[j];
    AdamParams p = fixed;
    p.h = cell.h;
    if (axis == SweepAxis::Beta) {
      p.beta = cell.primary;
    } else {
      p.eps = cell.primary;
    }
    try {
      const CellOutcome outcome = run_cell(game, p, mode, max_steps);
      cell.rate = outcome.rate;
      cell.verdict = outcome.verdict;
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.rate = kNaN;
      cell.verdict = Verdict::Undecided;
    }
  });
  return result;
}

}  // namespace

const char* sweep_mode_name(SweepMode m) {
  switch (m) {
    case SweepMode::ContinuousSpectral: return "ContinuousSpectral";
    case SweepMode::ContinuousSimulated: return "ContinuousSimulated";
    case SweepMode::DiscreteSimulated: return "DiscreteSimulated";
    case SweepMode::MinimizationSimulated: return "MinimizationSimulated";
  }
  return "?";
}

SweepMode parse_sweep_mode(const std::string& name) {
  for (SweepMode m : {SweepMode::ContinuousSpectral, SweepMode::ContinuousSimulated,
                      SweepMode::DiscreteSimulated, SweepMode::MinimizationSimulated}) {
    if (name == sweep_mode_name(m)) return m;
  }
  throw std::invalid_argument(
      "unknown sweep mode '" + name +
      "'; valid: ContinuousSpectral, ContinuousSimulated, DiscreteSimulated, "
      "MinimizationSimulated");
}

JointPoint default_sweep_init(const ZeroSumGame& game) {
  return JointPoint(Vec::Constant(game.d1, 0.6), Vec::Constant(game.d2, 0.6));
}

HeatmapResult heatmap(const SweepGrid& grid) {
  require_axis(grid.beta_values, "beta", false);
  require_axis(grid.h_values, "h", true);
  return run_grid(SweepAxis::Beta, grid.beta_values, grid.h_values, grid.mode, grid.game_id,
                  grid.fixed, grid.seed, grid.max_steps);
}

HeatmapResult eps_sweep(const std::string& game_id, double beta_fixed,
                        const std::vector<double>& eps_values,
                        const std::vector<double>& h_values, SweepMode mode,
                        const AdamParams& fixed, std::uint64_t seed, long long max_steps) {
  require_axis(eps_values, "eps", true);
  require_axis(h_values, "h", true);
  AdamParams with_beta = fixed;
  with_beta.beta = beta_fixed;
  return run_grid(SweepAxis::Eps, eps_values, h_values, mode, game_id, with_beta, seed,
                  max_steps);
}

std::string heatmap_csv(const HeatmapResult& result) {
  const char* primary = result.axis == SweepAxis::Beta ? "beta" : "eps";
  CsvWriter csv({primary, "h", "rate", "verdict"});
  for (const HeatmapCell& cell : result.cells) {
    csv.row({format_double(cell.primary), format_double(cell.h), format_double(cell.rate),
             cell.error.empty() ? verdict_name(cell.verdict) : "Failed"});
  }
  return csv.content();
}

std::vector<int> convergence_boundary(const HeatmapResult& result) {
  std::vector<int> boundary(result.primary_values.size(), -1);
  for (std::size_t i = 0; i < result.primary_values.size(); ++i) {
    for (std::size_t j = 0; j < result.h_values.size(); ++j) {
      const HeatmapCell& cell = result.cell(i, j);
      if (cell.error.empty() && cell.verdict == Verdict::Converged) {
        boundary[i] = static_cast<int>(j);
      }
    }
  }
  return boundary;
}

std::vector<JointPoint> random_inits(std::uint64_t seed, int count, Eigen::Index d1,
                                     Eigen::Index d2, double box_low, double box_high) {
  if (count < 1) throw std::invalid_argument("random_inits: count must be >= 1");
  if (d1 < 0 || d2 < 0 || d1 + d2 < 1) {
    throw std::invalid_argument("random_inits: dimensions must be nonnegative, d1+d2 >= 1");
  }
  if (!(box_low <= box_high)) {
    throw std::invalid_argument("random_inits: degenerate box (low > high)");
  }
  std::mt19937_64 rng = make_rng(seed);
  std::vector<JointPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    JointPoint p{Vec(d1), Vec(d2)};
    for (Eigen::Index i = 0; i < d1; ++i) p.x(i) = uniform(rng, box_low, box_high);
    for (Eigen::Index i = 0; i < d2; ++i) p.y(i) = uniform(rng, box_low, box_high);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mml
