#include "mml/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mml/catalog.hpp"
#include "mml/compare.hpp"
#include "mml/continuous.hpp"
#include "mml/csv.hpp"
#include "mml/discrete.hpp"
#include "mml/igr.hpp"
#include "mml/spectral.hpp"
#include "mml/svg.hpp"
#include "mml/sweep.hpp"
#include "mml/trajectory.hpp"

namespace mml {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// JSON artifacts are pretty-printed with a trailing newline; nlohmann keeps
// object keys sorted, so identical inputs give byte-identical files.
void write_json(const fs::path& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string game_label(const RunConfig& config) {
  return config.inline_game ? std::string("quadratic") : config.game_id;
}

JointPoint start_point(const RunConfig& config, const ZeroSumGame& game) {
  if (config.init.x.size() > 0 || config.init.y.size() > 0) return config.init;
  return default_sweep_init(game);
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * double(i) / double(count - 1);
  return out;
}

std::vector<double> default_heatmap_betas() { return linspace(-0.9, 0.9, 40); }

std::vector<double> default_heatmap_steps() {
  std::vector<double> h(40);
  for (int j = 0; j < 40; ++j) h[static_cast<std::size_t>(j)] = 0.0015 * double(j + 1);
  return h;
}

std::vector<double> default_eps_ladder() { return {1e-4, 4e-4, 1.6e-3, 6.4e-3}; }

// Geometric grid, ratio 2^(1/8): a factor-4 eps change moves the stability
// boundary exactly 8 cells when the threshold scales as sqrt(eps).
std::vector<double> default_eps_sweep_steps() {
  std::vector<double> h(40);
  for (int j = 0; j < 40; ++j)
    h[static_cast<std::size_t>(j)] = 0.004 * std::pow(2.0, double(j) / 8.0);
  return h;
}

std::vector<double> default_error_order_steps() { return {0.0025, 0.005, 0.01, 0.02}; }

void require_catalog_game(const RunConfig& config, const char* command) {
  if (config.inline_game)
    throw std::invalid_argument(std::string(command) +
                                ": grids run on catalog games only; use `game`, not [quadratic]");
}

json heatmap_summary(const HeatmapResult& result, const RunConfig& config) {
  long long converged = 0, diverged = 0, undecided = 0, failed = 0;
  for (const HeatmapCell& cell : result.cells) {
    if (!cell.error.empty()) {
      ++failed;
    } else if (cell.verdict == Verdict::Converged) {
      ++converged;
    } else if (cell.verdict == Verdict::Diverged) {
      ++diverged;
    } else {
      ++undecided;
    }
  }
  json j;
  j["command"] = command_name(config.command);
  j["game"] = result.game_id;
  j["mode"] = sweep_mode_name(result.mode);
  j["rows"] = result.primary_values.size();
  j["cols"] = result.h_values.size();
  j["cells_converged"] = converged;
  j["cells_diverged"] = diverged;
  j["cells_undecided"] = undecided;
  j["cells_failed"] = failed;
  return j;
}

void run_simulate(const RunConfig& config, const fs::path& dir) {
  const ZeroSumGame game = config_game(config);
  const JointPoint init = start_point(config, game);
  const RunResult rr = run_adam_da(game, config.params, init, config.steps);
  write_trajectory_csv(rr.trajectory, dir / "trajectory.csv", "step");

  json j;
  j["command"] = "simulate";
  j["game"] = game_label(config);
  j["verdict"] = verdict_name(rr.verdict.status);
  j["steps_used"] = rr.verdict.steps_used;
  j["final_distance"] = finite_or_null(rr.verdict.final_distance);
  j["fitted_rate"] =
      rr.verdict.fitted_rate ? finite_or_null(*rr.verdict.fitted_rate) : json(nullptr);
  j["truncated"] = rr.trajectory.truncated;
  write_json(dir / "summary.json", j);
}

void run_compare(const RunConfig& config, const fs::path& dir) {
  const ZeroSumGame game = config_game(config);
  const JointPoint init = start_point(config, game);
  const ModelComparison cmp = compare_models(game, config.params, init, config.steps);

  write_trajectory_csv(cmp.discrete, dir / "adam_da.csv", "step");
  write_trajectory_csv(cmp.adam_flow, dir / "adam_flow.csv", "time");
  write_trajectory_csv(cmp.sign_flow, dir / "sign_flow.csv", "time");

  CsvWriter dist({"step", "dist_adam_flow", "dist_sign_flow"});
  for (std::size_t n = 0; n < cmp.dist_adam_flow.size(); ++n)
    dist.row({format_int(static_cast<long long>(n)), format_double(cmp.dist_adam_flow[n]),
              format_double(cmp.dist_sign_flow[n])});
  dist.write(dir / "distances.csv");

  json j;
  j["command"] = "compare";
  j["game"] = game_label(config);
  j["steps"] = config.steps;
  j["truncated"] = cmp.truncated;
  j["final_dist_adam_flow"] =
      cmp.dist_adam_flow.empty() ? json(nullptr) : finite_or_null(cmp.dist_adam_flow.back());
  j["final_dist_sign_flow"] =
      cmp.dist_sign_flow.empty() ? json(nullptr) : finite_or_null(cmp.dist_sign_flow.back());

  if (config.random_init_count > 0) {
    const ComparisonSummary avg =
        compare_models_averaged(game, config.params, config.steps, config.random_init_count,
                                config.seed, config.box_low, config.box_high);
    if (avg.runs > 0) {
      CsvWriter mean({"step", "mean_dist_adam_flow", "mean_dist_sign_flow"});
      for (std::size_t n = 0; n < avg.mean_dist_adam_flow.size(); ++n)
        mean.row({format_int(static_cast<long long>(n)),
                  format_double(avg.mean_dist_adam_flow[n]),
                  format_double(avg.mean_dist_sign_flow[n])});
      mean.write(dir / "mean_distances.csv");
    }
    j["averaged_runs"] = avg.runs;
    j["averaged_truncated_runs"] = avg.truncated_runs;
  }
  write_json(dir / "summary.json", j);
}

void run_threshold(const RunConfig& config, const fs::path& dir) {
  const ZeroSumGame game = config_game(config);
  // Thresholds are local linearization statements; the default evaluation
  // point is the stationary point at the origin, not the simulation start.
  const JointPoint point = (config.init.x.size() > 0 || config.init.y.size() > 0)
                               ? config.init
                               : origin_like(game.d1, game.d2);
  const SpectralReport report = spectral_report(game, point, config.params);

  CsvWriter per({"lambda_re", "lambda_im", "bound_continuous", "bound_discrete"});
  for (const PerEigenBound& b : report.thresholds.per_eigen)
    per.row({format_double(b.lambda.real()), format_double(b.lambda.imag()),
             format_double(b.bound_continuous), format_double(b.bound_discrete)});
  per.write(dir / "per_eigen.csv");

  const ThresholdReport& t = report.thresholds;
  json j;
  j["command"] = "threshold";
  j["game"] = game_label(config);
  j["beta"] = config.params.beta;
  j["eps"] = config.params.eps;
  j["h_star_continuous"] =
      t.continuous_constrained ? json(t.h_star_continuous) : json(nullptr);
  j["h_star_discrete"] = t.discrete_constrained ? json(t.h_star_discrete) : json(nullptr);
  j["beta_lower"] = t.beta_lower ? json(*t.beta_lower) : json(nullptr);
  j["assumption_rotational"] = report.rotational_exists;
  j["assumption_generic"] = report.generic_condition;
  if (t.discrete_constrained && t.h_star_discrete == 0.0)
    j["note"] =
        "spectrum at the evaluation point is purely rotational; "
        "the recursion diverges from nearby points for every positive step size";
  write_json(dir / "summary.json", j);
}

void run_heatmap(const RunConfig& config, const fs::path& dir) {
  require_catalog_game(config, "heatmap");
  SweepGrid grid;
  grid.beta_values =
      config.beta_values.empty() ? default_heatmap_betas() : config.beta_values;
  grid.h_values = config.h_values.empty() ? default_heatmap_steps() : config.h_values;
  grid.mode = config.mode;
  grid.game_id = config.game_id;
  grid.fixed = config.params;
  grid.seed = config.seed;
  grid.max_steps = config.max_steps;

  const HeatmapResult result = heatmap(grid);
  atomic_write(dir / "heatmap.csv", heatmap_csv(result));
  if (config.emit_svg) write_heatmap_svg(result, dir / "heatmap.svg");
  write_json(dir / "summary.json", heatmap_summary(result, config));
}

void run_eps_sweep(const RunConfig& config, const fs::path& dir) {
  require_catalog_game(config, "eps-sweep");
  const std::vector<double> eps =
      config.eps_values.empty() ? default_eps_ladder() : config.eps_values;
  const std::vector<double> h =
      config.h_values.empty() ? default_eps_sweep_steps() : config.h_values;

  const HeatmapResult result = eps_sweep(config.game_id, config.params.beta, eps, h,
                                         config.mode, config.params, config.seed,
                                         config.max_steps);
  atomic_write(dir / "eps_sweep.csv", heatmap_csv(result));
  if (config.emit_svg) write_heatmap_svg(result, dir / "eps_sweep.svg");
  write_json(dir / "summary.json", heatmap_summary(result, config));
}

void run_error_order(const RunConfig& config, const fs::path& dir) {
  const ZeroSumGame game = config_game(config);
  // Config grids are ascending; the study wants coarse-to-fine.
  std::vector<double> h =
      config.h_values.empty() ? default_error_order_steps() : config.h_values;
  std::sort(h.begin(), h.end(), std::greater<double>());

  const ErrorOrderStudy study =
      error_order(game, config.params, h, config.fine_substeps, config.init);

  CsvWriter table({"h", "warmup", "err_adam_flow", "err_sign_flow"});
  for (std::size_t i = 0; i < study.h_values.size(); ++i)
    table.row({format_double(study.h_values[i]), format_int(study.warmup[i]),
               format_double(study.errors_adam_ode[i]),
               format_double(study.errors_sign_ode[i])});
  table.write(dir / "error_order.csv");

  json j;
  j["command"] = "error-order";
  j["game"] = game_label(config);
  j["fine_substeps"] = config.fine_substeps;
  j["slope_adam_flow"] = finite_or_null(study.slope_adam);
  j["slope_sign_flow"] = finite_or_null(study.slope_sign);
  j["r2_adam_flow"] = finite_or_null(study.r2_adam);
  j["r2_sign_flow"] = finite_or_null(study.r2_sign);
  j["excluded"] = study.excluded;
  write_json(dir / "summary.json", j);
}

void run_igr(const RunConfig& config, const fs::path& dir) {
  const ZeroSumGame game = config_game(config);
  const JointPoint init = start_point(config, game);
  const std::vector<double> betas =
      config.beta_values.empty() ? std::vector<double>{0.0, 0.5, 0.9} : config.beta_values;
  const std::vector<double> rhos =
      config.rho_values.empty() ? std::vector<double>{0.5, 0.9, 0.99} : config.rho_values;

  CsvWriter summary({"beta", "rho", "k", "final_avg_s"});
  for (std::size_t i = 0; i < betas.size(); ++i) {
    for (std::size_t j = 0; j < rhos.size(); ++j) {
      AdamParams cell = config.params;
      cell.beta = betas[i];
      cell.rho = rhos[j];
      validate(cell);
      const RunResult rr = run_adam_da(game, cell, init, config.steps);
      IgrSeries series = avg_grad_norm_series(rr.trajectory, game);
      series.params = cell;

      CsvWriter curve({"step", "avg_s"});
      for (std::size_t n = 0; n < series.steps.size(); ++n)
        curve.row({format_int(series.steps[n]), format_double(series.avg_s[n])});
      curve.write(dir / ("igr_cell_" + std::to_string(i) + "_" + std::to_string(j) + ".csv"));

      summary.row({format_double(cell.beta), format_double(cell.rho),
                   format_double(k_factor(cell.beta, cell.rho)),
                   format_double(series.avg_s.empty() ? 0.0 : series.avg_s.back())});
    }
  }
  summary.write(dir / "igr_summary.csv");

  json j;
  j["command"] = "igr";
  j["game"] = game_label(config);
  j["steps"] = config.steps;
  j["cells"] = betas.size() * rhos.size();
  write_json(dir / "summary.json", j);
}

}  // namespace

int run(const RunConfig& config) {
  const fs::path dir = config.output_dir;
  try {
    validate_config(config);
    if (config.command == Command::Selftest) return selftest(std::cout) == 0 ? 0 : 1;

    fs::create_directories(dir);
    switch (config.command) {
      case Command::Simulate:
        run_simulate(config, dir);
        break;
      case Command::Compare:
        run_compare(config, dir);
        break;
      case Command::Threshold:
        run_threshold(config, dir);
        break;
      case Command::Heatmap:
        run_heatmap(config, dir);
        break;
      case Command::EpsSweep:
        run_eps_sweep(config, dir);
        break;
      case Command::ErrorOrder:
        run_error_order(config, dir);
        break;
      case Command::Igr:
        run_igr(config, dir);
        break;
      case Command::Selftest:
        break;  // handled above
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    try {
      fs::create_directories(dir);
      json j;
      j["command"] = command_name(config.command);
      j["error"] = e.what();
      write_json(dir / "error.json", j);
    } catch (...) {
      // Leaving no error record is acceptable when the output dir itself
      // is unusable; the exit status still reports the failure.
    }
    return 1;
  }
}

}  // namespace mml
