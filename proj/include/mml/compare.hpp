#pragma once

// Side-by-side runs of the discrete recursion against its two continuous
// models, and the local-error order study that separates them: the adaptive
// flow tracks iterates to third order in h (after the moment warmup), the
// sign flow only to second.

#include <cstdint>
#include <string>
#include <vector>

#include "mml/game.hpp"
#include "mml/linalg.hpp"
#include "mml/params.hpp"
#include "mml/trajectory.hpp"

namespace mml {

struct ModelComparison {
  Trajectory discrete;   // recursion iterates, times are step counts
  Trajectory adam_flow;  // adaptive flow sampled at t_n = n h
  Trajectory sign_flow;  // sign flow sampled at t_n = n h
  std::vector<double> dist_adam_flow;  // |discrete_n - adam_flow(t_n)|_2
  std::vector<double> dist_sign_flow;
  bool truncated = false;  // a model went non-finite; series cut to match
};

// Runs all three models from the same start. The flows use RK4 with 10
// substeps per discrete step (dt = h/10), sampled at the step times.
ModelComparison compare_models(const ZeroSumGame& game, const AdamParams& params,
                               const JointPoint& init, long long steps);

struct ComparisonSummary {
  std::vector<double> mean_dist_adam_flow;  // index n, mean over surviving runs
  std::vector<double> mean_dist_sign_flow;
  int runs = 0;            // runs included in the means
  int truncated_runs = 0;  // runs excluded for going non-finite
};

// compare_models averaged over `count` random starts uniform in
// [box_low, box_high]^(d1+d2); truncated runs are excluded from the means.
ComparisonSummary compare_models_averaged(const ZeroSumGame& game, const AdamParams& params,
                                          long long steps, int count, std::uint64_t seed,
                                          double box_low, double box_high);

// Moment warmup ceil(max{2 ln h / ln|beta|, 2 ln h / ln rho}) for h in
// (0, 1); the beta contribution is 0 at beta = 0 (one-step memory).
long long warmup_steps(double h, double beta, double rho);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope*x + intercept with coefficient of
// determination; needs >= 2 points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ErrorOrderStudy {
  std::vector<double> h_values;   // as supplied, decreasing
  std::vector<long long> warmup;  // per-h warmup step counts
  std::vector<double> errors_adam_ode;  // local error per h; NaN when excluded
  std::vector<double> errors_sign_ode;
  double slope_adam = 0.0;  // least squares on (ln h, ln error)
  double slope_sign = 0.0;
  double r2_adam = 0.0;
  double r2_sign = 0.0;
  std::vector<std::string> excluded;  // one report per dropped h
};

// Local-error order probe. Per h: run the recursion to its anchor step n0,
// start both flows at iterate n0, integrate each for duration h with
// fine_substeps RK4 substeps, and measure the distance to iterate n0+1.
// n0 = max(warmup_steps(h), ceil(T/h)) with T the largest warmup time on
// the ladder: every anchor is past its own moment warmup AND all anchors
// sit at a common trajectory time, so the local-error constant is the same
// across the ladder and the fit measures the order, not anchor drift.
// Slopes are fitted over the h values that stayed finite.
// Pre: h values in (0, 1) spanning >= a factor of 4, fine_substeps >= 50.
// An empty init defaults to every coordinate 0.6.
ErrorOrderStudy error_order(const ZeroSumGame& game, const AdamParams& params_base,
                            const std::vector<double>& h_values, int fine_substeps,
                            const JointPoint& init = {});

}  // namespace mml
