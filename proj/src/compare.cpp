#include "mml/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mml/continuous.hpp"
#include "mml/csv.hpp"
#include "mml/discrete.hpp"
#include "mml/sweep.hpp"
#include "mml/threads.hpp"

namespace mml {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void record_sample(Trajectory& traj, double t, const JointPoint& p, const ZeroSumGame& game) {
  traj.times.push_back(t);
  traj.points.push_back(p);
  traj.grad_l1_sum.push_back(p.all_finite()
                                 ? game.grad_x(p).lpNorm<1>() + game.grad_y(p).lpNorm<1>()
                                 : std::numeric_limits<double>::infinity());
}

JointPoint default_init(const ZeroSumGame& game) {
  return JointPoint(Vec::Constant(game.d1, 0.6), Vec::Constant(game.d2, 0.6));
}

}  // namespace

ModelComparison compare_models(const ZeroSumGame& game, const AdamParams& params,
                               const JointPoint& init, long long steps) {
  validate(params);
  if (steps < 1) throw std::invalid_argument("compare_models: steps must be >= 1");
  if (init.d1() != game.d1 || init.d2() != game.d2) {
    throw std::invalid_argument("compare_models: init dimensions do not match game");
  }

  const OdeRhs adam_rhs = [&game, params](const JointPoint& p) {
    return rhs_continuous_adam_da(p, game, params);
  };
  const double eps = params.eps;
  const OdeRhs sign_rhs = [&game, eps](const JointPoint& p) {
    return rhs_sign_gda(p, game, eps);
  };
  const int substeps = 10;
  const double dt = params.h / substeps;

  ModelComparison cmp;
  AdamState state = AdamState::init(init);
  JointPoint p_adam = init;
  JointPoint p_sign = init;

  auto record_all = [&](long long n) {
    const double t = params.h * static_cast<double>(n);
    record_sample(cmp.discrete, static_cast<double>(n), state.point, game);
    record_sample(cmp.adam_flow, t, p_adam, game);
    record_sample(cmp.sign_flow, t, p_sign, game);
    cmp.dist_adam_flow.push_back(joint_distance(state.point, p_adam));
    cmp.dist_sign_flow.push_back(joint_distance(state.point, p_sign));
  };
  record_all(0);

  for (long long n = 1; n <= steps; ++n) {
    state = adam_da_step(state, game, params);
    for (int s = 0; s < substeps; ++s) p_adam = rk4_step(adam_rhs, p_adam, dt);
    for (int s = 0; s < substeps; ++s) p_sign = rk4_step(sign_rhs, p_sign, dt);
    if (state.diverged || !state.point.all_finite() || !p_adam.all_finite() ||
        !p_sign.all_finite()) {
      cmp.truncated = true;
      cmp.discrete.truncated = true;
      cmp.adam_flow.truncated = true;
      cmp.sign_flow.truncated = true;
      break;
    }
    record_all(n);
  }
  return cmp;
}

ComparisonSummary compare_models_averaged(const ZeroSumGame& game, const AdamParams& params,
                                          long long steps, int count, std::uint64_t seed,
                                          double box_low, double box_high) {
  const std::vector<JointPoint> inits =
      random_inits(seed, count, game.d1, game.d2, box_low, box_high);
  std::vector<ModelComparison> runs(inits.size());
  parallel_for(inits.size(), [&](std::size_t i) {
    runs[i] = compare_models(game, params, inits[i], steps);
  });

  ComparisonSummary summary;
  const std::size_t full_len = static_cast<std::size_t>(steps) + 1;
  summary.mean_dist_adam_flow.assign(full_len, 0.0);
  summary.mean_dist_sign_flow.assign(full_len, 0.0);
  for (const ModelComparison& run : runs) {
    if (run.truncated) {
      ++summary.truncated_runs;
      continue;
    }
    for (std::size_t n = 0; n < full_len; ++n) {
      summary.mean_dist_adam_flow[n] += run.dist_adam_flow[n];
      summary.mean_dist_sign_flow[n] += run.dist_sign_flow[n];
    }
    ++summary.runs;
  }
  if (summary.runs == 0) {
    summary.mean_dist_adam_flow.clear();
    summary.mean_dist_sign_flow.clear();
    return summary;
  }
  for (double& v : summary.mean_dist_adam_flow) v /= summary.runs;
  for (double& v : summary.mean_dist_sign_flow) v /= summary.runs;
  return summary;
}

long long warmup_steps(double h, double beta, double rho) {
  if (!(h > 0.0 && h < 1.0)) {
    throw std::invalid_argument("warmup_steps: h must lie in (0, 1)");
  }
  if (!(beta > -1.0 && beta < 1.0)) {
    throw std::invalid_argument("warmup_steps: beta must lie in (-1, 1)");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("warmup_steps: rho must lie in (0, 1)");
  }
  const double ln_h = std::log(h);
  const double beta_term =
      beta == 0.0 ? 0.0 : 2.0 * ln_h / std::log(std::abs(beta));
  const double rho_term = 2.0 * ln_h / std::log(rho);
  return static_cast<long long>(std::ceil(std::max(beta_term, rho_term)));
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need >= 2 matched points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.slope * x[i] + fit.intercept);
      ss_res += r * r;
    }
    fit.r2 = 1.0 - ss_res / syy;
  } else {
    fit.r2 = 1.0;  // constant y fitted exactly by slope 0
  }
  return fit;
}

ErrorOrderStudy error_order(const ZeroSumGame& game, const AdamParams& params_base,
                            const std::vector<double>& h_values, int fine_substeps,
                            const JointPoint& init) {
  if (h_values.size() < 2) {
    throw std::invalid_argument("error_order: need >= 2 h values");
  }
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (!(h_values[i] > 0.0 && h_values[i] < 1.0)) {
      throw std::invalid_argument("error_order: h values must lie in (0, 1)");
    }
    if (i > 0 && !(h_values[i] < h_values[i - 1])) {
      throw std::invalid_argument("error_order: h values must be strictly decreasing");
    }
  }
  if (!(h_values.front() >= 4.0 * h_values.back() * (1.0 - 1e-12))) {
    throw std::invalid_argument("error_order: h values must span at least a factor of 4");
  }
  if (fine_substeps < 50) {
    throw std::invalid_argument("error_order: fine_substeps must be >= 50");
  }

  const JointPoint start =
      (init.d1() == 0 && init.d2() == 0) ? default_init(game) : init;
  if (start.d1() != game.d1 || start.d2() != game.d2) {
    throw std::invalid_argument("error_order: init dimensions do not match game");
  }

  ErrorOrderStudy study;
  study.h_values = h_values;
  study.warmup.resize(h_values.size(), 0);
  study.errors_adam_ode.assign(h_values.size(), kNaN);
  study.errors_sign_ode.assign(h_values.size(), kNaN);

  // Anchor every run at a common post-warmup time. Anchoring each h at its
  // own warmup step would place the anchors at systematically different
  // points, and the drift of the local-error constant across those anchors
  // aliases into the fitted slope. T is the largest warmup time on the
  // ladder, so ceil(T/h) steps always satisfy the per-h warmup bound.
  double warm_time = 0.0;
  for (double h : h_values) {
    AdamParams params = params_base;
    params.h = h;
    validate(params);
    const double t = double(warmup_steps(h, params.beta, params.rho)) * h;
    if (t > warm_time) warm_time = t;
  }

  for (std::size_t i = 0; i < h_values.size(); ++i) {
    AdamParams params = params_base;
    params.h = h_values[i];
    const long long n0 = std::max(warmup_steps(params.h, params.beta, params.rho),
                                  static_cast<long long>(std::ceil(warm_time / params.h)));
    study.warmup[i] = n0;

    AdamState state = AdamState::init(start);
    JointPoint anchor;
    bool bad = false;
    for (long long n = 0; n < n0 + 1; ++n) {
      if (n == n0) anchor = state.point;
      state = adam_da_step(state, game, params);
      if (state.diverged || !state.point.all_finite()) {
        study.excluded.push_back("h=" + format_double(params.h) +
                                 ": recursion went non-finite at step " + format_int(n + 1));
        bad = true;
        break;
      }
    }
    if (bad) continue;
    const JointPoint target = state.point;

    const OdeRhs adam_rhs = [&game, params](const JointPoint& p) {
      return rhs_continuous_adam_da(p, game, params);
    };
    const double eps = params.eps;
    const OdeRhs sign_rhs = [&game, eps](const JointPoint& p) {
      return rhs_sign_gda(p, game, eps);
    };
    const double dt = params.h / fine_substeps;
    JointPoint end_adam = anchor;
    JointPoint end_sign = anchor;
    for (int s = 0; s < fine_substeps; ++s) end_adam = rk4_step(adam_rhs, end_adam, dt);
    for (int s = 0; s < fine_substeps; ++s) end_sign = rk4_step(sign_rhs, end_sign, dt);
    if (!end_adam.all_finite() || !end_sign.all_finite()) {
      study.excluded.push_back("h=" + format_double(params.h) +
                               ": flow integration went non-finite");
      continue;
    }
    study.errors_adam_ode[i] = joint_distance(end_adam, target);
    study.errors_sign_ode[i] = joint_distance(end_sign, target);
  }

  auto fit_loglog = [&](const std::vector<double>& errors, double& slope, double& r2) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (std::isfinite(errors[i]) && errors[i] > 0.0) {
        lx.push_back(std::log(h_values[i]));
        ly.push_back(std::log(errors[i]));
      }
    }
    if (lx.size() < 2) {
      slope = kNaN;
      r2 = kNaN;
      study.excluded.push_back("slope fit skipped: fewer than 2 usable error samples");
      return;
    }
    const LineFit fit = fit_line(lx, ly);
    slope = fit.slope;
    r2 = fit.r2;
  };
  fit_loglog(study.errors_adam_ode, study.slope_adam, study.r2_adam);
  fit_loglog(study.errors_sign_ode, study.slope_sign, study.r2_sign);
  return study;
}

}  // namespace mml
