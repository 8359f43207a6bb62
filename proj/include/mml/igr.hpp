#pragma once

// Implicit-regularization diagnostics of the adaptive descent-ascent
// stepper: the K(beta, rho) weight, the per-player forcing terms it scales,
// cumulative-average gradient-norm series over trajectories, and an
// interaction-dominance report.

#include <vector>

#include "mml/continuous.hpp"
#include "mml/game.hpp"
#include "mml/linalg.hpp"
#include "mml/params.hpp"
#include "mml/trajectory.hpp"

namespace mml {

// -(h/2) K(beta, rho) * hess_xx * mu .* grad_x: the descent forcing the
// stepper implicitly adds for the x player. Zero at stationary points and
// whenever beta == rho.
Vec igr_x_term(const ZeroSumGame& game, const JointPoint& point, const AdamParams& params);

// +(h/2) K(beta, rho) * hess_yx * mu .* grad_x: the ascent forcing for the
// y player. Componentwise equal to (h/2) K grad_of_gradnorm(yx).
Vec igr_y_term(const ZeroSumGame& game, const JointPoint& point, const AdamParams& params);

struct IgrSeries {
  std::vector<long long> steps;  // 1-based sample index
  std::vector<double> avg_s;     // running mean of |grad_x|_1 + |grad_y|_1
  AdamParams params;             // run label, set by the caller
};

// Cumulative average of the plain l1 gradient-norm sum over every trajectory
// sample. avg_s[t] obeys the running mean ((t-1) avg_s[t-1] + inst_t) / t.
IgrSeries avg_grad_norm_series(const Trajectory& trajectory, const ZeroSumGame& game);

struct IgrDominance {
  double x_term_norm = 0.0;  // 2-norm of igr_x_term
  double y_term_norm = 0.0;  // 2-norm of igr_y_term
  double hess_xx_opnorm = 0.0;
  double hess_yx_opnorm = 0.0;
  double hess_yy_opnorm = 0.0;
  double factor = 2.0;
  bool interaction_dominated = false;
};

// Interaction dominance at a point: the cross block out-scales both diagonal
// blocks combined, |hess_yx|_2 > factor * (|hess_xx|_2 + |hess_yy|_2).
IgrDominance igr_dominance_report(const ZeroSumGame& game, const JointPoint& point,
                                  const AdamParams& params, double factor = 2.0);

}  // namespace mml
