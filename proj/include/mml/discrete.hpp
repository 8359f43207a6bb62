#pragma once

// Discrete-time steppers: the adaptive descent-ascent recursion (x descends,
// y ascends, both from gradients at the same incoming iterate), its joint
// minimization variant, plain gradient descent-ascent, and trajectory
// convergence classification.

#include <optional>

#include "mml/game.hpp"
#include "mml/linalg.hpp"
#include "mml/params.hpp"
#include "mml/trajectory.hpp"

namespace mml {

// Moment state. At n = 0 all moments are zero; v_x, v_y stay componentwise
// nonnegative (convex combinations of squares).
struct AdamState {
  Vec m_x, v_x;      // x-player first/second moments
  Vec m_y, v_y;      // y-player first/second moments
  JointPoint point;
  long long n = 0;   // completed steps
  bool diverged = false;  // set when a non-finite gradient or iterate appears

  static AdamState init(const JointPoint& start);
};

// One simultaneous update:
//   m <- beta*m + (1-beta)*g,  v <- rho*v + (1-rho)*g.^2  (per player)
//   x <- x - h * (m/(1-beta^{n+1})) ./ sqrt(v/(1-rho^{n+1}) + eps)
//   y <- y + h * (m/(1-beta^{n+1})) ./ sqrt(v/(1-rho^{n+1}) + eps)
// The stability offset eps sits inside the square root; this differs from
// the common convention (offset outside) and shifts every step-size
// threshold in this library by the sqrt(eps) factor.
// Non-finite gradients flag the state diverged instead of throwing, so
// parameter sweeps can classify blow-ups.
AdamState adam_da_step(const AdamState& state, const ZeroSumGame& game,
                       const AdamParams& params);

// Same recursion with the y-update sign flipped to descent: minimizes the
// game value jointly over (x, y).
AdamState adam_min_step(const AdamState& state, const ZeroSumGame& game,
                        const AdamParams& params);

// x <- x - h*grad_x, y <- y + h*grad_y.
JointPoint gda_step(const JointPoint& p, const ZeroSumGame& game, double h);

enum class Verdict { Converged, Diverged, Undecided };

const char* verdict_name(Verdict v);

struct ConvergenceVerdict {
  Verdict status = Verdict::Undecided;
  long long steps_used = 0;
  double final_distance = 0.0;
  // Per-step geometric contraction factor, least squares on log distance
  // over the trailing window; absent when distances were non-positive or the
  // window was empty. Exact arrival (zero distance in window) reports 0.
  std::optional<double> fitted_rate;
};

struct StopRule {
  double converge_tol = 1e-8;
  double diverge_factor = 10.0;
  double hard_cap = 1e8;          // |z|_inf beyond this is an immediate Diverged
  int rate_window = 200;
  std::optional<JointPoint> reference;  // defaults to the origin
};

// Runs the descent-ascent recursion for at most max_steps, recording every
// iterate, the plain l1 gradient-norm sum, and the distance to the
// reference. Stops early on a Converged/Diverged verdict.
struct RunResult {
  Trajectory trajectory;
  ConvergenceVerdict verdict;
};

RunResult run_adam_da(const ZeroSumGame& game, const AdamParams& params,
                      const JointPoint& init, long long max_steps, const StopRule& stop = {});

// Same driver for the joint-minimization stepper.
RunResult run_adam_min(const ZeroSumGame& game, const AdamParams& params,
                       const JointPoint& init, long long max_steps, const StopRule& stop = {});

// Classification of an existing distance series against the stop rule;
// distances are to the rule's reference (already baked into the trajectory).
ConvergenceVerdict classify(const Trajectory& traj, const StopRule& stop);

}  // namespace mml
