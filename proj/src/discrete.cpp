#include "mml/discrete.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace mml {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Moment/update arithmetic from gradients already evaluated at state.point;
// y_sign = +1 ascends (descent-ascent), -1 descends (joint minimization).
AdamState stepped_with_grads(const AdamState& state, const Vec& g_x, const Vec& g_y,
                             const AdamParams& params, double y_sign) {
  AdamState next = state;
  if (state.diverged) return next;
  if (!g_x.allFinite() || !g_y.allFinite()) {
    next.diverged = true;
    next.point.x.setConstant(kInf);
    next.point.y.setConstant(kInf);
    ++next.n;
    return next;
  }

  const double beta = params.beta, rho = params.rho;
  next.m_x = beta * state.m_x + (1.0 - beta) * g_x;
  next.v_x = rho * state.v_x + (1.0 - rho) * g_x.cwiseProduct(g_x);
  next.m_y = beta * state.m_y + (1.0 - beta) * g_y;
  next.v_y = rho * state.v_y + (1.0 - rho) * g_y.cwiseProduct(g_y);

  // Bias corrections; 1 - beta^{n+1} > 0 for every beta in (-1,1).
  const double n1 = static_cast<double>(state.n + 1);
  const double bc_m = 1.0 - std::pow(beta, n1);
  const double bc_v = 1.0 - std::pow(rho, n1);
  assert(bc_m > 0.0 && bc_v > 0.0);

  // The stability offset eps sits inside the square root.
  for (Eigen::Index i = 0; i < next.point.x.size(); ++i) {
    const double mhat = next.m_x(i) / bc_m;
    const double vhat = next.v_x(i) / bc_v;
    next.point.x(i) = state.point.x(i) - params.h * mhat / std::sqrt(vhat + params.eps);
  }
  for (Eigen::Index j = 0; j < next.point.y.size(); ++j) {
    const double mhat = next.m_y(j) / bc_m;
    const double vhat = next.v_y(j) / bc_v;
    next.point.y(j) =
        state.point.y(j) + y_sign * params.h * mhat / std::sqrt(vhat + params.eps);
  }

  ++next.n;
  if (!next.point.all_finite()) next.diverged = true;
  return next;
}

RunResult run_loop(const ZeroSumGame& game, const AdamParams& params, const JointPoint& init,
                   long long max_steps, const StopRule& stop, double y_sign) {
  validate(params);
  if (max_steps < 1) throw std::invalid_argument("run: max_steps must be >= 1");

  const JointPoint ref =
      stop.reference ? *stop.reference : origin_like(init.d1(), init.d2());
  const double d0 = joint_distance(init, ref);

  RunResult out;
  Trajectory& traj = out.trajectory;
  traj.times.reserve(static_cast<std::size_t>(max_steps) + 1);

  AdamState state = AdamState::init(init);
  for (long long steps = 0;; ++steps) {
    const bool blown = state.diverged || !state.point.all_finite();
    Vec g_x, g_y;
    if (!blown) {
      g_x = game.grad_x(state.point);
      g_y = game.grad_y(state.point);
    }

    traj.times.push_back(static_cast<double>(state.n));
    traj.points.push_back(state.point);
    if (blown || !g_x.allFinite() || !g_y.allFinite()) {
      traj.grad_l1_sum.push_back(kInf);
      traj.dist_to_ref.push_back(blown ? kInf : joint_distance(state.point, ref));
      traj.truncated = true;
      break;
    }
    traj.grad_l1_sum.push_back(g_x.lpNorm<1>() + g_y.lpNorm<1>());
    const double d = joint_distance(state.point, ref);
    traj.dist_to_ref.push_back(d);

    if (joint_inf_norm(state.point) > stop.hard_cap) break;
    if (d0 > 0.0 && d >= stop.diverge_factor * d0) break;
    if (d <= stop.converge_tol) break;
    if (steps == max_steps) break;

    state = stepped_with_grads(state, g_x, g_y, params, y_sign);
  }

  out.verdict = classify(traj, stop);
  return out;
}

}  // namespace

AdamState AdamState::init(const JointPoint& start) {
  AdamState s;
  s.point = start;
  s.m_x = Vec::Zero(start.d1());
  s.v_x = Vec::Zero(start.d1());
  s.m_y = Vec::Zero(start.d2());
  s.v_y = Vec::Zero(start.d2());
  s.n = 0;
  return s;
}

AdamState adam_da_step(const AdamState& state, const ZeroSumGame& game,
                       const AdamParams& params) {
  if (state.diverged) return state;
  return stepped_with_grads(state, game.grad_x(state.point), game.grad_y(state.point), params,
                            +1.0);
}

AdamState adam_min_step(const AdamState& state, const ZeroSumGame& game,
                        const AdamParams& params) {
  if (state.diverged) return state;
  return stepped_with_grads(state, game.grad_x(state.point), game.grad_y(state.point), params,
                            -1.0);
}

JointPoint gda_step(const JointPoint& p, const ZeroSumGame& game, double h) {
  JointPoint next = p;
  next.x -= h * game.grad_x(p);
  next.y += h * game.grad_y(p);
  return next;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::Diverged: return "Diverged";
    case Verdict::Undecided: return "Undecided";
  }
  return "Undecided";
}

RunResult run_adam_da(const ZeroSumGame& game, const AdamParams& params,
                      const JointPoint& init, long long max_steps, const StopRule& stop) {
  return run_loop(game, params, init, max_steps, stop, +1.0);
}

RunResult run_adam_min(const ZeroSumGame& game, const AdamParams& params,
                       const JointPoint& init, long long max_steps, const StopRule& stop) {
  return run_loop(game, params, init, max_steps, stop, -1.0);
}

ConvergenceVerdict classify(const Trajectory& traj, const StopRule& stop) {
  ConvergenceVerdict v;
  if (traj.dist_to_ref.empty()) return v;

  const double d0 = traj.dist_to_ref.front();
  v.final_distance = traj.dist_to_ref.back();
  v.steps_used = static_cast<long long>(traj.size()) - 1;

  for (std::size_t k = 0; k < traj.dist_to_ref.size(); ++k) {
    const double d = traj.dist_to_ref[k];
    const bool blown = !std::isfinite(d) || joint_inf_norm(traj.points[k]) > stop.hard_cap;
    if (blown || (d0 > 0.0 && d >= stop.diverge_factor * d0 && k > 0)) {
      v.status = Verdict::Diverged;
      v.steps_used = static_cast<long long>(k);
      v.final_distance = d;
      break;
    }
    if (d <= stop.converge_tol) {
      v.status = Verdict::Converged;
      v.steps_used = static_cast<long long>(k);
      v.final_distance = d;
      break;
    }
  }

  // Trailing-window geometric rate: least squares slope of log d against the
  // sample index. Zero distance anywhere in the window means exact arrival.
  const std::size_t end =
      v.status == Verdict::Undecided ? traj.dist_to_ref.size()
                                     : static_cast<std::size_t>(v.steps_used) + 1;
  const std::size_t window = std::min<std::size_t>(static_cast<std::size_t>(stop.rate_window),
                                                   end > 0 ? end - 1 : 0);
  if (window >= 2) {
    const std::size_t begin = end - window;
    bool any_zero = false;
    bool usable = true;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const double d = traj.dist_to_ref[k];
      if (d == 0.0) { any_zero = true; break; }
      if (!(d > 0.0) || !std::isfinite(d)) { usable = false; break; }
      const double xk = static_cast<double>(k);
      const double yk = std::log(d);
      sx += xk; sy += yk; sxx += xk * xk; sxy += xk * yk;
    }
    if (any_zero) {
      v.fitted_rate = 0.0;
    } else if (usable) {
      const double nw = static_cast<double>(window);
      const double denom = nw * sxx - sx * sx;
      if (denom > 0.0) v.fitted_rate = std::exp((nw * sxy - sx * sy) / denom);
    }
  }
  return v;
}

}  // namespace mml
