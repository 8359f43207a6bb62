#include "mml/continuous.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mml {

double k_factor(double beta, double rho) {
  return (1.0 + beta) / (1.0 - beta) - (1.0 + rho) / (1.0 - rho);
}

OdeCoefficients ode_coefficients(const ZeroSumGame& game, const JointPoint& p,
                                 const AdamParams& params) {
  validate_flow(params);
  OdeCoefficients c;
  c.mu = mu_eps(game, p, params.eps);
  c.nu = nu_eps(game, p, params.eps);
  c.k = k_factor(params.beta, params.rho);
  const double rho_ratio = (1.0 + params.rho) / (1.0 - params.rho);
  c.m_mu = (c.k + (params.eps * rho_ratio) * c.mu.array().square()).matrix();
  c.m_nu = (c.k + (params.eps * rho_ratio) * c.nu.array().square()).matrix();
  return c;
}

Vec rhs_continuous_adam_da(const JointPoint& p, const ZeroSumGame& game,
                           const AdamParams& params) {
  const OdeCoefficients c = ode_coefficients(game, p, params);
  const Vec g_x = game.grad_x(p);
  const Vec g_y = game.grad_y(p);

  // Gradients of |grad_x f|_{1,eps} - |grad_y f|_{1,eps} in each block.
  const Vec dx_norm = grad_of_gradnorm(game, p, params.eps, GradNormKind::xx) -
                      grad_of_gradnorm(game, p, params.eps, GradNormKind::xy);
  const Vec dy_norm = grad_of_gradnorm(game, p, params.eps, GradNormKind::yx) -
                      grad_of_gradnorm(game, p, params.eps, GradNormKind::yy);

  const double half_h = 0.5 * params.h;
  Vec out(p.d1() + p.d2());
  out.head(p.d1()) =
      -c.mu.cwiseProduct(g_x + half_h * c.m_mu.cwiseProduct(dx_norm));
  out.tail(p.d2()) =
      c.nu.cwiseProduct(g_y + half_h * c.m_nu.cwiseProduct(dy_norm));
  return out;
}

Vec rhs_sign_gda(const JointPoint& p, const ZeroSumGame& game, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("rhs_sign_gda: eps must be > 0");
  Vec out(p.d1() + p.d2());
  out.head(p.d1()) = -mu_eps(game, p, eps).cwiseProduct(game.grad_x(p));
  out.tail(p.d2()) = nu_eps(game, p, eps).cwiseProduct(game.grad_y(p));
  return out;
}

Vec rhs_gda(const JointPoint& p, const ZeroSumGame& game) {
  Vec out(p.d1() + p.d2());
  out.head(p.d1()) = -game.grad_x(p);
  out.tail(p.d2()) = game.grad_y(p);
  return out;
}

Vec rhs_limit_eps(const JointPoint& p, const ZeroSumGame& game, const AdamParams& params,
                  double eps_reg) {
  if (!(eps_reg > 0.0)) throw std::invalid_argument("rhs_limit_eps: eps_reg must be > 0");
  AdamParams reg = params;
  reg.eps = eps_reg;
  validate_flow(reg);

  const Vec mu = mu_eps(game, p, eps_reg);
  const Vec nu = nu_eps(game, p, eps_reg);
  const Vec g_x = game.grad_x(p);
  const Vec g_y = game.grad_y(p);
  const double k = k_factor(params.beta, params.rho);

  Vec out(p.d1() + p.d2());
  if (k == 0.0) {
    // K = 0 kills the correction exactly; identical arithmetic to the sign flow.
    out.head(p.d1()) = -mu.cwiseProduct(g_x);
    out.tail(p.d2()) = nu.cwiseProduct(g_y);
    return out;
  }

  const Vec dx_norm = grad_of_gradnorm(game, p, eps_reg, GradNormKind::xx) -
                      grad_of_gradnorm(game, p, eps_reg, GradNormKind::xy);
  const Vec dy_norm = grad_of_gradnorm(game, p, eps_reg, GradNormKind::yx) -
                      grad_of_gradnorm(game, p, eps_reg, GradNormKind::yy);
  const double half_hk = 0.5 * params.h * k;
  out.head(p.d1()) = -mu.cwiseProduct(g_x + half_hk * dx_norm);
  out.tail(p.d2()) = nu.cwiseProduct(g_y + half_hk * dy_norm);
  return out;
}

JointPoint rk4_step(const OdeRhs& rhs, const JointPoint& state, double dt) {
  const Eigen::Index d1 = state.d1();
  const Vec z = to_joint(state);
  const Vec k1 = rhs(state);
  const Vec k2 = rhs(from_joint(z + 0.5 * dt * k1, d1));
  const Vec k3 = rhs(from_joint(z + 0.5 * dt * k2, d1));
  const Vec k4 = rhs(from_joint(z + dt * k3, d1));
  return from_joint(z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), d1);
}

Trajectory rk4_integrate(const OdeRhs& rhs, const JointPoint& init, double dt, long long steps,
                         const ZeroSumGame& game, const std::optional<JointPoint>& reference) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_integrate: dt must be > 0");
  if (steps < 1) throw std::invalid_argument("rk4_integrate: steps must be >= 1");

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);

  auto record = [&](double t, const JointPoint& p) {
    traj.times.push_back(t);
    traj.points.push_back(p);
    if (p.all_finite()) {
      traj.grad_l1_sum.push_back(game.grad_x(p).lpNorm<1>() + game.grad_y(p).lpNorm<1>());
    } else {
      traj.grad_l1_sum.push_back(std::numeric_limits<double>::infinity());
    }
    if (reference) {
      traj.dist_to_ref.push_back(p.all_finite()
                                     ? joint_distance(p, *reference)
                                     : std::numeric_limits<double>::infinity());
    }
  };

  JointPoint p = init;
  record(0.0, p);
  for (long long n = 0; n < steps; ++n) {
    p = rk4_step(rhs, p, dt);
    record(dt * static_cast<double>(n + 1), p);
    if (!p.all_finite()) {
      traj.truncated = true;
      break;
    }
  }
  return traj;
}

}  // namespace mml
