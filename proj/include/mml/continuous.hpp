#pragma once

// Continuous-time models of the discrete dynamics and a fixed-step RK4
// integrator.
//
// Models (all velocities in stacked [x; y] order):
//   adaptive descent-ascent flow (order-3 accurate after moment warmup):
//     dx/dt = -mu .* (grad_x f + (h/2) m_mu .* d/dx(|grad_x f|_{1,eps} - |grad_y f|_{1,eps}))
//     dy/dt = +nu .* (grad_y f + (h/2) m_nu .* d/dy(|grad_x f|_{1,eps} - |grad_y f|_{1,eps}))
//   sign flow (order-2 accurate): dx/dt = -mu .* grad_x f, dy/dt = +nu .* grad_y f
//   plain flow:                   dx/dt = -grad_x f,       dy/dt = +grad_y f
//
// mu, nu are the diagonal preconditioners 1/sqrt(g_j^2 + eps); the O(h)
// correction uses the analytic gradient-of-gradient-norm identities (Hessian
// blocks required). Every right-hand side vanishes at stationary points.

#include <functional>

#include "mml/game.hpp"
#include "mml/linalg.hpp"
#include "mml/params.hpp"
#include "mml/perturbed_l1.hpp"
#include "mml/trajectory.hpp"

namespace mml {

// Diagonal coefficient bundle for the adaptive flow at one point:
//   k    = (1+beta)/(1-beta) - (1+rho)/(1-rho)
//   m_mu = k + eps*(1+rho)/(1-rho) * mu.^2   (entrywise; same for m_nu)
// At a stationary point every m_mu entry equals (1+beta)/(1-beta).
struct OdeCoefficients {
  Vec mu;    // d1
  Vec nu;    // d2
  Vec m_mu;  // d1
  Vec m_nu;  // d2
  double k = 0.0;
};

double k_factor(double beta, double rho);

OdeCoefficients ode_coefficients(const ZeroSumGame& game, const JointPoint& p,
                                 const AdamParams& params);

// Stacked velocity of the adaptive descent-ascent flow.
Vec rhs_continuous_adam_da(const JointPoint& p, const ZeroSumGame& game,
                           const AdamParams& params);

// Preconditioned gradient flow (the h -> 0 limit of the above).
Vec rhs_sign_gda(const JointPoint& p, const ZeroSumGame& game, double eps);

// Unpreconditioned descent-ascent flow.
Vec rhs_gda(const JointPoint& p, const ZeroSumGame& game);

// Small-eps limit flow: the adaptive flow with the eps-proportional
// preconditioner correction dropped (m_mu, m_nu -> k), with eps_reg kept
// inside mu, nu and the norm gradients for smoothness. For beta == rho
// (k = 0) this is exactly the sign flow.
Vec rhs_limit_eps(const JointPoint& p, const ZeroSumGame& game, const AdamParams& params,
                  double eps_reg = 1e-8);

using OdeRhs = std::function<Vec(const JointPoint&)>;

// One classical RK4 step of size dt from `state`.
JointPoint rk4_step(const OdeRhs& rhs, const JointPoint& state, double dt);

// Classical fixed-step RK4. Records every step (init included). A non-finite
// state truncates the trajectory and sets the truncated flag. When a
// reference point is supplied, per-sample distances to it are recorded.
Trajectory rk4_integrate(const OdeRhs& rhs, const JointPoint& init, double dt, long long steps,
                         const ZeroSumGame& game,
                         const std::optional<JointPoint>& reference = std::nullopt);

}  // namespace mml
