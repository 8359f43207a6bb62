#pragma once

// Smoothed l1 machinery: |v|_{1,eps} = sum_i sqrt(v_i^2 + eps), its gradient,
// the diagonal preconditioners built from it, and the four analytic gradients
// of gradient-norms used by the ODE right-hand sides.
//
// Note |.|_{1,eps} is not homogeneous; no norm axioms are relied on anywhere.

#include "mml/game.hpp"
#include "mml/linalg.hpp"

namespace mml {

// sum_i sqrt(v_i^2 + eps). eps = 0 is accepted (plain l1) for test oracles.
double perturbed_l1_norm(const Vec& v, double eps);

// Componentwise v_i / sqrt(v_i^2 + eps); the exact gradient of the above.
Vec perturbed_l1_grad(const Vec& v, double eps);

// Diagonal preconditioner entries 1 / sqrt(g_j^2 + eps) for g = grad_x f
// (mu) or grad_y f (nu). At a stationary point every entry is 1/sqrt(eps).
Vec mu_eps(const ZeroSumGame& game, const JointPoint& p, double eps);
Vec nu_eps(const ZeroSumGame& game, const JointPoint& p, double eps);

// Which gradient-of-gradient-norm identity to evaluate:
//   xx: d/dx |grad_x f|_{1,eps} = hess_xx * mu .* grad_x
//   yx: d/dy |grad_x f|_{1,eps} = hess_yx * mu .* grad_x
//   yy: d/dy |grad_y f|_{1,eps} = hess_yy * nu .* grad_y
//   xy: d/dx |grad_y f|_{1,eps} = hess_xy * nu .* grad_y
enum class GradNormKind { xx, yx, yy, xy };

Vec grad_of_gradnorm(const ZeroSumGame& game, const JointPoint& p, double eps,
                     GradNormKind which);

}  // namespace mml
