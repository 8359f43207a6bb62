#include "mml/perturbed_l1.hpp"

#include <cmath>
#include <stdexcept>

namespace mml {

double perturbed_l1_norm(const Vec& v, double eps) {
  if (eps < 0.0) throw std::invalid_argument("perturbed_l1_norm: eps must be >= 0");
  if (!v.allFinite()) throw std::invalid_argument("perturbed_l1_norm: non-finite entry");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += std::sqrt(v(i) * v(i) + eps);
  return sum;
}

Vec perturbed_l1_grad(const Vec& v, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("perturbed_l1_grad: eps must be > 0");
  if (!v.allFinite()) throw std::invalid_argument("perturbed_l1_grad: non-finite entry");
  Vec g(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) g(i) = v(i) / std::sqrt(v(i) * v(i) + eps);
  return g;
}

Vec mu_eps(const ZeroSumGame& game, const JointPoint& p, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mu_eps: eps must be > 0");
  const Vec g = game.grad_x(p);
  Vec d(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) d(i) = 1.0 / std::sqrt(g(i) * g(i) + eps);
  return d;
}

Vec nu_eps(const ZeroSumGame& game, const JointPoint& p, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("nu_eps: eps must be > 0");
  const Vec g = game.grad_y(p);
  Vec d(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) d(i) = 1.0 / std::sqrt(g(i) * g(i) + eps);
  return d;
}

// Chain rule: mu .* grad equals the smoothed-l1 gradient evaluated at the
// block gradient, so each identity is one Hessian block times that vector.
Vec grad_of_gradnorm(const ZeroSumGame& game, const JointPoint& p, double eps,
                     GradNormKind which) {
  if (!(eps > 0.0)) throw std::invalid_argument("grad_of_gradnorm: eps must be > 0");
  switch (which) {
    case GradNormKind::xx:
      return game.hess_xx(p) * perturbed_l1_grad(game.grad_x(p), eps);
    case GradNormKind::yx:
      return game.hess_yx(p) * perturbed_l1_grad(game.grad_x(p), eps);
    case GradNormKind::yy:
      return game.hess_yy(p) * perturbed_l1_grad(game.grad_y(p), eps);
    case GradNormKind::xy:
      return game.hess_xy(p) * perturbed_l1_grad(game.grad_y(p), eps);
  }
  throw std::logic_error("grad_of_gradnorm: unreachable");
}

}  // namespace mml
