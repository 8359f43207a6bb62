#include "mml/igr.hpp"

#include <stdexcept>

#include "mml/perturbed_l1.hpp"

namespace mml {

namespace {

double opnorm2(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Eigen::MatrixXd col_major = m;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(col_major);
  return svd.singularValues()(0);
}

}  // namespace

Vec igr_x_term(const ZeroSumGame& game, const JointPoint& point, const AdamParams& params) {
  validate_flow(params);
  const double scale = -0.5 * params.h * k_factor(params.beta, params.rho);
  return scale * grad_of_gradnorm(game, point, params.eps, GradNormKind::xx);
}

Vec igr_y_term(const ZeroSumGame& game, const JointPoint& point, const AdamParams& params) {
  validate_flow(params);
  const double scale = 0.5 * params.h * k_factor(params.beta, params.rho);
  return scale * grad_of_gradnorm(game, point, params.eps, GradNormKind::yx);
}

IgrSeries avg_grad_norm_series(const Trajectory& trajectory, const ZeroSumGame& game) {
  if (trajectory.empty()) {
    throw std::invalid_argument("avg_grad_norm_series: trajectory must be nonempty");
  }
  IgrSeries out;
  out.steps.reserve(trajectory.size());
  out.avg_s.reserve(trajectory.size());
  double avg = 0.0;
  long long t = 0;
  for (const JointPoint& p : trajectory.points) {
    const double inst = game.grad_x(p).lpNorm<1>() + game.grad_y(p).lpNorm<1>();
    ++t;
    avg = (static_cast<double>(t - 1) * avg + inst) / static_cast<double>(t);
    out.steps.push_back(t);
    out.avg_s.push_back(avg);
  }
  return out;
}

IgrDominance igr_dominance_report(const ZeroSumGame& game, const JointPoint& point,
                                  const AdamParams& params, double factor) {
  validate_flow(params);
  if (!(factor > 0.0)) {
    throw std::invalid_argument("igr_dominance_report: factor must be > 0");
  }
  IgrDominance out;
  out.factor = factor;
  out.x_term_norm = igr_x_term(game, point, params).norm();
  out.y_term_norm = igr_y_term(game, point, params).norm();
  out.hess_xx_opnorm = opnorm2(game.hess_xx(point));
  out.hess_yx_opnorm = opnorm2(game.hess_yx(point));
  out.hess_yy_opnorm = opnorm2(game.hess_yy(point));
  out.interaction_dominated =
      out.hess_yx_opnorm > factor * (out.hess_xx_opnorm + out.hess_yy_opnorm);
  return out;
}

}  // namespace mml
