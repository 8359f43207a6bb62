#include "mml/game.hpp"

#include <memory>
#include <stdexcept>
#include <utility>

#include "mml/finite_diff.hpp"
#include "mml/rng.hpp"

namespace mml {

namespace {

void require_symmetric(const Mat& m, const char* label) {
  const double scale = m.norm();
  const double tol = 1e-8 * (1.0 + scale);
  if ((m - m.transpose()).norm() > tol)
    throw std::invalid_argument(std::string("make_quadratic_game: ") + label +
                                " is not symmetric");
}

}  // namespace

ZeroSumGame make_quadratic_game(const QuadraticGame& q, std::string name) {
  if (q.A.rows() != q.A.cols()) throw std::invalid_argument("make_quadratic_game: A not square");
  if (q.C.rows() != q.C.cols()) throw std::invalid_argument("make_quadratic_game: C not square");
  if (q.B.rows() != q.A.rows() || q.B.cols() != q.C.rows())
    throw std::invalid_argument("make_quadratic_game: B dimensions do not match A, C");
  require_symmetric(q.A, "A");
  require_symmetric(q.C, "C");

  auto data = std::make_shared<QuadraticGame>(q);
  ZeroSumGame g;
  g.d1 = q.A.rows();
  g.d2 = q.C.rows();
  g.analytic = true;
  g.name = std::move(name);
  g.value = [data](const JointPoint& p) {
    return 0.5 * p.x.dot(data->A * p.x) + p.x.dot(data->B * p.y) - 0.5 * p.y.dot(data->C * p.y);
  };
  g.grad_x = [data](const JointPoint& p) -> Vec { return data->A * p.x + data->B * p.y; };
  g.grad_y = [data](const JointPoint& p) -> Vec {
    return data->B.transpose() * p.x - data->C * p.y;
  };
  g.hess_xx = [data](const JointPoint&) -> Mat { return data->A; };
  g.hess_xy = [data](const JointPoint&) -> Mat { return data->B; };
  g.hess_yx = [data](const JointPoint&) -> Mat { return data->B.transpose(); };
  g.hess_yy = [data](const JointPoint&) -> Mat { return Mat(-data->C); };
  return g;
}

ZeroSumGame make_game_from_value(Eigen::Index d1, Eigen::Index d2,
                                 std::function<double(const JointPoint&)> value,
                                 std::string name) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("make_game_from_value: d1, d2 must be >= 1");
  if (!value) throw std::invalid_argument("make_game_from_value: null value evaluator");

  auto joint_value = [value, d1](const Vec& z) { return value(from_joint(z, d1)); };

  std::vector<Eigen::Index> x_idx(static_cast<std::size_t>(d1));
  std::vector<Eigen::Index> y_idx(static_cast<std::size_t>(d2));
  for (Eigen::Index i = 0; i < d1; ++i) x_idx[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index j = 0; j < d2; ++j) y_idx[static_cast<std::size_t>(j)] = d1 + j;

  ZeroSumGame g;
  g.d1 = d1;
  g.d2 = d2;
  g.analytic = false;
  g.name = std::move(name);
  g.value = value;
  g.grad_x = [joint_value, d1](const JointPoint& p) -> Vec {
    const Vec z = to_joint(p);
    return fd_gradient(joint_value, z, default_grad_step(z)).head(d1);
  };
  g.grad_y = [joint_value, d1](const JointPoint& p) -> Vec {
    const Vec z = to_joint(p);
    const Vec g_all = fd_gradient(joint_value, z, default_grad_step(z));
    return g_all.tail(g_all.size() - d1);
  };
  g.hess_xx = [joint_value, x_idx](const JointPoint& p) -> Mat {
    const Vec z = to_joint(p);
    return fd_second_difference(joint_value, z, x_idx, x_idx, default_hess_step(z));
  };
  g.hess_xy = [joint_value, x_idx, y_idx](const JointPoint& p) -> Mat {
    const Vec z = to_joint(p);
    return fd_second_difference(joint_value, z, x_idx, y_idx, default_hess_step(z));
  };
  g.hess_yx = [joint_value, x_idx, y_idx](const JointPoint& p) -> Mat {
    const Vec z = to_joint(p);
    return fd_second_difference(joint_value, z, y_idx, x_idx, default_hess_step(z));
  };
  g.hess_yy = [joint_value, y_idx](const JointPoint& p) -> Mat {
    const Vec z = to_joint(p);
    return fd_second_difference(joint_value, z, y_idx, y_idx, default_hess_step(z));
  };
  return g;
}

std::string check_game_contract(const ZeroSumGame& game, int probes, std::uint64_t seed) {
  auto rng = make_rng(seed);
  auto joint_value = [&game](const Vec& z) { return game.value(from_joint(z, game.d1)); };

  for (int k = 0; k < probes; ++k) {
    JointPoint p(Vec(game.d1), Vec(game.d2));
    for (Eigen::Index i = 0; i < game.d1; ++i) p.x(i) = uniform(rng, -1.0, 1.0);
    for (Eigen::Index j = 0; j < game.d2; ++j) p.y(j) = uniform(rng, -1.0, 1.0);

    const Vec z = to_joint(p);
    const Vec fd = fd_gradient(joint_value, z, default_grad_step(z));
    Vec analytic(z.size());
    analytic.head(game.d1) = game.grad_x(p);
    analytic.tail(game.d2) = game.grad_y(p);
    const double rel = (analytic - fd).norm() / (fd.norm() + 1e-12);
    if (game.analytic && rel > 1e-5)
      return game.name + ": analytic gradient vs finite differences rel err " +
             std::to_string(rel);

    const Mat hxx = game.hess_xx(p);
    const Mat hyy = game.hess_yy(p);
    const Mat hxy = game.hess_xy(p);
    const Mat hyx = game.hess_yx(p);
    const double tol_xx = 1e-8 * (1.0 + hxx.norm());
    const double tol_yy = 1e-8 * (1.0 + hyy.norm());
    const double tol_cross = 1e-8 * (1.0 + hxy.norm());
    if ((hxx - hxx.transpose()).norm() > tol_xx) return game.name + ": hess_xx not symmetric";
    if ((hyy - hyy.transpose()).norm() > tol_yy) return game.name + ": hess_yy not symmetric";
    if ((hyx - hxy.transpose()).norm() > tol_cross)
      return game.name + ": hess_yx is not the transpose of hess_xy";
  }
  return {};
}

}  // namespace mml
