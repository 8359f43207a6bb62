#pragma once

// Smooth zero-sum game evaluator bundle: min over x, max over y of f(x, y).
// Carries the value, both block gradients, and the four Hessian blocks;
// either analytic (catalog, quadratic builder) or finite-difference derived.

#include <functional>
#include <string>

#include "mml/linalg.hpp"

namespace mml {

struct ZeroSumGame {
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;
  bool analytic = false;
  std::string name;

  std::function<double(const JointPoint&)> value;
  std::function<Vec(const JointPoint&)> grad_x;   // length d1
  std::function<Vec(const JointPoint&)> grad_y;   // length d2
  std::function<Mat(const JointPoint&)> hess_xx;  // d1 x d1
  std::function<Mat(const JointPoint&)> hess_xy;  // d1 x d2
  std::function<Mat(const JointPoint&)> hess_yx;  // d2 x d1
  std::function<Mat(const JointPoint&)> hess_yy;  // d2 x d2
};

// f(x, y) = x'Ax/2 + x'By - y'Cy/2 with constant Hessian blocks
// (hess_xx = A, hess_xy = B, hess_yx = B', hess_yy = -C).
// (0, 0) is always a stationary point of this family.
struct QuadraticGame {
  Mat A;  // d1 x d1, symmetric
  Mat B;  // d1 x d2
  Mat C;  // d2 x d2, symmetric
};

// Throws std::invalid_argument on dimension mismatch or asymmetric A/C.
ZeroSumGame make_quadratic_game(const QuadraticGame& q, std::string name = "quadratic");

// Value-only registration: gradients and Hessian blocks supplied by central
// finite differences (grad step 1e-6*(1+|p|_inf), Hessian step 1e-4*(1+|p|_inf)).
ZeroSumGame make_game_from_value(Eigen::Index d1, Eigen::Index d2,
                                 std::function<double(const JointPoint&)> value,
                                 std::string name = "fd");

// Smooth-game contract check: analytic gradients vs central differences on
// `probes` random points in [-1,1]^(d1+d2); Hessian block symmetry and
// cross-block transpose consistency. Returns an empty string when every check
// passes, else a description of the first failure.
std::string check_game_contract(const ZeroSumGame& game, int probes, std::uint64_t seed);

}  // namespace mml
