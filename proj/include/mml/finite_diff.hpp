#pragma once

// Central-difference derivative estimators. These double as the independent
// oracles against which every analytic derivative in the library is tested,
// so they must stay free of any dependency on the analytic paths.

#include <functional>

#include "mml/linalg.hpp"

namespace mml {

using ScalarFn = std::function<double(const Vec&)>;
using VectorFn = std::function<Vec(const Vec&)>;

// Step heuristics: gradient stencils tolerate a small step; second-difference
// stencils need a larger one before roundoff dominates.
inline double default_grad_step(const Vec& point) {
  return 1e-6 * (1.0 + (point.size() ? point.lpNorm<Eigen::Infinity>() : 0.0));
}

inline double default_hess_step(const Vec& point) {
  return 1e-4 * (1.0 + (point.size() ? point.lpNorm<Eigen::Infinity>() : 0.0));
}

// (f(p+s e_i) - f(p-s e_i)) / 2s per coordinate; O(s^2) accurate.
Vec fd_gradient(const ScalarFn& f, const Vec& point, double step);

// Central differences of a vector field; column j holds d(field)/d(point_j).
Mat fd_jacobian(const VectorFn& field, const Vec& point, double step);

// 4-point second difference d^2 f / (d point_i d point_j) over index subsets:
// rows range over `rows`, columns over `cols` (joint coordinate indices).
Mat fd_second_difference(const ScalarFn& f, const Vec& point,
                         const std::vector<Eigen::Index>& rows,
                         const std::vector<Eigen::Index>& cols, double step);

}  // namespace mml
