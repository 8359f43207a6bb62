#pragma once

// Dense double-precision linear algebra aliases and the joint strategy
// point shared by every module. Desk-scale dimensions only (d1+d2 <= 200),
// so everything is dense and row-major.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace mml {

using Vec = Eigen::VectorXd;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Complex = std::complex<double>;

// One strategy profile: x for the minimizing player, y for the maximizing one.
struct JointPoint {
  Vec x;
  Vec y;

  JointPoint() = default;
  JointPoint(Vec x_in, Vec y_in) : x(std::move(x_in)), y(std::move(y_in)) {}

  // Scalar-game convenience (d1 = d2 = 1).
  JointPoint(double x0, double y0) : x(1), y(1) {
    x(0) = x0;
    y(0) = y0;
  }

  Eigen::Index d1() const { return x.size(); }
  Eigen::Index d2() const { return y.size(); }

  bool all_finite() const { return x.allFinite() && y.allFinite(); }
};

// Stacked [x; y] view used by integrators and Jacobian assembly.
inline Vec to_joint(const JointPoint& p) {
  Vec z(p.d1() + p.d2());
  z.head(p.d1()) = p.x;
  z.tail(p.d2()) = p.y;
  return z;
}

inline JointPoint from_joint(const Vec& z, Eigen::Index d1) {
  if (z.size() < d1) throw std::invalid_argument("from_joint: joint vector shorter than d1");
  return JointPoint(z.head(d1), z.tail(z.size() - d1));
}

inline double joint_distance(const JointPoint& a, const JointPoint& b) {
  return std::sqrt((a.x - b.x).squaredNorm() + (a.y - b.y).squaredNorm());
}

inline double joint_inf_norm(const JointPoint& p) {
  double nx = p.x.size() ? p.x.lpNorm<Eigen::Infinity>() : 0.0;
  double ny = p.y.size() ? p.y.lpNorm<Eigen::Infinity>() : 0.0;
  return nx > ny ? nx : ny;
}

inline JointPoint origin_like(Eigen::Index d1, Eigen::Index d2) {
  return JointPoint(Vec::Zero(d1), Vec::Zero(d2));
}

}  // namespace mml
