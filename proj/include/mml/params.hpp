#pragma once

// Hyperparameter tuple for the descent-ascent stepper and its ODE limits.

#include <stdexcept>
#include <string>

namespace mml {

// Admissible ranges: h > 0, beta in (-1,1), rho in (0,1), eps > 0.
struct AdamParams {
  double h = 0.01;     // step size
  double beta = 0.0;   // first-moment momentum factor
  double rho = 0.9;    // second-moment momentum factor
  double eps = 1e-8;   // stability offset added inside the square root
};

// Throws std::invalid_argument naming the offending field and its interval.
inline void validate(const AdamParams& p) {
  auto fail = [](const std::string& field, double value, const std::string& interval) {
    throw std::invalid_argument("AdamParams." + field + " = " + std::to_string(value) +
                                " outside admissible interval " + interval);
  };
  if (!(p.h > 0.0)) fail("h", p.h, "(0, inf)");
  if (!(p.beta > -1.0 && p.beta < 1.0)) fail("beta", p.beta, "(-1, 1)");
  if (!(p.rho > 0.0 && p.rho < 1.0)) fail("rho", p.rho, "(0, 1)");
  if (!(p.eps > 0.0)) fail("eps", p.eps, "(0, inf)");
}

inline bool params_valid(const AdamParams& p) {
  return p.h > 0.0 && p.beta > -1.0 && p.beta < 1.0 && p.rho > 0.0 && p.rho < 1.0 &&
         p.eps > 0.0;
}

// Flow right-hand sides remain meaningful at h = 0 (the correction term
// drops out); steppers require h > 0.
inline void validate_flow(const AdamParams& p) {
  AdamParams q = p;
  if (q.h == 0.0) q.h = 1.0;
  validate(q);
  if (p.h < 0.0) throw std::invalid_argument("AdamParams.h must be >= 0 for flow evaluation");
}

}  // namespace mml
