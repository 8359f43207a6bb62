#pragma once

// Named test games with hand-derived gradients and Hessian blocks.
//
// Catalog ids:
//   f1        x(y - 0.45) + phi(x) - phi(y),  phi(z) = z^2/4 - z^4/2 + z^6/6
//   f2        xy - (1/10)(y^2/2 - y^4/4)
//   f3        x^2/10 - y^2/10 + sin(x)cos(y)
//   bilinear  xy
//   quad      0.2x^2 + xy - 0.2y^2        (A=0.4, B=1,  C=0.4)
//   quad_paper 0.2x^2 - xy + 0.2y^2       (A=0.4, B=-1, C=-0.4; convex in y)
//   quad_cc   0.2x^2 - xy - 0.2y^2        (A=0.4, B=-1, C=0.4; concave in y)
//   sum_sq    x^2 + y^2                   (joint minimization target)
//
// quad_paper's saddle Jacobian is trace-free with purely imaginary spectrum,
// so its analytic step-size threshold is zero; quad_cc is the concave-in-y
// variant whose stability region is nontrivial. Both are provided.

#include <string>
#include <vector>

#include "mml/game.hpp"

namespace mml {

// Throws std::out_of_range listing the valid ids for an unknown id.
ZeroSumGame catalog(const std::string& id);

std::vector<std::string> catalog_ids();

}  // namespace mml
