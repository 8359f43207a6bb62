#include "mml/finite_diff.hpp"

#include <stdexcept>

namespace mml {

Vec fd_gradient(const ScalarFn& f, const Vec& point, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
  Vec g(point.size());
  Vec p = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    const double saved = p(i);
    p(i) = saved + step;
    const double fp = f(p);
    p(i) = saved - step;
    const double fm = f(p);
    p(i) = saved;
    g(i) = (fp - fm) / (2.0 * step);
  }
  return g;
}

Mat fd_jacobian(const VectorFn& field, const Vec& point, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_jacobian: step must be positive");
  Vec p = point;
  Mat jac;
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    const double saved = p(j);
    p(j) = saved + step;
    const Vec fp = field(p);
    p(j) = saved - step;
    const Vec fm = field(p);
    p(j) = saved;
    if (j == 0) jac.resize(fp.size(), point.size());
    jac.col(j) = (fp - fm) / (2.0 * step);
  }
  return jac;
}

Mat fd_second_difference(const ScalarFn& f, const Vec& point,
                         const std::vector<Eigen::Index>& rows,
                         const std::vector<Eigen::Index>& cols, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_second_difference: step must be positive");
  Mat h(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  Vec p = point;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const Eigen::Index i = rows[a];
      const Eigen::Index j = cols[b];
      const double si = p(i);
      const double sj = p(j);
      double sum = 0.0;
      if (i == j) {
        // Standard 3-point diagonal stencil.
        p(i) = si + step;
        const double fpp = f(p);
        p(i) = si - step;
        const double fmm = f(p);
        p(i) = si;
        const double f0 = f(p);
        sum = (fpp - 2.0 * f0 + fmm) / (step * step);
      } else {
        p(i) = si + step;
        p(j) = sj + step;
        const double fpp = f(p);
        p(j) = sj - step;
        const double fpm = f(p);
        p(i) = si - step;
        const double fmm = f(p);
        p(j) = sj + step;
        const double fmp = f(p);
        p(i) = si;
        p(j) = sj;
        sum = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
      }
      h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum;
    }
  }
  return h;
}

}  // namespace mml
