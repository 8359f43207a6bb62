#include "mml/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mml {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_beta_eps(double beta, double eps, const char* fn) {
  if (!(beta > -1.0 && beta < 1.0)) {
    throw std::invalid_argument(std::string(fn) + ": beta = " + std::to_string(beta) +
                                " outside admissible interval (-1, 1)");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument(std::string(fn) + ": eps = " + std::to_string(eps) +
                                " outside admissible interval (0, inf)");
  }
}

// Absolute floor covers the all-zero matrix, where |M|_F = 0.
void check_residuals(const Mat& m, const EigenPairs& pairs) {
  const Eigen::MatrixXcd mc = m.cast<Complex>();
  const double tol = 1e-8 * m.norm() + 1e-14;
  for (std::size_t k = 0; k < pairs.values.size(); ++k) {
    const Eigen::VectorXcd v = pairs.vectors.col(static_cast<Eigen::Index>(k));
    const double resid = (mc * v - pairs.values[k] * v).norm();
    if (!(resid <= tol)) {
      throw std::runtime_error("eig_pairs: eigenpair residual " + std::to_string(resid) +
                               " exceeds tolerance " + std::to_string(tol));
    }
  }
}

EigenPairs eig_dim1(const Mat& m) {
  EigenPairs out;
  out.values = {Complex(m(0, 0), 0.0)};
  out.vectors = Eigen::MatrixXcd::Ones(1, 1);
  return out;
}

EigenPairs eig_dim2(const Mat& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  // Characteristic polynomial lambda^2 - tr lambda + det.
  const auto [l1, l2] = quadratic_roots(Complex(-(a + d), 0.0), Complex(a * d - b * c, 0.0));
  EigenPairs out;
  out.values = {l1, l2};
  out.vectors.resize(2, 2);
  for (int k = 0; k < 2; ++k) {
    const Complex lam = out.values[static_cast<std::size_t>(k)];
    // Rows of (M - lambda I) are orthogonal to the eigenvector; either row
    // yields a candidate, keep the better-conditioned one.
    Eigen::Vector2cd v1, v2;
    v1 << Complex(b, 0.0), lam - a;
    v2 << lam - d, Complex(c, 0.0);
    Eigen::Vector2cd v = v1.norm() >= v2.norm() ? v1 : v2;
    if (v.norm() == 0.0) v = Eigen::Vector2cd::Unit(k);  // scaled identity: any basis works
    out.vectors.col(k) = v / v.norm();
  }
  return out;
}

EigenPairs eig_qr(const Mat& m) {
  const Eigen::MatrixXd col_major = m;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(col_major);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_pairs: QR iteration failed to converge");
  }
  EigenPairs out;
  out.vectors = solver.eigenvectors();
  const auto& vals = solver.eigenvalues();
  out.values.assign(vals.data(), vals.data() + vals.size());
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    out.vectors.col(k).normalize();
  }
  return out;
}

double per_lambda_continuous(Complex lam, double beta, double eps) {
  if (!is_rotational(lam)) return kInf;
  const double re = lam.real(), im = lam.imag();
  // sqrt(eps) stays a literal leading factor so the threshold scales exactly
  // by 2 when eps is scaled by 4.
  return 2.0 * std::sqrt(eps) * (1.0 - beta) * std::abs(re) /
         ((1.0 + beta) * (im * im - re * re));
}

double per_lambda_discrete(Complex lam, double beta, double eps) {
  const double re = lam.real(), im = lam.imag();
  const double den = (1.0 + beta * beta) * std::norm(lam) + 2.0 * beta * (im * im - re * re);
  if (!(den > 0.0)) return kInf;  // only lambda = 0 in practice
  return 2.0 * std::sqrt(eps) * (1.0 - beta * beta) * std::abs(re) / den;
}

}  // namespace

Mat gda_jacobian(const ZeroSumGame& game, const JointPoint& point) {
  if (point.d1() != game.d1 || point.d2() != game.d2) {
    throw std::invalid_argument("gda_jacobian: point dimensions do not match game");
  }
  const Eigen::Index d1 = game.d1, d2 = game.d2;
  Mat j(d1 + d2, d1 + d2);
  j.topLeftCorner(d1, d1) = -game.hess_xx(point);
  j.topRightCorner(d1, d2) = -game.hess_xy(point);
  j.bottomLeftCorner(d2, d1) = game.hess_yx(point);
  j.bottomRightCorner(d2, d2) = game.hess_yy(point);
  return j;
}

EigenPairs eig_pairs(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_pairs: matrix must be square");
  if (m.rows() == 0) throw std::invalid_argument("eig_pairs: empty matrix");
  if (!m.allFinite()) throw std::invalid_argument("eig_pairs: non-finite entries");
  EigenPairs out = m.rows() == 1 ? eig_dim1(m) : m.rows() == 2 ? eig_dim2(m) : eig_qr(m);
  check_residuals(m, out);
  return out;
}

Spectrum eig(const Mat& m) { return eig_pairs(m).values; }

bool is_rotational(Complex lambda, double tol) {
  return std::abs(lambda.imag()) - std::abs(lambda.real()) > tol * (1.0 + std::abs(lambda));
}

AssumptionCheck check_assumption(const Mat& jacobian, double tol) {
  AssumptionCheck out;
  for (Complex lam : eig(jacobian)) {
    if (is_rotational(lam, tol)) out.rotational.push_back(lam);
  }
  out.rotational_exists = !out.rotational.empty();

  const Mat s = 0.5 * (jacobian + jacobian.transpose());
  const Mat a = 0.5 * (jacobian - jacobian.transpose());
  const EigenPairs ap = eig_pairs(a);
  const Eigen::MatrixXcd sc = s.cast<Complex>();
  out.generic_condition = true;
  for (Eigen::Index k = 0; k < ap.vectors.cols(); ++k) {
    if (!((sc * ap.vectors.col(k)).norm() > tol)) {
      out.generic_condition = false;
      break;
    }
  }
  return out;
}

double gamma_factor(const AdamParams& params) {
  validate_flow(params);
  return params.h * (1.0 + params.beta) / (2.0 * std::sqrt(params.eps) * (1.0 - params.beta));
}

AdamJacobian adam_jacobian(const Mat& jacobian, const AdamParams& params) {
  validate_flow(params);
  const double g = gamma_factor(params);
  const double sqrt_eps = std::sqrt(params.eps);
  AdamJacobian out;
  out.matrix = (jacobian - g * (jacobian * jacobian).eval()) / sqrt_eps;
  for (Complex lam : eig(jacobian)) {
    out.spectrum.push_back((lam - g * lam * lam) / sqrt_eps);
  }
  return out;
}

double continuous_rate(const Spectrum& spectrum, const AdamParams& params) {
  validate_flow(params);
  if (spectrum.empty()) throw std::invalid_argument("continuous_rate: empty spectrum");
  const double g = gamma_factor(params);
  const double sqrt_eps = std::sqrt(params.eps);
  double best = -kInf;
  for (Complex lam : spectrum) {
    best = std::max(best, ((lam - g * lam * lam) / sqrt_eps).real());
  }
  return best;
}

double continuous_h_threshold(const Spectrum& spectrum, double beta, double eps) {
  require_beta_eps(beta, eps, "continuous_h_threshold");
  double best = kInf;
  for (Complex lam : spectrum) best = std::min(best, per_lambda_continuous(lam, beta, eps));
  return best;
}

double discrete_h_threshold(const Spectrum& spectrum, double beta, double eps) {
  require_beta_eps(beta, eps, "discrete_h_threshold");
  double best = kInf;
  for (Complex lam : spectrum) best = std::min(best, per_lambda_discrete(lam, beta, eps));
  return best;
}

ThresholdReport threshold_report(const Spectrum& spectrum, double beta, double eps) {
  require_beta_eps(beta, eps, "threshold_report");
  ThresholdReport out;
  out.h_star_continuous = kInf;
  out.h_star_discrete = kInf;
  for (Complex lam : spectrum) {
    PerEigenBound bound;
    bound.lambda = lam;
    bound.bound_continuous = per_lambda_continuous(lam, beta, eps);
    bound.bound_discrete = per_lambda_discrete(lam, beta, eps);
    out.h_star_continuous = std::min(out.h_star_continuous, bound.bound_continuous);
    out.h_star_discrete = std::min(out.h_star_discrete, bound.bound_discrete);
    out.per_eigen.push_back(bound);
  }
  out.continuous_constrained = out.h_star_continuous < kInf;
  out.discrete_constrained = out.h_star_discrete < kInf;
  out.beta_lower = beta_monotone_lower(spectrum);
  return out;
}

bool unit_disk_test(Complex a, Complex b) {
  return std::abs(b) < 1.0 && std::abs(a - b * std::conj(a)) < 1.0 - std::norm(b);
}

CharQuadratic char_quadratic(Complex lambda, double beta, double h, double eps) {
  require_beta_eps(beta, eps, "char_quadratic");
  if (!(h >= 0.0)) throw std::invalid_argument("char_quadratic: h must be >= 0");
  CharQuadratic out;
  out.a = -(beta + 1.0 + h * (1.0 - beta) * lambda / std::sqrt(eps));
  out.b = Complex(beta, 0.0);
  return out;
}

std::pair<Complex, Complex> quadratic_roots(Complex a, Complex b) {
  if (b == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), -a};
  Complex s = std::sqrt(a * a - 4.0 * b);
  // Pick the sign that avoids cancellation in a + s.
  if ((std::conj(a) * s).real() < 0.0) s = -s;
  const Complex q = -0.5 * (a + s);
  return {q, b / q};
}

double discrete_spectral_radius(const Spectrum& spectrum, double beta, double rho, double eps,
                                double h) {
  require_beta_eps(beta, eps, "discrete_spectral_radius");
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("discrete_spectral_radius: rho outside (0, 1)");
  }
  if (!(h >= 0.0)) throw std::invalid_argument("discrete_spectral_radius: h must be >= 0");
  // The second-moment recursion contributes rho, the first-moment one |beta|.
  double r = std::max(std::abs(beta), rho);
  for (Complex lam : spectrum) {
    const CharQuadratic cq = char_quadratic(lam, beta, h, eps);
    const auto [r1, r2] = quadratic_roots(cq.a, cq.b);
    r = std::max({r, std::abs(r1), std::abs(r2)});
  }
  return r;
}

std::optional<double> beta_monotone_lower(const Spectrum& spectrum) {
  std::optional<double> best;
  for (Complex lam : spectrum) {
    if (!is_rotational(lam)) continue;
    const double re = std::abs(lam.real());
    const double im = std::abs(lam.imag());
    const double v = (re - im) / (re + im);
    if (!best || v > *best) best = v;
  }
  return best;
}

SpectralReport spectral_report(const ZeroSumGame& game, const JointPoint& point,
                               const AdamParams& params) {
  validate_flow(params);
  SpectralReport out;
  out.J = gda_jacobian(game, point);
  out.S = 0.5 * (out.J + out.J.transpose());
  out.A = 0.5 * (out.J - out.J.transpose());
  out.spectrum = eig(out.J);
  const AssumptionCheck assumption = check_assumption(out.J);
  out.rotational = assumption.rotational;
  out.rotational_exists = assumption.rotational_exists;
  out.generic_condition = assumption.generic_condition;
  out.thresholds = threshold_report(out.spectrum, params.beta, params.eps);
  return out;
}

}  // namespace mml
