#pragma once

// Eigenstructure analysis of the descent-ascent flow at an equilibrium:
// Jacobian assembly, symmetric/antisymmetric split, rotational-spectrum
// detection, the preconditioned-flow Jacobian polynomial, step-size
// stability thresholds for the flow and the discrete recursion, the
// per-eigenvalue characteristic quadratic with its unit-disk root test, and
// convergence-rate prediction.

#include <optional>
#include <vector>

#include "mml/game.hpp"
#include "mml/linalg.hpp"
#include "mml/params.hpp"

namespace mml {

using Spectrum = std::vector<Complex>;

// Block Jacobian of the plain descent-ascent flow at `point`:
//   [ -hess_xx  -hess_xy ]
//   [  hess_yx   hess_yy ]
Mat gda_jacobian(const ZeroSumGame& game, const JointPoint& point);

struct EigenPairs {
  Spectrum values;
  Eigen::MatrixXcd vectors;  // column k pairs with values[k], unit 2-norm
};

// Dense nonsymmetric eigensolver. Closed forms for dimensions 1-2, QR
// iteration above. Every returned pair satisfies |Mv - lambda v| <=
// 1e-8 |M|_F; violation or non-convergence throws (never silent garbage).
EigenPairs eig_pairs(const Mat& m);
Spectrum eig(const Mat& m);

// lambda is "rotational" when |Im| - |Re| > tol*(1 + |lambda|). The strict
// spectral condition made numerical.
bool is_rotational(Complex lambda, double tol = 1e-9);

struct AssumptionCheck {
  bool rotational_exists = false;
  // Every unit eigenvector v of the antisymmetric part satisfies |Sv| > tol,
  // i.e. no eigenvector of A lies in the kernel of S.
  bool generic_condition = false;
  Spectrum rotational;
};

AssumptionCheck check_assumption(const Mat& jacobian, double tol = 1e-9);

// gamma = h (1+beta) / (2 sqrt(eps) (1-beta)).
double gamma_factor(const AdamParams& params);

struct AdamJacobian {
  Mat matrix;         // (1/sqrt(eps)) (I - gamma J) J
  Spectrum spectrum;  // scalar map (lambda - gamma lambda^2)/sqrt(eps) over Sp(J)
};

AdamJacobian adam_jacobian(const Mat& jacobian, const AdamParams& params);

// Largest real part over the mapped spectrum; negative iff the flow
// contracts locally, i.e. iff h < continuous_h_threshold.
double continuous_rate(const Spectrum& spectrum, const AdamParams& params);

struct PerEigenBound {
  Complex lambda;
  double bound_continuous = 0.0;  // +inf when lambda imposes no constraint
  double bound_discrete = 0.0;    // +inf when lambda imposes no constraint
};

struct ThresholdReport {
  double h_star_continuous = 0.0;  // +inf sentinel when unconstrained
  double h_star_discrete = 0.0;
  bool continuous_constrained = false;  // false <=> sentinel value
  bool discrete_constrained = false;
  std::optional<double> beta_lower;  // monotone-decrease region lower endpoint
  std::vector<PerEigenBound> per_eigen;
};

// Flow threshold: min over rotational lambda of
//   2 sqrt(eps) (1-beta) |Re| / ((1+beta) (Im^2 - Re^2)).
// Non-rotational eigenvalues impose no constraint. Empty rotational set
// yields the +inf sentinel.
double continuous_h_threshold(const Spectrum& spectrum, double beta, double eps);

// Recursion threshold: min over the full spectrum of
//   2 sqrt(eps) (1-beta^2) |Re| / ((1+beta^2)|lambda|^2 + 2 beta (Im^2 - Re^2)).
// A nonpositive denominator (only lambda = 0) imposes no constraint.
double discrete_h_threshold(const Spectrum& spectrum, double beta, double eps);

ThresholdReport threshold_report(const Spectrum& spectrum, double beta, double eps);

// Both roots of mu^2 + a mu + b inside the open unit disk, by the exact
// two-inequality criterion |b| < 1 and |a - b conj(a)| < 1 - |b|^2.
bool unit_disk_test(Complex a, Complex b);

// Per-eigenvalue characteristic quadratic mu^2 + a mu + b of the linearized
// one-step recursion: a = -(beta + 1 + h (1-beta) lambda / sqrt(eps)), b = beta.
struct CharQuadratic {
  Complex a;
  Complex b;
};

CharQuadratic char_quadratic(Complex lambda, double beta, double h, double eps);

// Roots of mu^2 + a mu + b by the numerically stable quadratic formula.
std::pair<Complex, Complex> quadratic_roots(Complex a, Complex b);

// Largest root modulus over the characteristic quadratics of every
// eigenvalue, together with the structural eigenvalues {|beta|, rho}.
// Radius < 1 iff h < discrete_h_threshold.
double discrete_spectral_radius(const Spectrum& spectrum, double beta, double rho, double eps,
                                double h);

// Lower endpoint of the beta region where the discrete threshold is
// guaranteed decreasing: max over rotational lambda of
// (|Re| - |Im|) / (|Re| + |Im|). Empty rotational set: not applicable.
std::optional<double> beta_monotone_lower(const Spectrum& spectrum);

struct SpectralReport {
  Mat J, S, A;       // Jacobian and its symmetric/antisymmetric split
  Spectrum spectrum;
  Spectrum rotational;
  bool rotational_exists = false;
  bool generic_condition = false;
  ThresholdReport thresholds;  // populated for the beta/eps supplied to spectral_report
};

// Full report at a point; thresholds evaluated at params.beta, params.eps.
SpectralReport spectral_report(const ZeroSumGame& game, const JointPoint& point,
                               const AdamParams& params);

}  // namespace mml
