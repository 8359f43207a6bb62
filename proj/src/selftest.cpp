#include "mml/run.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mml/catalog.hpp"
#include "mml/compare.hpp"
#include "mml/config.hpp"
#include "mml/continuous.hpp"
#include "mml/csv.hpp"
#include "mml/discrete.hpp"
#include "mml/igr.hpp"
#include "mml/perturbed_l1.hpp"
#include "mml/spectral.hpp"
#include "mml/sweep.hpp"
#include "mml/toml.hpp"
#include "mml/trajectory.hpp"

namespace mml {
namespace {

std::string near(const char* label, double got, double want, double tol) {
  if (std::abs(got - want) <= tol) return "";
  return std::string(label) + ": got " + format_double(got) + ", want " +
         format_double(want) + " +- " + format_double(tol);
}

std::string is_true(const char* label, bool ok) {
  if (ok) return "";
  return std::string(label) + " failed";
}

std::string join(std::string a, std::string b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "; " + b;
}

Spectrum quad_spectrum() {
  const ZeroSumGame game = catalog("quad");
  return eig(gda_jacobian(game, origin_like(game.d1, game.d2)));
}

std::string check_perturbed_l1() {
  Vec v(2);
  v << 1.0, 2.0;
  std::string r = near("norm(1,2;1e-3)", perturbed_l1_norm(v, 1e-3),
                       std::sqrt(1.001) + std::sqrt(4.001), 1e-12);
  Vec w(2);
  w << 3.0, -4.0;
  r = join(r, near("norm(3,-4;0)", perturbed_l1_norm(w, 0.0), 7.0, 0.0));
  const Vec g = perturbed_l1_grad(v, 1e-3);
  r = join(r, near("grad[0]", g(0), 1.0 / std::sqrt(1.001), 1e-15));
  r = join(r, near("grad[1]", g(1), 2.0 / std::sqrt(4.001), 1e-15));
  return r;
}

std::string check_stationary_preconditioner() {
  const ZeroSumGame game = catalog("sum_sq");
  const JointPoint origin = origin_like(game.d1, game.d2);
  const Vec mu = mu_eps(game, origin, 1e-3);
  const Vec nu = nu_eps(game, origin, 1e-3);
  const double want = 1.0 / std::sqrt(1e-3);
  std::string r = is_true("mu == 1/sqrt(eps)", (mu.array() == want).all());
  return join(r, is_true("nu == 1/sqrt(eps)", (nu.array() == want).all()));
}

std::string check_k_factor() {
  std::string r = near("K(0,0.9)", k_factor(0.0, 0.9), -18.0, 1e-12);
  r = join(r, near("K(0.5,0)", k_factor(0.5, 0.0), 2.0, 1e-12));
  for (double b : {-0.5, 0.0, 0.3, 0.9})
    r = join(r, is_true("K(b,b) == 0", k_factor(b, b) == 0.0));
  r = join(r, is_true("K(0.9,0.5) > 0", k_factor(0.9, 0.5) > 0.0));
  return r;
}

std::string check_warmup_counts() {
  std::string r = is_true("warmup(0.01,0,0.5) == 14", warmup_steps(0.01, 0.0, 0.5) == 14);
  r = join(r, is_true("warmup(0.02,0,0.5) == 12", warmup_steps(0.02, 0.0, 0.5) == 12));
  r = join(r, is_true("warmup(0.005,0,0.5) == 16", warmup_steps(0.005, 0.0, 0.5) == 16));
  r = join(r, is_true("warmup(0.0025,0,0.5) == 18", warmup_steps(0.0025, 0.0, 0.5) == 18));
  r = join(r, is_true("warmup(0.01,0.9,0.99) == 917", warmup_steps(0.01, 0.9, 0.99) == 917));
  return r;
}

std::string check_frozen_thresholds() {
  const Spectrum s = quad_spectrum();
  // Independent closed forms for lambda = -0.4 +- i, beta = 0, eps = 1e-3:
  // continuous 2 sqrt(eps) * 0.4 / (1 - 0.16), discrete 2 sqrt(eps) * 0.4 / 1.16.
  const double root_eps = std::sqrt(1e-3);
  std::string r = near("h*_continuous", continuous_h_threshold(s, 0.0, 1e-3),
                       2.0 * root_eps * 0.4 / 0.84, 1e-12);
  r = join(r, near("h*_discrete", discrete_h_threshold(s, 0.0, 1e-3),
                   2.0 * root_eps * 0.4 / 1.16, 1e-12));
  r = join(r, near("h*_continuous frozen", continuous_h_threshold(s, 0.0, 1e-3),
                   0.030117, 1e-6));
  r = join(r, near("h*_discrete frozen", discrete_h_threshold(s, 0.0, 1e-3),
                   0.021809, 1e-6));
  return r;
}

std::string check_beta_monotone_endpoint() {
  const std::optional<double> lower = beta_monotone_lower(quad_spectrum());
  if (!lower) return "no rotational eigenvalue found";
  return near("beta lower endpoint", *lower, -3.0 / 7.0, 1e-12);
}

std::string check_unit_disk() {
  using C = Complex;
  std::string r = is_true("double root 0.95 inside", unit_disk_test(C(-1.9), C(0.9025)));
  r = join(r, is_true("double root 1.05 outside", !unit_disk_test(C(-2.1), C(1.1025))));
  r = join(r, is_true("boundary root 1 excluded", !unit_disk_test(C(-2.0), C(1.0))));
  r = join(r, is_true("pair 0.5 +- 0.7i inside", unit_disk_test(C(-1.0), C(0.74))));
  r = join(r, is_true("pair 0.5 +- 0.9i outside", !unit_disk_test(C(-1.0), C(1.06))));
  return r;
}

std::string check_quadratic_roots() {
  const auto [r1, r2] = quadratic_roots(Complex(-3.0), Complex(2.0));
  const double lo = std::min(std::abs(r1), std::abs(r2));
  const double hi = std::max(std::abs(r1), std::abs(r2));
  std::string r = join(near("small root of (m-1)(m-2)", lo, 1.0, 1e-12),
                       near("large root of (m-1)(m-2)", hi, 2.0, 1e-12));
  // Cancellation-prone case: roots 1 and 1e-12; the naive formula loses the
  // small root, the stable one keeps full relative accuracy via b/q.
  const auto [s1, s2] = quadratic_roots(Complex(-(1.0 + 1e-12)), Complex(1e-12));
  const double small = std::min(std::abs(s1), std::abs(s2));
  r = join(r, is_true("tiny root kept to relative 1e-6",
                      std::abs(small - 1e-12) <= 1e-6 * 1e-12));
  const auto [i1, i2] = quadratic_roots(Complex(0.0), Complex(1.0));
  const double paired =
      std::min(std::abs(i1 - Complex(0.0, 1.0)) + std::abs(i2 - Complex(0.0, -1.0)),
               std::abs(i1 - Complex(0.0, -1.0)) + std::abs(i2 - Complex(0.0, 1.0)));
  r = join(r, near("unit imaginary pair", paired, 0.0, 1e-12));
  return r;
}

std::string check_radius_brackets_threshold() {
  const Spectrum s = quad_spectrum();
  const double h_star = discrete_h_threshold(s, 0.0, 1e-3);
  const double below = discrete_spectral_radius(s, 0.0, 0.9, 1e-3, 0.9 * h_star);
  const double above = discrete_spectral_radius(s, 0.0, 0.9, 1e-3, 1.1 * h_star);
  std::string r = is_true("radius < 1 below threshold", below < 1.0);
  r = join(r, is_true("radius > 1 above threshold", above > 1.0));
  r = join(r, is_true("radius >= rho floor",
                      discrete_spectral_radius(s, 0.0, 0.97, 1e-3, 1e-6) >= 0.97));
  return r;
}

std::string check_rk4_linear() {
  const OdeRhs rhs = [](const JointPoint& p) { return Vec(-to_joint(p)); };
  JointPoint z(1.0, 1.0);
  for (int i = 0; i < 100; ++i) z = rk4_step(rhs, z, 0.01);
  const double want = std::exp(-1.0);
  return join(near("x(1) vs exp(-1)", z.x(0), want, 1e-9),
              near("y(1) vs exp(-1)", z.y(0), want, 1e-9));
}

std::string check_fit_line_order() {
  // Euler's local error on z' = -z is h^2/2 + O(h^3); the log-log fit must
  // recover slope 2.
  std::vector<double> lx, ly;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    lx.push_back(std::log(h));
    ly.push_back(std::log(std::abs(std::exp(-h) - (1.0 - h))));
  }
  const LineFit fit = fit_line(lx, ly);
  std::string r = is_true("euler slope in [1.9, 2.1]", fit.slope > 1.9 && fit.slope < 2.1);
  return join(r, is_true("fit r2 > 0.999", fit.r2 > 0.999));
}

std::string check_random_inits() {
  const auto a = random_inits(42, 5, 2, 3, -1.0, 1.0);
  const auto b = random_inits(42, 5, 2, 3, -1.0, 1.0);
  if (a.size() != 5 || b.size() != 5) return "wrong count";
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool same = (a[i].x.array() == b[i].x.array()).all() &&
                      (a[i].y.array() == b[i].y.array()).all();
    if (!same) return "same seed gave different points";
    const double lo = std::min(a[i].x.minCoeff(), a[i].y.minCoeff());
    const double hi = std::max(a[i].x.maxCoeff(), a[i].y.maxCoeff());
    if (lo < -1.0 || hi > 1.0) return "point escaped the box";
  }
  for (const JointPoint& p : random_inits(7, 3, 1, 1, 0.0, 0.0))
    if (p.x(0) != 0.0 || p.y(0) != 0.0) return "degenerate box must pin points";
  return "";
}

std::string check_running_mean() {
  const ZeroSumGame game = catalog("sum_sq");
  Trajectory traj;
  traj.times = {0.0, 1.0};
  traj.points = {JointPoint(1.0, 0.0), JointPoint(2.0, 0.0)};
  traj.grad_l1_sum = {0.0, 0.0};  // series recomputes from the game
  const IgrSeries series = avg_grad_norm_series(traj, game);
  if (series.steps.size() != 2 || series.steps[0] != 1 || series.steps[1] != 2)
    return "steps must be 1-based and cover every sample";
  return join(near("avg after 1 sample", series.avg_s[0], 2.0, 1e-12),
              near("avg after 2 samples", series.avg_s[1], 3.0, 1e-12));
}

std::string check_igr_example() {
  const ZeroSumGame game = catalog("quad");
  AdamParams p;
  p.h = 0.01;
  p.beta = 0.0;
  p.rho = 0.9;
  p.eps = 1e-3;
  const JointPoint at(1.0, 0.0);
  const Vec xt = igr_x_term(game, at, p);
  const Vec yt = igr_y_term(game, at, p);
  return join(near("x forcing", xt(0), 0.0358879, 1e-5),
              near("y forcing", yt(0), -0.0897198, 1e-5));
}

std::string check_gda_bilinear_growth() {
  const ZeroSumGame game = catalog("bilinear");
  const JointPoint z0(0.6, 0.6);
  const JointPoint z1 = gda_step(z0, game, 0.1);
  const double ratio = (z1.x.squaredNorm() + z1.y.squaredNorm()) /
                       (z0.x.squaredNorm() + z0.y.squaredNorm());
  return near("per-step energy factor 1 + h^2", ratio, 1.01, 1e-12);
}

std::string check_verdicts_bracket_threshold() {
  const ZeroSumGame game = catalog("quad_cc");
  AdamParams p;
  p.beta = 0.0;
  p.rho = 0.9;
  p.eps = 1e-3;
  const JointPoint init(0.6, 0.6);
  p.h = 0.01;  // below the frozen threshold 0.021809
  const RunResult low = run_adam_da(game, p, init, 20000);
  p.h = 0.03;  // above it
  const RunResult high = run_adam_da(game, p, init, 20000);
  // Above the threshold a far start settles on a small cycle around the
  // repelling equilibrium: it never converges, but never escapes either.
  // The factor-10 escape shows from a start inside the linear regime.
  const RunResult local = run_adam_da(game, p, JointPoint(7.07e-5, 7.07e-5), 20000);
  std::string r = is_true("h below threshold converges",
                          low.verdict.status == Verdict::Converged);
  r = join(r, is_true("h above threshold never converges",
                      high.verdict.status != Verdict::Converged &&
                          high.verdict.final_distance > 1e-4));
  r = join(r, is_true("h above threshold repels the equilibrium",
                      local.verdict.status == Verdict::Diverged));
  return r;
}

std::string check_heatmap_repeatable() {
  SweepGrid grid;
  grid.beta_values = {-0.5, 0.0, 0.5};
  grid.h_values = {0.005, 0.01, 0.02};
  grid.max_steps = 2000;
  const std::string a = heatmap_csv(heatmap(grid));
  const std::string b = heatmap_csv(heatmap(grid));
  if (a != b) return "identical grids rendered different CSV";
  if (a.find("beta,h,rate,verdict\n") != 0) return "unexpected CSV header";
  return "";
}

std::string check_catalog_contract() {
  std::string r;
  for (const std::string& id : catalog_ids()) {
    const std::string msg = check_game_contract(catalog(id), 5, 7);
    if (!msg.empty()) r = join(r, id + ": " + msg);
  }
  return r;
}

std::string check_config_round_trip() {
  RunConfig c;
  c.command = Command::Heatmap;
  c.game_id = "quad";
  c.params.h = 0.015;
  c.params.beta = -0.25;
  c.params.rho = 0.95;
  c.params.eps = 1e-4;
  c.steps = 500;
  c.max_steps = 4000;
  c.beta_values = {-0.5, 0.0, 0.5};
  c.h_values = {0.005, 0.01};
  c.mode = SweepMode::ContinuousSpectral;
  c.init = JointPoint(0.3, -0.7);
  c.output_dir = "elsewhere";
  c.seed = 1234;
  c.emit_svg = true;
  c.random_init_count = 8;
  c.box_low = -2.0;
  c.box_high = 2.0;
  QuadraticGame q;
  q.A = Mat::Identity(1, 1);
  q.B = Mat::Constant(1, 1, -1.0);
  q.C = Mat::Identity(1, 1);
  c.inline_game = q;
  const RunConfig back = parse_config_text(serialize_config(c));
  if (!config_equal(c, back)) return "serialize/parse changed the config";
  return "";
}

std::string check_toml_errors() {
  std::string r;
  try {
    parse_toml("x = ");
    r = "empty value accepted";
  } catch (const std::exception& e) {
    if (std::string(e.what()).find("line 1") == std::string::npos)
      r = std::string("missing line number: ") + e.what();
  }
  try {
    parse_toml("[a]\nk = 1\nk = 2\n");
    r = join(r, "duplicate key accepted");
  } catch (const std::exception& e) {
    if (std::string(e.what()).find("line 3") == std::string::npos)
      r = join(r, std::string("duplicate points at wrong line: ") + e.what());
  }
  return r;
}

std::string check_threshold_eps_scaling() {
  const Spectrum s = quad_spectrum();
  std::string r;
  for (double eps : {1e-4, 1e-3}) {
    if (discrete_h_threshold(s, 0.3, 4.0 * eps) != 2.0 * discrete_h_threshold(s, 0.3, eps))
      r = join(r, "discrete threshold not exactly doubled at 4x eps");
    if (continuous_h_threshold(s, 0.3, 4.0 * eps) !=
        2.0 * continuous_h_threshold(s, 0.3, eps))
      r = join(r, "continuous threshold not exactly doubled at 4x eps");
  }
  return r;
}

std::string check_flow_vanishes_at_stationary() {
  const ZeroSumGame game = catalog("quad_cc");
  AdamParams p;
  p.h = 0.01;
  p.beta = 0.5;
  p.rho = 0.9;
  p.eps = 1e-3;
  const JointPoint origin = origin_like(game.d1, game.d2);
  const Vec v = rhs_continuous_adam_da(origin, game, p);
  const Vec w = rhs_sign_gda(origin, game, p.eps);
  std::string r = is_true("adaptive flow velocity is 0", (v.array() == 0.0).all());
  return join(r, is_true("sign flow velocity is 0", (w.array() == 0.0).all()));
}

}  // namespace

int selftest(std::ostream& out) {
  const std::vector<std::pair<const char*, std::function<std::string()>>> checks = {
      {"perturbed-l1-values", check_perturbed_l1},
      {"stationary-preconditioner", check_stationary_preconditioner},
      {"k-factor-values", check_k_factor},
      {"warmup-counts", check_warmup_counts},
      {"frozen-thresholds", check_frozen_thresholds},
      {"beta-monotone-endpoint", check_beta_monotone_endpoint},
      {"unit-disk-criterion", check_unit_disk},
      {"quadratic-root-stability", check_quadratic_roots},
      {"radius-brackets-threshold", check_radius_brackets_threshold},
      {"rk4-linear-accuracy", check_rk4_linear},
      {"fit-line-euler-order", check_fit_line_order},
      {"random-inits-reproducible", check_random_inits},
      {"running-mean-series", check_running_mean},
      {"igr-forcing-example", check_igr_example},
      {"gda-bilinear-growth", check_gda_bilinear_growth},
      {"verdicts-bracket-threshold", check_verdicts_bracket_threshold},
      {"heatmap-repeatable", check_heatmap_repeatable},
      {"catalog-contract", check_catalog_contract},
      {"config-round-trip", check_config_round_trip},
      {"toml-error-lines", check_toml_errors},
      {"threshold-eps-scaling", check_threshold_eps_scaling},
      {"flow-vanishes-at-stationary", check_flow_vanishes_at_stationary},
  };

  int failures = 0;
  for (const auto& [name, fn] : checks) {
    std::string msg;
    try {
      msg = fn();
    } catch (const std::exception& e) {
      msg = std::string("threw: ") + e.what();
    }
    if (msg.empty()) {
      out << "pass " << name << "\n";
    } else {
      out << "FAIL " << name << ": " << msg << "\n";
      ++failures;
    }
  }
  out << "selftest: " << checks.size() << " checks, " << failures << " failures\n";
  return failures;
}

}  // namespace mml
