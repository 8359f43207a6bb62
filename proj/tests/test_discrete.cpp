#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "mml/catalog.hpp"
#include "mml/discrete.hpp"
#include "mml/linalg.hpp"

using namespace mml;

namespace {

// A trajectory whose distance-to-reference series follows d0 * ratio^n, with
// placeholder points so the series stay aligned.
Trajectory geometric_distances(double d0, double ratio, long long steps) {
  Trajectory t;
  for (long long n = 0; n <= steps; ++n) {
    t.times.push_back(static_cast<double>(n));
    t.points.push_back(JointPoint(0.0, 0.0));
    t.grad_l1_sum.push_back(0.0);
    t.dist_to_ref.push_back(d0 * std::pow(ratio, static_cast<double>(n)));
  }
  return t;
}

}  // namespace

TEST_CASE("first step on xy matches the hand-worked values") {
  // g = (y, x) = (1, 1); bias corrections cancel the (1-beta), (1-rho)
  // factors at step one, so the update is h * 1 / sqrt(1 + 0) exactly.
  const ZeroSumGame game = catalog("bilinear");
  AdamParams p;
  p.h = 0.1;
  p.beta = 0.5;
  p.rho = 0.9;
  p.eps = 0.0;
  AdamState s = AdamState::init(JointPoint(1.0, 1.0));
  s = adam_da_step(s, game, p);
  CHECK(s.point.x(0) == 0.9);
  CHECK(s.point.y(0) == 1.1);
  CHECK(s.n == 1);
  CHECK_FALSE(s.diverged);
}

TEST_CASE("joint minimization first step descends in both players") {
  // f = x^2 + y^2 from (1, 1): g = (2, 2), update h * m / sqrt(v) = 0.1.
  const ZeroSumGame game = catalog("sum_sq");
  AdamParams p;
  p.h = 0.1;
  p.beta = 0.5;
  p.rho = 0.9;
  p.eps = 0.0;
  AdamState s = AdamState::init(JointPoint(1.0, 1.0));
  s = adam_min_step(s, game, p);
  CHECK(s.point.x(0) == 0.9);
  CHECK(s.point.y(0) == 0.9);
}

TEST_CASE("bias correction cancels the zero initialization at step one") {
  const ZeroSumGame game = catalog("f3");
  const JointPoint start(0.4, 0.2);
  const Vec gx = game.grad_x(start);
  const Vec gy = game.grad_y(start);
  for (const double beta : {-0.7, -0.2, 0.3, 0.9}) {
    AdamParams p;
    p.h = 0.01;
    p.beta = beta;
    p.rho = 0.6;
    p.eps = 1e-8;
    AdamState s = AdamState::init(start);
    s = adam_da_step(s, game, p);
    // m_hat = (1-beta) g / (1-beta^1): equal to g up to one rounding each way.
    const double mhat_x = s.m_x(0) / (1.0 - beta);
    const double mhat_y = s.m_y(0) / (1.0 - beta);
    CHECK(mhat_x == doctest::Approx(gx(0)).epsilon(4e-16));
    CHECK(mhat_y == doctest::Approx(gy(0)).epsilon(4e-16));
    const double vhat_x = s.v_x(0) / (1.0 - p.rho);
    CHECK(vhat_x == doctest::Approx(gx(0) * gx(0)).epsilon(4e-16));
  }
}

TEST_CASE("plain descent-ascent on xy grows energy by exactly 1 + h^2") {
  const ZeroSumGame game = catalog("bilinear");
  const double h = 0.1;
  JointPoint z(1.0, 1.0);
  z = gda_step(z, game, h);
  CHECK(z.x(0) == 0.9);
  CHECK(z.y(0) == 1.1);

  z = JointPoint(1.0, 1.0);
  double energy = 2.0;
  for (int n = 0; n < 50; ++n) {
    z = gda_step(z, game, h);
    energy *= 1.0 + h * h;
    const double now = z.x(0) * z.x(0) + z.y(0) * z.y(0);
    CHECK(now == doctest::Approx(energy).epsilon(1e-12));
  }
}

TEST_CASE("classification crosses the factor-10 rule at the exact step") {
  // d_n = 1.1^n: first n with d_n >= 10 d_0 is n = 25.
  const Trajectory t = geometric_distances(1.0, 1.1, 40);
  StopRule stop;
  const ConvergenceVerdict v = classify(t, stop);
  CHECK(v.status == Verdict::Diverged);
  CHECK(v.steps_used == 25);
}

TEST_CASE("classification detects convergence and fits the contraction rate") {
  // d_n = 0.5^n: first n with d_n <= 1e-8 is n = 27.
  const Trajectory t = geometric_distances(1.0, 0.5, 40);
  StopRule stop;
  const ConvergenceVerdict v = classify(t, stop);
  CHECK(v.status == Verdict::Converged);
  CHECK(v.steps_used == 27);
  REQUIRE(v.fitted_rate.has_value());
  CHECK(*v.fitted_rate == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("classification stays undecided when neither rule fires") {
  const Trajectory t = geometric_distances(1.0, 0.999, 100);
  const ConvergenceVerdict v = classify(t, StopRule{});
  CHECK(v.status == Verdict::Undecided);
  CHECK(v.steps_used == 100);
}

TEST_CASE("recursion run on a damped quadratic converges below threshold") {
  const ZeroSumGame game = catalog("quad");
  AdamParams p;
  p.h = 0.01;
  p.beta = 0.0;
  p.rho = 0.5;
  p.eps = 1e-3;
  const RunResult r = run_adam_da(game, p, JointPoint(0.6, 0.6), 20000);
  CHECK(r.verdict.status == Verdict::Converged);
  CHECK(r.verdict.final_distance <= 1e-8);
  REQUIRE(r.verdict.fitted_rate.has_value());
  CHECK(*r.verdict.fitted_rate < 1.0);
  CHECK(*r.verdict.fitted_rate > 0.0);
  // Trajectory series stay aligned and the gradient sum shrinks with it.
  REQUIRE(r.trajectory.times.size() == r.trajectory.points.size());
  REQUIRE(r.trajectory.times.size() == r.trajectory.dist_to_ref.size());
  REQUIRE(r.trajectory.times.size() == r.trajectory.grad_l1_sum.size());
  CHECK(r.trajectory.grad_l1_sum.back() < 1e-6);
  CHECK_FALSE(r.trajectory.truncated);
}

TEST_CASE("non-finite gradients flag divergence instead of throwing") {
  ZeroSumGame game = catalog("bilinear");
  game.grad_x = [](const JointPoint&) {
    Vec g(1);
    g(0) = std::numeric_limits<double>::quiet_NaN();
    return g;
  };
  AdamParams p;
  p.h = 0.5;
  p.beta = 0.0;
  p.rho = 0.5;
  p.eps = 1e-6;

  // Stepper level: the state is marked, the point pinned non-finite, no throw.
  AdamState s = AdamState::init(JointPoint(1.0, 1.0));
  s = adam_da_step(s, game, p);
  CHECK(s.diverged);
  CHECK_FALSE(s.point.all_finite());
  // Stepping a diverged state is a no-op apart from staying diverged.
  const AdamState again = adam_da_step(s, game, p);
  CHECK(again.diverged);

  // Run level: the trajectory truncates cleanly instead of propagating NaN
  // into the classification series.
  const RunResult r = run_adam_da(game, p, JointPoint(1.0, 1.0), 5000);
  CHECK(r.trajectory.truncated);
  CHECK(r.verdict.status != Verdict::Converged);
  CHECK(std::isinf(r.trajectory.grad_l1_sum.back()));
  for (std::size_t i = 0; i + 1 < r.trajectory.points.size(); ++i)
    CHECK(r.trajectory.points[i].all_finite());
}

TEST_CASE("run parameters are validated before any stepping") {
  const ZeroSumGame game = catalog("quad");
  AdamParams bad;
  bad.beta = 1.0;
  CHECK_THROWS_AS(run_adam_da(game, bad, JointPoint(0.1, 0.1), 10), std::invalid_argument);
  AdamParams ok;
  CHECK_THROWS_AS(run_adam_da(game, ok, JointPoint(0.1, 0.1), 0), std::invalid_argument);
}
