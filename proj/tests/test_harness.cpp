#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "mml/catalog.hpp"
#include "mml/compare.hpp"
#include "mml/linalg.hpp"
#include "mml/spectral.hpp"
#include "mml/svg.hpp"
#include "mml/sweep.hpp"

using namespace mml;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size()))
    ++count;
  return count;
}

SweepGrid small_quad_grid() {
  SweepGrid grid;
  grid.beta_values = {-0.5, 0.0, 0.5};
  grid.h_values = {0.005, 0.01, 0.02};
  grid.game_id = "quad_cc";
  grid.fixed.rho = 0.5;
  grid.fixed.eps = 1e-3;
  grid.max_steps = 3000;
  return grid;
}

struct ScopedThreads {
  std::string saved;
  bool had = false;
  explicit ScopedThreads(const char* value) {
    if (const char* old = std::getenv("MML_THREADS")) {
      saved = old;
      had = true;
    }
    setenv("MML_THREADS", value, 1);
  }
  ~ScopedThreads() {
    if (had)
      setenv("MML_THREADS", saved.c_str(), 1);
    else
      unsetenv("MML_THREADS");
  }
};

}  // namespace

TEST_CASE("line fit recovers exact and noisy slopes") {
  {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
      x.push_back(0.3 * i);
      y.push_back(3.0 * 0.3 * i - 2.0);
    }
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    // Euler's method on z' = -z has local error ~ h^2/2: the log-log fit
    // slope lands near 2.
    std::vector<double> lnh, lnerr;
    for (const double h : {0.02, 0.01, 0.005, 0.0025}) {
      lnh.push_back(std::log(h));
      lnerr.push_back(std::log(std::abs(std::exp(-h) - (1.0 - h))));
    }
    const LineFit f = fit_line(lnh, lnerr);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(f.r2 > 0.999);
  }
  CHECK_THROWS_AS(fit_line({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_line({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("moment warmup counts are frozen") {
  CHECK(warmup_steps(0.01, 0.0, 0.5) == 14);
  CHECK(warmup_steps(0.02, 0.0, 0.5) == 12);
  CHECK(warmup_steps(0.005, 0.0, 0.5) == 16);
  CHECK(warmup_steps(0.0025, 0.0, 0.5) == 18);
  CHECK(warmup_steps(0.01, 0.9, 0.99) == 917);
  // beta = 0 contributes nothing: only the rho memory needs flushing.
  CHECK(warmup_steps(0.01, 0.0, 0.5) == warmup_steps(0.01, 1e-300, 0.5));
  CHECK_THROWS_AS(warmup_steps(1.0, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(warmup_steps(0.01, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(warmup_steps(0.01, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("random starts reproduce, fill the box, and center correctly") {
  const auto a = random_inits(7, 30, 2, 1, -1.0, 1.0);
  const auto b = random_inits(7, 30, 2, 1, -1.0, 1.0);
  REQUIRE(a.size() == 30);
  double mean0 = 0.0;
  for (int i = 0; i < 30; ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].d1() == 2);
    CHECK(a[i].d2() == 1);
    for (Eigen::Index k = 0; k < 2; ++k) {
      CHECK(a[i].x(k) >= -1.0);
      CHECK(a[i].x(k) < 1.0);
    }
    mean0 += a[i].x(0);
  }
  // Mean of 30 uniforms on [-1,1]: standard error 1/sqrt(3*30) ~ 0.105.
  CHECK(std::abs(mean0 / 30.0) <= 0.32);

  const auto pinned = random_inits(7, 5, 1, 1, 0.25, 0.25);
  for (const JointPoint& p : pinned) {
    CHECK(p.x(0) == 0.25);
    CHECK(p.y(0) == 0.25);
  }
  CHECK_THROWS_AS(random_inits(7, 0, 1, 1, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(random_inits(7, 5, 1, 1, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("sweep grids validate before any cell runs") {
  SweepGrid grid = small_quad_grid();
  grid.beta_values.clear();
  CHECK_THROWS_AS(heatmap(grid), std::invalid_argument);

  grid = small_quad_grid();
  grid.h_values = {0.02, 0.01};  // not increasing
  CHECK_THROWS_AS(heatmap(grid), std::invalid_argument);

  grid = small_quad_grid();
  grid.beta_values = {-0.5, 1.5};
  CHECK_THROWS_AS(heatmap(grid), std::invalid_argument);

  grid = small_quad_grid();
  grid.game_id = "no-such-game";
  CHECK_THROWS(heatmap(grid));
}

TEST_CASE("heatmap output is identical for any worker count") {
  const SweepGrid grid = small_quad_grid();
  std::string csv_serial, csv_parallel;
  {
    ScopedThreads env("1");
    csv_serial = heatmap_csv(heatmap(grid));
  }
  {
    ScopedThreads env("5");
    csv_parallel = heatmap_csv(heatmap(grid));
  }
  CHECK(csv_serial == csv_parallel);
  CHECK(csv_serial.rfind("beta,h,rate,verdict\n", 0) == 0);
  CHECK(count_occurrences(csv_serial, "\n") == 10);  // header + 9 cells
}

TEST_CASE("heatmap column flips from converged to not at the threshold") {
  const ZeroSumGame game = catalog("quad_cc");
  const Spectrum s = eig(gda_jacobian(game, origin_like(1, 1)));
  const double h_star = discrete_h_threshold(s, 0.0, 1e-3);

  SweepGrid grid;
  grid.beta_values = {0.0};
  grid.h_values = {0.5 * h_star, 0.9 * h_star, 1.3 * h_star, 2.0 * h_star};
  grid.game_id = "quad_cc";
  grid.fixed.rho = 0.5;
  grid.fixed.eps = 1e-3;
  grid.max_steps = 20000;
  const HeatmapResult r = heatmap(grid);
  CHECK(r.cell(0, 0).verdict == Verdict::Converged);
  CHECK(r.cell(0, 1).verdict == Verdict::Converged);
  CHECK(r.cell(0, 2).verdict != Verdict::Converged);
  CHECK(r.cell(0, 3).verdict != Verdict::Converged);
  CHECK(convergence_boundary(r) == std::vector<int>{1});
  for (std::size_t j = 0; j < 4; ++j) CHECK(r.cell(0, j).error.empty());
  // Below threshold the fitted contraction is a genuine rate in (0, 1).
  CHECK(r.cell(0, 0).rate > 0.0);
  CHECK(r.cell(0, 0).rate < 1.0);
}

TEST_CASE("rotation-only game never converges anywhere on a grid") {
  SweepGrid grid;
  grid.beta_values = {-0.5, 0.0, 0.5};
  grid.h_values = {0.002, 0.01};
  grid.game_id = "bilinear";
  grid.fixed.rho = 0.9;
  grid.fixed.eps = 1e-3;
  grid.max_steps = 5000;
  const HeatmapResult r = heatmap(grid);
  for (const HeatmapCell& cell : r.cells) {
    CHECK(cell.error.empty());
    CHECK(cell.verdict != Verdict::Converged);
  }
  const std::vector<int> boundary = convergence_boundary(r);
  CHECK(boundary == std::vector<int>(3, -1));
}

TEST_CASE("eps sweep carries the eps axis through to the csv") {
  AdamParams fixed;
  fixed.rho = 0.5;
  fixed.eps = 1e-3;
  const HeatmapResult r = eps_sweep("quad_cc", 0.0, {1e-4, 4e-4}, {0.005, 0.01, 0.02},
                                    SweepMode::DiscreteSimulated, fixed, 0, 3000);
  CHECK(r.axis == SweepAxis::Eps);
  CHECK(r.primary_values == std::vector<double>{1e-4, 4e-4});
  const std::string csv = heatmap_csv(r);
  CHECK(csv.rfind("eps,h,rate,verdict\n", 0) == 0);
  CHECK(count_occurrences(csv, "\n") == 7);
}

TEST_CASE("convergence boundary reads the largest converged step per row") {
  HeatmapResult r;
  r.primary_values = {0.1, 0.2, 0.3};
  r.h_values = {0.01, 0.02, 0.03};
  r.cells.resize(9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      HeatmapCell& c = r.cells[i * 3 + j];
      c.primary = r.primary_values[i];
      c.h = r.h_values[j];
      c.verdict = Verdict::Diverged;
    }
  r.cells[0].verdict = Verdict::Converged;                    // row 0: boundary 0
  r.cells[3].verdict = r.cells[4].verdict = Verdict::Converged;  // row 1: boundary 1
  CHECK(convergence_boundary(r) == std::vector<int>{0, 1, -1});
}

TEST_CASE("model comparison keeps the three trajectories aligned") {
  const ZeroSumGame game = catalog("quad");
  AdamParams p;
  p.h = 0.01;
  p.beta = 0.0;
  p.rho = 0.5;
  p.eps = 1e-3;
  const ModelComparison cmp = compare_models(game, p, JointPoint(0.6, 0.6), 200);
  REQUIRE(cmp.discrete.points.size() == 201);
  REQUIRE(cmp.adam_flow.points.size() == 201);
  REQUIRE(cmp.sign_flow.points.size() == 201);
  REQUIRE(cmp.dist_adam_flow.size() == 201);
  REQUIRE(cmp.dist_sign_flow.size() == 201);
  CHECK_FALSE(cmp.truncated);
  // Identical start: zero distance at sample zero.
  CHECK(cmp.dist_adam_flow[0] == 0.0);
  CHECK(cmp.dist_sign_flow[0] == 0.0);
  // The recursion's time column counts steps; the flows carry t = n h.
  CHECK(cmp.discrete.times[200] == 200.0);
  CHECK(cmp.adam_flow.times[200] == doctest::Approx(2.0).epsilon(1e-12));
  // The adaptive flow includes the O(h) correction and tracks the recursion
  // at least as well as the sign flow on average.
  double sum_adam = 0.0, sum_sign = 0.0;
  for (std::size_t n = 0; n < cmp.dist_adam_flow.size(); ++n) {
    sum_adam += cmp.dist_adam_flow[n];
    sum_sign += cmp.dist_sign_flow[n];
  }
  CHECK(sum_adam < sum_sign);
}

TEST_CASE("averaged comparison is deterministic and loses no tame runs") {
  const ZeroSumGame game = catalog("quad");
  AdamParams p;
  p.h = 0.01;
  p.beta = 0.0;
  p.rho = 0.5;
  p.eps = 1e-3;
  const ComparisonSummary a = compare_models_averaged(game, p, 100, 8, 11, -1.0, 1.0);
  const ComparisonSummary b = compare_models_averaged(game, p, 100, 8, 11, -1.0, 1.0);
  CHECK(a.runs == 8);
  CHECK(a.truncated_runs == 0);
  REQUIRE(a.mean_dist_adam_flow.size() == 101);
  CHECK(a.mean_dist_adam_flow == b.mean_dist_adam_flow);
  CHECK(a.mean_dist_sign_flow == b.mean_dist_sign_flow);
  CHECK(a.mean_dist_adam_flow[0] == 0.0);
  const ComparisonSummary c = compare_models_averaged(game, p, 100, 8, 12, -1.0, 1.0);
  CHECK(a.mean_dist_adam_flow != c.mean_dist_adam_flow);
}

TEST_CASE("svg rendering is structural and deterministic") {
  const HeatmapResult r = heatmap(small_quad_grid());
  const std::string svg = heatmap_svg(r);
  CHECK(svg == heatmap_svg(r));
  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  // Background + one per cell + plot border.
  CHECK(count_occurrences(svg, "<rect") == 9 + 2);
  CHECK(svg.find(">beta<") != std::string::npos);
  CHECK(svg.find(">h<") != std::string::npos);
  CHECK(svg.find("quad_cc") != std::string::npos);
}

TEST_CASE("error order study separates third from second order") {
  const ZeroSumGame game = catalog("f1");
  AdamParams p;
  p.beta = 0.0;
  p.rho = 0.5;
  p.eps = 1e-6;
  const ErrorOrderStudy study = error_order(game, p, {0.02, 0.01, 0.005, 0.0025}, 50);
  REQUIRE(study.h_values.size() == 4);
  CHECK(study.h_values.front() > study.h_values.back());  // stored decreasing
  CHECK(study.excluded.empty());
  CHECK(study.slope_adam > 2.5);
  CHECK(study.slope_adam < 3.5);
  CHECK(study.slope_sign > 1.5);
  CHECK(study.slope_sign < 2.5);
  CHECK(study.slope_adam - study.slope_sign > 0.5);
  CHECK(study.r2_adam > 0.99);
  CHECK(study.r2_sign > 0.99);
  // Per-h warmup is still a lower bound on the anchor index.
  for (std::size_t i = 0; i < study.h_values.size(); ++i)
    CHECK(study.warmup[i] >= warmup_steps(study.h_values[i], p.beta, p.rho));
}

TEST_CASE("error order rejects ladders it cannot fit") {
  const ZeroSumGame game = catalog("f1");
  AdamParams p;
  p.beta = 0.0;
  p.rho = 0.5;
  p.eps = 1e-6;
  // Wrong order, too narrow a span, too coarse a flow integrator.
  CHECK_THROWS_AS(error_order(game, p, {0.01, 0.02}, 50), std::invalid_argument);
  CHECK_THROWS_AS(error_order(game, p, {0.02, 0.01}, 50), std::invalid_argument);
  CHECK_THROWS_AS(error_order(game, p, {0.02, 0.01, 0.005, 0.0025}, 10),
                  std::invalid_argument);
}
