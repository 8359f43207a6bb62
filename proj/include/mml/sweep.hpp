#pragma once

// Parameter sweeps over (beta, h) or (eps, h) grids producing convergence
// heatmaps, and the seeded random-initial-condition sampler. Cells are
// independent tasks run in parallel; results are gathered by cell index, so
// the produced grid and its CSV rendering are identical for any worker
// count.

#include <cstdint>
#include <string>
#include <vector>

#include "mml/discrete.hpp"
#include "mml/game.hpp"
#include "mml/linalg.hpp"
#include "mml/params.hpp"

namespace mml {

// How a cell's verdict is produced:
//   ContinuousSpectral    eigenvalue analysis of the adaptive flow at the
//                         origin; rate = largest mapped real part (negative
//                         converges), no simulation.
//   ContinuousSimulated   RK4 on the adaptive flow, dt = h/10, max_steps
//                         samples; rate = fitted per-sample contraction.
//   DiscreteSimulated     the descent-ascent recursion itself; rate = fitted
//                         per-step contraction factor.
//   MinimizationSimulated the joint-minimization recursion (control
//                         experiment); rate as above.
enum class SweepMode { ContinuousSpectral, ContinuousSimulated, DiscreteSimulated,
                       MinimizationSimulated };

const char* sweep_mode_name(SweepMode m);
SweepMode parse_sweep_mode(const std::string& name);

struct SweepGrid {
  std::vector<double> beta_values;  // nonempty, strictly increasing
  std::vector<double> h_values;     // nonempty, strictly increasing, all > 0
  std::vector<double> eps_values;   // empty unless driving an eps sweep
  SweepMode mode = SweepMode::DiscreteSimulated;
  std::string game_id = "quad_cc";
  AdamParams fixed;          // rho and eps (beta and h come from the grid)
  std::uint64_t seed = 0;
  long long max_steps = 20000;  // per-cell step cap for simulated modes
};

enum class SweepAxis { Beta, Eps };

struct HeatmapCell {
  double primary = 0.0;  // beta or eps, the row value
  double h = 0.0;
  double rate = 0.0;     // semantics per SweepMode above; NaN when unfitted
  Verdict verdict = Verdict::Undecided;
  std::string error;     // nonempty when the cell computation threw
};

struct HeatmapResult {
  SweepAxis axis = SweepAxis::Beta;
  std::vector<double> primary_values;
  std::vector<double> h_values;
  SweepMode mode = SweepMode::DiscreteSimulated;
  std::string game_id;
  AdamParams fixed;
  std::uint64_t seed = 0;
  std::vector<HeatmapCell> cells;  // primary-major: index = i*h_count + j

  const HeatmapCell& cell(std::size_t i, std::size_t j) const {
    return cells.at(i * h_values.size() + j);
  }
};

// Simulated-mode start point: every coordinate 0.6.
JointPoint default_sweep_init(const ZeroSumGame& game);

// (beta, h) sweep. Cell failures are recorded in the cell's error field and
// never abort the sweep. Deterministic for a fixed grid, any worker count.
HeatmapResult heatmap(const SweepGrid& grid);

// (eps, h) sweep at fixed beta; same cell semantics as heatmap.
HeatmapResult eps_sweep(const std::string& game_id, double beta_fixed,
                        const std::vector<double>& eps_values,
                        const std::vector<double>& h_values, SweepMode mode,
                        const AdamParams& fixed, std::uint64_t seed = 0,
                        long long max_steps = 20000);

// CSV with header "beta,h,rate,verdict" (or "eps,h,..."), rows in
// primary-major cell order. Failed cells render verdict "Failed".
std::string heatmap_csv(const HeatmapResult& result);

// Per primary value, index of the largest h whose verdict is Converged
// (-1 when the whole column diverged or is undecided).
std::vector<int> convergence_boundary(const HeatmapResult& result);

// `count` points uniform in [box_low, box_high]^(d1+d2), reproducible from
// the seed (mt19937_64 with the explicit 53-bit mantissa map). A degenerate
// box (low > high) is an error; low == high pins every point.
std::vector<JointPoint> random_inits(std::uint64_t seed, int count, Eigen::Index d1,
                                     Eigen::Index d2, double box_low, double box_high);

}  // namespace mml
