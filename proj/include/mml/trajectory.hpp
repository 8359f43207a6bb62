#pragma once

// Time-indexed sequence of joint points with per-sample diagnostics, shared
// by the discrete steppers (times are step counts) and the ODE integrator
// (times are integration times).

#include <filesystem>
#include <optional>
#include <vector>

#include "mml/linalg.hpp"

namespace mml {

struct Trajectory {
  std::vector<double> times;        // strictly increasing, same length as points
  std::vector<JointPoint> points;
  std::vector<double> grad_l1_sum;  // plain |grad_x|_1 + |grad_y|_1 per sample
  std::vector<double> dist_to_ref;  // empty when no reference was supplied
  bool truncated = false;           // hit a non-finite state and stopped early

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const JointPoint& back() const { return points.back(); }
};

// Columns: <time_label>, x_0..x_{d1-1}, y_0..y_{d2-1}, grad_l1_sum,
// dist_to_ref (last column omitted when no reference was recorded).
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path,
                          const std::string& time_label);

}  // namespace mml
