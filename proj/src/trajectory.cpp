#include "mml/trajectory.hpp"

#include "mml/csv.hpp"

namespace mml {

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path,
                          const std::string& time_label) {
  const bool has_ref = !traj.dist_to_ref.empty();
  const Eigen::Index d1 = traj.empty() ? 0 : traj.points.front().d1();
  const Eigen::Index d2 = traj.empty() ? 0 : traj.points.front().d2();

  std::vector<std::string> header;
  header.push_back(time_label);
  for (Eigen::Index i = 0; i < d1; ++i) header.push_back("x_" + std::to_string(i));
  for (Eigen::Index j = 0; j < d2; ++j) header.push_back("y_" + std::to_string(j));
  header.push_back("grad_l1_sum");
  if (has_ref) header.push_back("dist_to_ref");

  CsvWriter csv(header);
  std::vector<std::string> cells;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    cells.clear();
    cells.push_back(format_double(traj.times[k]));
    for (Eigen::Index i = 0; i < d1; ++i) cells.push_back(format_double(traj.points[k].x(i)));
    for (Eigen::Index j = 0; j < d2; ++j) cells.push_back(format_double(traj.points[k].y(j)));
    cells.push_back(format_double(traj.grad_l1_sum[k]));
    if (has_ref) cells.push_back(format_double(traj.dist_to_ref[k]));
    csv.row(cells);
  }
  csv.write(path);
}

}  // namespace mml
