#include "mml/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "mml/csv.hpp"

namespace mml {

namespace {

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Convergence speed on a common nonnegative scale: spectral cells carry a
// real-part rate (more negative is faster), simulated cells a per-step
// contraction factor in (0, 1).
double cell_speed(const HeatmapCell& cell, SweepMode mode) {
  if (!std::isfinite(cell.rate)) return 0.0;
  if (mode == SweepMode::ContinuousSpectral) return std::max(0.0, -cell.rate);
  if (cell.rate <= 0.0) return 0.0;
  return std::max(0.0, -std::log(cell.rate));
}

std::string gray(int level) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", level, level, level);
  return buf;
}

}  // namespace

std::string heatmap_svg(const HeatmapResult& result) {
  const std::size_t nb = result.primary_values.size();
  const std::size_t nh = result.h_values.size();
  const double cell_w = std::clamp(720.0 / static_cast<double>(nb), 6.0, 24.0);
  const double cell_h = std::clamp(560.0 / static_cast<double>(nh), 6.0, 24.0);
  const double left = 70.0, top = 34.0, bottom = 46.0, right = 20.0;
  const double plot_w = cell_w * static_cast<double>(nb);
  const double plot_h = cell_h * static_cast<double>(nh);
  const double width = left + plot_w + right;
  const double height = top + plot_h + bottom;

  // Ramp normalization over converged cells only.
  double smin = std::numeric_limits<double>::infinity();
  double smax = -std::numeric_limits<double>::infinity();
  for (const HeatmapCell& c : result.cells) {
    if (!c.error.empty() || c.verdict != Verdict::Converged) continue;
    const double s = cell_speed(c, result.mode);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  const bool flat_ramp = !(smax > smin);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + short_num(width) +
         "\" height=\"" + short_num(height) + "\" viewBox=\"0 0 " + short_num(width) + " " +
         short_num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  const std::string title = result.game_id + " / " + sweep_mode_name(result.mode);
  out += "<text x=\"" + short_num(left) + "\" y=\"20\" font-family=\"monospace\" "
         "font-size=\"13\">" + title + "</text>\n";

  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nh; ++j) {
      const HeatmapCell& c = result.cell(i, j);
      std::string fill;
      if (!c.error.empty()) {
        fill = "#b00020";
      } else if (c.verdict == Verdict::Diverged) {
        fill = "#000000";
      } else if (c.verdict == Verdict::Undecided) {
        fill = "#404040";
      } else {
        double t = 1.0;
        if (!flat_ramp) t = (cell_speed(c, result.mode) - smin) / (smax - smin);
        if (flat_ramp) t = 0.75;
        fill = gray(96 + static_cast<int>(std::lround(159.0 * t)));
      }
      const double x = left + cell_w * static_cast<double>(i);
      const double y = top + cell_h * static_cast<double>(nh - 1 - j);
      out += "<rect x=\"" + short_num(x) + "\" y=\"" + short_num(y) + "\" width=\"" +
             short_num(cell_w) + "\" height=\"" + short_num(cell_h) + "\" fill=\"" + fill +
             "\"/>\n";
    }
  }

  out += "<rect x=\"" + short_num(left) + "\" y=\"" + short_num(top) + "\" width=\"" +
         short_num(plot_w) + "\" height=\"" + short_num(plot_h) +
         "\" fill=\"none\" stroke=\"#000000\"/>\n";

  // Axis labels and end ticks.
  const char* primary_name = result.axis == SweepAxis::Beta ? "beta" : "eps";
  const double y_axis_text = top + plot_h + 36.0;
  out += "<text x=\"" + short_num(left + plot_w / 2.0 - 15.0) + "\" y=\"" +
         short_num(y_axis_text) + "\" font-family=\"monospace\" font-size=\"12\">" +
         primary_name + "</text>\n";
  out += "<text x=\"" + short_num(left) + "\" y=\"" + short_num(top + plot_h + 16.0) +
         "\" font-family=\"monospace\" font-size=\"11\">" +
         short_num(result.primary_values.front()) + "</text>\n";
  out += "<text x=\"" + short_num(left + plot_w - 34.0) + "\" y=\"" +
         short_num(top + plot_h + 16.0) + "\" font-family=\"monospace\" font-size=\"11\">" +
         short_num(result.primary_values.back()) + "</text>\n";
  out += "<text x=\"12\" y=\"" + short_num(top + plot_h / 2.0) +
         "\" font-family=\"monospace\" font-size=\"12\">h</text>\n";
  out += "<text x=\"12\" y=\"" + short_num(top + plot_h) +
         "\" font-family=\"monospace\" font-size=\"11\">" + short_num(result.h_values.front()) +
         "</text>\n";
  out += "<text x=\"12\" y=\"" + short_num(top + 12.0) +
         "\" font-family=\"monospace\" font-size=\"11\">" + short_num(result.h_values.back()) +
         "</text>\n";
  out += "</svg>\n";
  return out;
}

void write_heatmap_svg(const HeatmapResult& result, const std::filesystem::path& path) {
  atomic_write(path, heatmap_svg(result));
}

}  // namespace mml
