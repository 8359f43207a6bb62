#pragma once

// Minimal standalone SVG rendering of sweep heatmaps: one rectangle per
// cell, black for diverged cells, a grayscale ramp (lighter means faster
// convergence) for converged ones, labeled axes. No renderer dependencies.

#include <filesystem>
#include <string>

#include "mml/sweep.hpp"

namespace mml {

std::string heatmap_svg(const HeatmapResult& result);

void write_heatmap_svg(const HeatmapResult& result, const std::filesystem::path& path);

}  // namespace mml
