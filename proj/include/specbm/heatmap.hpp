#pragma once

#include <string>
#include <vector>

#include "specbm/experiments.hpp"

namespace specbm {

enum class HeatmapMetric { SuccessRate, MeanAgreement };

struct HeatmapOptions {
  int cell_size = 22;  // pixels per grid cell
  int margin = 48;     // outer margin holding axis labels
  int panel_gap = 36;  // horizontal gap between per-method panels
};

// Deterministic SVG: one panel per method in the grid, cells on a linear
// grayscale (0 -> black, 1 -> white), null cells in a distinct blue fill,
// the exact-recovery threshold curve sqrt(alpha)-sqrt(beta)=sqrt(2) in red,
// and (for the agreement metric) the alpha=beta diagonal in green.
// beta runs along x, alpha along y (increasing upward).
std::string render_heatmap(const GridSpec& spec,
                           const std::vector<CellResult>& cells,
                           HeatmapMetric metric,
                           const HeatmapOptions& options = {});

}  // namespace specbm
