#pragma once

// Minimal standalone SVG heatmap emitter for activation-frequency and
// chunk-norm matrices. Output is plain text, deterministic byte-for-byte.

#include <string>

#include "costid/mat.hpp"

namespace costid {

// Renders `values` (rows = components, columns = sets) as a colored grid
// with row/column indices, a title, and a vertical color scale. Values are
// clamped to [vmin, vmax] before mapping onto a white-to-blue ramp.
std::string heatmap_svg(const Mat& values, const std::string& title,
                        double vmin = 0.0, double vmax = 1.0);

}  // namespace costid
