#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridrig/grid_model.hpp"

namespace gridrig {

struct SvgOptions {
  double unit = 100.0;        // pixels per unit length
  double margin = 40.0;
  double arrow_scale = 0.5;   // velocity length in units of length
};

/// Grid bars solid, Blue braces solid, Red braces dashed. The y axis is
/// flipped so that mathematical "up" is up on screen; velocity arrows are
/// drawn from each joint when given. Numbers carry exactly 6 decimals.
std::string render_svg(const GridSpec& spec, const BracingPattern& pattern,
                       const std::optional<std::vector<Vec2>>& velocities, const SvgOptions& options = {});

/// "%.6f" with negative zero printed as zero.
std::string fixed6(double x);

}  // namespace gridrig
