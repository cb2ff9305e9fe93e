#pragma once

#include <filesystem>
#include <string>

#include "boundary_rf/common.hpp"
#include "boundary_rf/score.hpp"

namespace brf {

/// Scatter plot of planar points (one per column). Pure function of its
/// inputs: axis limits are snapped to whole units and numbers printed with
/// fixed precision, so equal data produces byte-equal files.
void write_scatter_svg(const std::filesystem::path& path, const Mat& points,
                       const std::string& title);

/// Arrow plot of a planar vector field sampled on a grid.
void write_quiver_svg(const std::filesystem::path& path, const GridField& field,
                      const std::string& title);

}  // namespace brf
