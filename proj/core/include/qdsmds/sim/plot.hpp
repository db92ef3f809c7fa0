#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qdsmds/sim/experiment.hpp"

namespace qdsmds::sim {

/// Mean error versus sigma_d, one SVG per (scenario, epsilon) with an SMDS
/// and a QD-SMDS polyline. Returns the written paths.
/// Throws kEmptyDataset when there is nothing to plot or a group has fewer
/// than two sweep points.
std::vector<std::filesystem::path> emit_plots(const std::vector<PointSummary>& summary,
                                              const std::filesystem::path& out_dir);

/// SVG document for one (scenario, epsilon) group.
std::string render_svg(const std::vector<PointSummary>& group);

}  // namespace qdsmds::sim
