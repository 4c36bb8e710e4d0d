#pragma once

#include <filesystem>

#include "flocksim/csv.hpp"

namespace flocksim {

enum class PlotKind { TrajectoryXY, VelocityError };

/// Renders a static SVG line plot from an emitted log.
///   TrajectoryXY: planar paths of every agent; the leader is drawn dashed
///     with square markers, followers as colored lines with circle markers;
///     edges of the initial graph (pairs closer than edge_overlay_radius at
///     the first sample) are overlaid at the initial positions.
///   VelocityError: ||qd_i - qd_0|| against time, one series per follower.
void emit_plot(const CsvTable& log, const std::filesystem::path& path,
               PlotKind kind, double edge_overlay_radius = 200.0);

}  // namespace flocksim
