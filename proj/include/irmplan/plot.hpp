#pragma once

#include "irmplan/irm.hpp"
#include "irmplan/layered_graph.hpp"
#include "irmplan/regions.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace irmplan {

/// Layered-graph overlay: candidate clouds (subsampled to a few thousand
/// points), the chosen discrete base path, the start and the waypoints.
std::string svg_graph(const LayeredGraph& graph, const std::vector<BaseConfig>& path);

/// Four panels for one layer: input points, filtered points, clusters (with
/// split hulls dashed), accepted convex regions. A null trace draws the
/// panels empty with a "pinned" note.
std::string svg_regions(const RegionTrace* trace, std::size_t layer_index);

/// Discrete and refined base paths over the bound regions.
std::string svg_refinement(const std::vector<BaseConfig>& discrete, const std::vector<BaseConfig>& refined,
                           const std::vector<RegionSet>& regions);

/// Horizontal RM slice through the arm base height; each (x, y) cell is
/// shaded by the best manipulability over its orientation bins.
std::string svg_rm_slice(const ReachabilityMap& rm);

/// Objective value per accepted optimizer step.
std::string svg_cost(const std::vector<double>& cost_trace);

struct PlotInputs {
  LayeredGraph graph;
  std::vector<BaseConfig> discrete;
  std::vector<BaseConfig> refined;
  std::vector<RegionSet> regions;
  /// Per-layer traces; may be empty.
  std::vector<RegionTrace> traces;
  std::vector<double> cost_trace;
  /// Layer shown in the region panels; by default the first layer whose
  /// extraction split a holed cluster, else the middle layer.
  std::optional<std::size_t> region_layer;
};

/// Writes graph.svg, regions.svg, refinement.svg and cost.svg. Throws IOError.
std::vector<std::filesystem::path> emit_plots(const PlotInputs& in, const std::filesystem::path& out_dir);

}  // namespace irmplan
