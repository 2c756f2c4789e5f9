#pragma once

#include "irmplan/irm.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace irmplan {

/// Planar base position; the base yaw is fixed.
struct BaseConfig {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const BaseConfig&) const = default;
};

struct Layer {
  std::size_t waypoint_index = 0;
  Pose6 target;
  std::vector<BaseCandidate> candidates;
};

struct LayeredGraph {
  std::vector<Layer> layers;
  BaseConfig start;
};

struct CostWeights {
  double length = 1.0;
  double smooth = 1.0;

  bool operator==(const CostWeights&) const = default;
};

struct SearchOptions {
  CostWeights weights;
  /// Charge length(start -> first node) in addition to using the start as the
  /// smoothness predecessor of the first node.
  bool anchor_start = true;
  /// Optimize the full three-point smoothness objective with (node,
  /// predecessor) states. Cost is cubic in the layer width.
  bool exact_smoothness = false;
};

/// Counters filled by the priority-queue search.
struct SearchStats {
  std::size_t pushes = 0;
  std::size_t pops = 0;
  std::size_t stale_pops = 0;
  std::size_t expansions = 0;
  std::size_t relaxations = 0;

  bool operator==(const SearchStats&) const = default;
};

struct DiscretePath {
  std::vector<BaseConfig> nodes;
  std::vector<JointConfig> joints;
  /// Index of the chosen candidate in each layer.
  std::vector<std::size_t> choice;
  double total_cost = 0.0;
};

/// Arc-length resampling with n = ceil(L / ds) equal steps. Endpoints are
/// kept exactly; angles are interpolated along the shortest arc.
/// Throws InputError for fewer than two poses, ds <= 0 or zero total length.
std::vector<Pose6> discretize_trajectory(std::span<const Pose6> poses, double ds);

double path_length_cost(const BaseConfig& a, const BaseConfig& b);
double smoothness_cost(const BaseConfig& prev, const BaseConfig& cur, const BaseConfig& next);

/// One layer per waypoint, filled from the IRM. Candidates sharing a base
/// cell are collapsed to the highest-manipulability one. Throws
/// UnreachableWaypoint for the first empty layer.
LayeredGraph build_graph(const InverseReachabilityMap& irm, std::span<const Pose6> trajectory,
                         const BaseConfig& start, const MountOffset& mount = {});

/// Cost of a candidate sequence under the three-point objective, with the
/// start acting as predecessor of the first node.
double evaluate_path_cost(const LayeredGraph& graph, std::span<const std::size_t> choice,
                          const SearchOptions& options = {});

/// Minimum-cost base sequence. The default mode is the DP + Dijkstra label
/// search in which smoothness at a node uses that node's recorded best
/// predecessor; exact_smoothness switches to the lifted state space.
DiscretePath search(const LayeredGraph& graph, const SearchOptions& options = {},
                    SearchStats* stats = nullptr);

}  // namespace irmplan
