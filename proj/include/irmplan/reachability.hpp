#pragma once

#include "irmplan/arm_model.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace irmplan {

/// Voxel grid over the 6D pose space. Translational bins are centered at
/// (k + 0.5) * delta_p; rotational bins tile (-pi, pi] starting at -pi, so
/// 2*pi / delta_r must be an integer.
struct GridSpec {
  double delta_p = 0.05;
  double delta_r = 6.283185307179586;
  double radius = 1.0;
  std::size_t voxel_cap = 5'000'000;

  /// Throws ConfigError on non-positive resolutions or a rotational step that
  /// does not tile the circle.
  void validate() const;

  int rotational_bins() const;

  bool operator==(const GridSpec&) const = default;
};

/// (x, y, z, alpha, beta, gamma) bin indices.
using BinIndex = std::array<int, 6>;

int translational_bin(double v, double delta);
double translational_center(int k, double delta);
int rotational_bin(double angle, const GridSpec& grid);
double rotational_center(int k, const GridSpec& grid);

BinIndex bin_of(const Pose6& pose, const GridSpec& grid);
Pose6 bin_center(const BinIndex& bin, const GridSpec& grid);

struct VoxelSite {
  BinIndex bin;
  Pose6 pose;
};

struct ReachVoxel {
  BinIndex bin{};
  Pose6 pose;
  JointConfig q;
  double mu = 0.0;

  bool operator==(const ReachVoxel&) const = default;
};

/// Voxels are kept sorted by bin index; lookups are binary searches.
struct ReachabilityMap {
  GridSpec grid;
  std::string arm_id;
  std::vector<ReachVoxel> voxels;

  bool operator==(const ReachabilityMap&) const = default;
};

/// Bins whose centers lie inside the reach sphere, in lexicographic bin order.
/// Throws ConfigError when the count would exceed grid.voxel_cap.
std::vector<VoxelSite> enumerate_voxels(const GridSpec& grid);

/// Runs IK for one site. The voxel is kept when IK succeeds and the solved
/// pose falls back into the same bin.
std::optional<ReachVoxel> evaluate_voxel(const ArmModel& model, const GridSpec& grid, const VoxelSite& site);

/// OpenMP sweep over all sites. Output does not depend on the thread count.
ReachabilityMap build_rm(const ArmModel& model, const GridSpec& grid);

/// Single-threaded reference for build_rm.
ReachabilityMap build_rm_serial(const ArmModel& model, const GridSpec& grid);

/// Voxel whose bin contains `pose`, or nullptr.
const ReachVoxel* rm_lookup(const ReachabilityMap& map, const Pose6& pose);

}  // namespace irmplan
