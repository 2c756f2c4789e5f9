#pragma once

#include "irmplan/reachability.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace irmplan {

/// (z, alpha, beta, gamma) bin of an end-effector pose in the arm frame.
struct IrmKey {
  int z = 0;
  int alpha = 0;
  int beta = 0;
  int gamma = 0;

  auto operator<=>(const IrmKey&) const = default;
};

/// Base position relative to the end effector's ground projection.
struct IrmEntry {
  double x_r = 0.0;
  double y_r = 0.0;
  JointConfig q;
  double mu = 0.0;

  bool operator==(const IrmEntry&) const = default;
};

struct InverseReachabilityMap {
  GridSpec grid;
  std::string arm_id;
  std::map<IrmKey, std::vector<IrmEntry>> index;

  std::size_t entry_count() const;

  bool operator==(const InverseReachabilityMap&) const = default;
};

/// Constant translation from the mobile-base center to the arm mount.
struct MountOffset {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;

  bool operator==(const MountOffset&) const = default;
};

/// World-frame base placement (yaw fixed at 0) that reaches a queried pose.
struct BaseCandidate {
  double x = 0.0;
  double y = 0.0;
  JointConfig q;
  double mu = 0.0;

  bool operator==(const BaseCandidate&) const = default;
};

IrmKey irm_key(const Pose6& arm_frame_pose, const GridSpec& grid);

/// Inverts every RM voxel into one entry (-x, -y, q, mu) filed under its
/// (z, alpha, beta, gamma) bin. Entries within a submap are sorted by
/// (x_r, y_r).
InverseReachabilityMap build_irm(const ReachabilityMap& rm);

/// Base candidates for a world-frame target. The mount height is removed
/// from the target z before binning; the planar mount offset is removed from
/// the returned positions.
std::vector<BaseCandidate> query_irm(const InverseReachabilityMap& irm, const Pose6& target,
                                     const MountOffset& mount = {});

/// World transform of the arm base for a base at (x, y), yaw 0.
Eigen::Isometry3d arm_base_transform(double base_x, double base_y, const MountOffset& mount);

}  // namespace irmplan
