#include "irmplan/irm.hpp"

#include <algorithm>

namespace irmplan {

std::size_t InverseReachabilityMap::entry_count() const {
  std::size_t n = 0;
  for (const auto& [key, entries] : index) n += entries.size();
  return n;
}

IrmKey irm_key(const Pose6& arm_frame_pose, const GridSpec& grid) {
  const BinIndex b = bin_of(arm_frame_pose, grid);
  return {b[2], b[3], b[4], b[5]};
}

InverseReachabilityMap build_irm(const ReachabilityMap& rm) {
  InverseReachabilityMap irm{rm.grid, rm.arm_id, {}};
  for (const auto& v : rm.voxels) {
    const IrmKey key{v.bin[2], v.bin[3], v.bin[4], v.bin[5]};
    irm.index[key].push_back({-v.pose.x, -v.pose.y, v.q, v.mu});
  }
  for (auto& [key, entries] : irm.index) {
    std::stable_sort(entries.begin(), entries.end(), [](const IrmEntry& a, const IrmEntry& b) {
      return a.x_r != b.x_r ? a.x_r < b.x_r : a.y_r < b.y_r;
    });
  }
  return irm;
}

std::vector<BaseCandidate> query_irm(const InverseReachabilityMap& irm, const Pose6& target,
                                     const MountOffset& mount) {
  Pose6 local = target;
  local.z -= mount.dz;
  const auto it = irm.index.find(irm_key(local, irm.grid));
  if (it == irm.index.end()) return {};
  std::vector<BaseCandidate> out;
  out.reserve(it->second.size());
  for (const auto& e : it->second) {
    out.push_back({target.x + e.x_r - mount.dx, target.y + e.y_r - mount.dy, e.q, e.mu});
  }
  return out;
}

Eigen::Isometry3d arm_base_transform(double base_x, double base_y, const MountOffset& mount) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.translation() = Eigen::Vector3d(base_x + mount.dx, base_y + mount.dy, mount.dz);
  return t;
}

}  // namespace irmplan
