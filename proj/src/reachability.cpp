#include "irmplan/reachability.hpp"

#include "irmplan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace irmplan {

namespace {

constexpr double kPi = std::numbers::pi;
// Keeps values that sit exactly on a bin boundary (z = 0 for a planar arm,
// roundoff from x - x) in the upper bin.
constexpr double kBinSlack = 1e-9;

JointConfig default_seed(const ArmModel& model) {
  std::vector<double> q(model.joint_count(), 0.0);
  const auto lims = model.limits();
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::clamp(0.0, lims[i].lo, lims[i].hi);
  return JointConfig(std::move(q));
}

ReachabilityMap compact(const GridSpec& grid, const ArmModel& model,
                        std::vector<std::optional<ReachVoxel>>& slots) {
  ReachabilityMap map{grid, model.id(), {}};
  std::size_t kept = 0;
  for (const auto& s : slots) kept += s.has_value();
  map.voxels.reserve(kept);
  for (auto& s : slots) {
    if (s) map.voxels.push_back(std::move(*s));
  }
  return map;
}

}  // namespace

void GridSpec::validate() const {
  if (!(delta_p > 0.0) || !std::isfinite(delta_p)) throw ConfigError("grid.delta_p must be positive");
  if (!(delta_r > 0.0) || !std::isfinite(delta_r)) throw ConfigError("grid.delta_r must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("grid.radius must be positive");
  if (delta_r > 2.0 * kPi + 1e-9) throw ConfigError("grid.delta_r must not exceed 2*pi");
  const double n = 2.0 * kPi / delta_r;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
    throw ConfigError("grid.delta_r must divide 2*pi into a whole number of bins");
  }
}

int GridSpec::rotational_bins() const {
  return std::max(1, static_cast<int>(std::lround(2.0 * kPi / delta_r)));
}

int translational_bin(double v, double delta) {
  return static_cast<int>(std::floor(v / delta + kBinSlack));
}

double translational_center(int k, double delta) { return (k + 0.5) * delta; }

int rotational_bin(double angle, const GridSpec& grid) {
  const double a = normalize_angle(angle);
  const int k = static_cast<int>(std::ceil((a + kPi) / grid.delta_r - kBinSlack)) - 1;
  return std::clamp(k, 0, grid.rotational_bins() - 1);
}

double rotational_center(int k, const GridSpec& grid) { return -kPi + (k + 0.5) * grid.delta_r; }

BinIndex bin_of(const Pose6& pose, const GridSpec& grid) {
  return {translational_bin(pose.x, grid.delta_p), translational_bin(pose.y, grid.delta_p),
          translational_bin(pose.z, grid.delta_p), rotational_bin(pose.alpha, grid),
          rotational_bin(pose.beta, grid),         rotational_bin(pose.gamma, grid)};
}

Pose6 bin_center(const BinIndex& bin, const GridSpec& grid) {
  return {translational_center(bin[0], grid.delta_p), translational_center(bin[1], grid.delta_p),
          translational_center(bin[2], grid.delta_p), rotational_center(bin[3], grid),
          rotational_center(bin[4], grid),             rotational_center(bin[5], grid)};
}

std::vector<VoxelSite> enumerate_voxels(const GridSpec& grid) {
  grid.validate();
  const double r2 = grid.radius * grid.radius;
  const int lo = static_cast<int>(std::floor(-grid.radius / grid.delta_p)) - 1;
  const int hi = static_cast<int>(std::ceil(grid.radius / grid.delta_p)) + 1;

  std::vector<std::array<int, 3>> cells;
  for (int i = lo; i <= hi; ++i) {
    const double x = translational_center(i, grid.delta_p);
    for (int j = lo; j <= hi; ++j) {
      const double y = translational_center(j, grid.delta_p);
      for (int k = lo; k <= hi; ++k) {
        const double z = translational_center(k, grid.delta_p);
        if (x * x + y * y + z * z <= r2) cells.push_back({i, j, k});
      }
    }
  }
  const auto nr = static_cast<std::size_t>(grid.rotational_bins());
  const std::size_t total = cells.size() * nr * nr * nr;
  if (total > grid.voxel_cap) {
    throw ConfigError("grid would produce " + std::to_string(total) + " voxels, above the cap of " +
                      std::to_string(grid.voxel_cap));
  }

  std::vector<VoxelSite> sites;
  sites.reserve(total);
  const int n = static_cast<int>(nr);
  for (const auto& c : cells) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int g = 0; g < n; ++g) {
          const BinIndex bin{c[0], c[1], c[2], a, b, g};
          sites.push_back({bin, bin_center(bin, grid)});
        }
      }
    }
  }
  return sites;
}

std::optional<ReachVoxel> evaluate_voxel(const ArmModel& model, const GridSpec& grid, const VoxelSite& site) {
  auto q = ik_solve(model, site.pose, default_seed(model));
  if (!q) return std::nullopt;
  const BinIndex got = bin_of(forward_kinematics(model, *q), grid);
  const bool full_pose = model.task_space() == TaskSpace::kSpatial;
  // A full-pose solve already matched the center orientation; Euler
  // re-binning near gimbal lock would only add false rejections.
  const std::size_t checked = full_pose ? 3 : 6;
  for (std::size_t i = 0; i < checked; ++i) {
    if (got[i] != site.bin[i]) return std::nullopt;
  }
  const double mu = manipulability(model, *q);
  return ReachVoxel{site.bin, site.pose, std::move(*q), mu};
}

ReachabilityMap build_rm(const ArmModel& model, const GridSpec& grid) {
  const auto sites = enumerate_voxels(grid);
  std::vector<std::optional<ReachVoxel>> slots(sites.size());
  const auto n = static_cast<long long>(sites.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (long long i = 0; i < n; ++i) {
    slots[static_cast<std::size_t>(i)] = evaluate_voxel(model, grid, sites[static_cast<std::size_t>(i)]);
  }
  return compact(grid, model, slots);
}

ReachabilityMap build_rm_serial(const ArmModel& model, const GridSpec& grid) {
  const auto sites = enumerate_voxels(grid);
  std::vector<std::optional<ReachVoxel>> slots;
  slots.reserve(sites.size());
  for (const auto& s : sites) slots.push_back(evaluate_voxel(model, grid, s));
  return compact(grid, model, slots);
}

const ReachVoxel* rm_lookup(const ReachabilityMap& map, const Pose6& pose) {
  const BinIndex key = bin_of(pose, map.grid);
  const auto it = std::lower_bound(map.voxels.begin(), map.voxels.end(), key,
                                   [](const ReachVoxel& v, const BinIndex& k) { return v.bin < k; });
  if (it == map.voxels.end() || it->bin != key) return nullptr;
  return &*it;
}

}  // namespace irmplan
