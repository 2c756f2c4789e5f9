#include "doctest.h"

#include "irmplan/irm.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace irmplan;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const ReachabilityMap& planar_rm() {
  static const ReachabilityMap rm = build_rm(ArmModel::planar_two_link(0.5, 0.5), GridSpec{0.1, kTwoPi, 1.0});
  return rm;
}

}  // namespace

TEST_CASE("build_irm partitions the reachability map") {
  const auto& rm = planar_rm();
  const auto irm = build_irm(rm);
  CHECK(irm.grid == rm.grid);
  CHECK(irm.arm_id == rm.arm_id);
  CHECK(irm.entry_count() == rm.voxels.size());

  for (const auto& v : rm.voxels) {
    const auto it = irm.index.find(irm_key(v.pose, rm.grid));
    REQUIRE(it != irm.index.end());
    const auto hits = std::count_if(it->second.begin(), it->second.end(), [&](const IrmEntry& e) {
      return e.x_r == -v.pose.x && e.y_r == -v.pose.y && e.q == v.q && e.mu == v.mu;
    });
    CHECK(hits == 1);
  }
  for (const auto& [key, entries] : irm.index) {
    CHECK(std::is_sorted(entries.begin(), entries.end(), [](const IrmEntry& a, const IrmEntry& b) {
      return a.x_r != b.x_r ? a.x_r < b.x_r : a.y_r < b.y_r;
    }));
  }
}

TEST_CASE("single-voxel map inverts to its negated offset") {
  ReachabilityMap rm;
  rm.grid = GridSpec{0.1, kTwoPi, 1.0};
  rm.arm_id = "toy";
  const BinIndex bin{3, 0, 0, 0, 0, 0};
  rm.voxels.push_back({bin, bin_center(bin, rm.grid), JointConfig({0.1, 0.2}), 0.3});
  const auto irm = build_irm(rm);
  REQUIRE(irm.index.size() == 1);
  const auto& e = irm.index.begin()->second.front();
  CHECK(e.x_r == doctest::Approx(-0.35));
  CHECK(e.y_r == doctest::Approx(-0.05));
  const auto c = query_irm(irm, {1.0, 2.0, 0.04, 0, 0, 0});
  REQUIRE(c.size() == 1);
  CHECK(c[0].x == doctest::Approx(0.65));
  CHECK(c[0].y == doctest::Approx(1.95));
  CHECK(query_irm(irm, {1.0, 2.0, 0.14, 0, 0, 0}).empty());
}

TEST_CASE("query_irm") {
  const auto& rm = planar_rm();
  const auto irm = build_irm(rm);
  const MountOffset mount{0.1, -0.05, 0.5};

  SUBCASE("empty map gives no candidates") {
    InverseReachabilityMap empty{rm.grid, "planar2", {}};
    CHECK(query_irm(empty, {0, 0, 0, 0, 0, 0}).empty());
  }

  SUBCASE("wrong height gives no candidates") {
    CHECK(query_irm(irm, {0.3, 0.3, 0.0, 0, 0, 0}, mount).empty());
  }

  SUBCASE("arm at each candidate reaches the target within one bin") {
    const auto arm = ArmModel::planar_two_link(0.5, 0.5);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> xy(-2.0, 2.0);
    int checked = 0;
    for (int t = 0; t < 20; ++t) {
      const Pose6 target{xy(rng), xy(rng), mount.dz, 0, 0, 0};
      const auto cands = query_irm(irm, target, mount);
      CHECK(cands.size() == irm.index.begin()->second.size());
      for (const auto& c : cands) {
        const Eigen::Isometry3d world = arm_base_transform(c.x, c.y, mount) * end_effector_transform(arm, c.q);
        const Eigen::Vector3d err = world.translation() - target.position();
        CHECK(std::abs(err.x()) <= rm.grid.delta_p + 1e-9);
        CHECK(std::abs(err.y()) <= rm.grid.delta_p + 1e-9);
        CHECK(std::abs(err.z()) <= rm.grid.delta_p + 1e-9);
        ++checked;
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("arm_base_transform") {
  const auto t = arm_base_transform(1.0, 2.0, {0.1, 0.2, 0.3});
  CHECK(t.translation().isApprox(Eigen::Vector3d(1.1, 2.2, 0.3)));
  CHECK(t.linear().isIdentity());
}
