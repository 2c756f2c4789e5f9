#include "doctest.h"

#include "irmplan/errors.hpp"
#include "irmplan/reachability.hpp"

#include <cmath>
#include <numbers>
#include <omp.h>
#include <random>
#include <set>

using namespace irmplan;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridSpec planar_grid(double delta_p = 0.1, double radius = 1.0) { return GridSpec{delta_p, kTwoPi, radius}; }

}  // namespace

TEST_CASE("enumerate_voxels") {
  SUBCASE("unit resolution keeps the eight octant centers") {
    const auto sites = enumerate_voxels(GridSpec{1.0, kTwoPi, 1.0});
    REQUIRE(sites.size() == 8);
    for (const auto& s : sites) {
      CHECK(std::abs(s.pose.x) == 0.5);
      CHECK(s.pose.position().norm() == doctest::Approx(std::sqrt(0.75)));
    }
    CHECK(std::is_sorted(sites.begin(), sites.end(),
                         [](const VoxelSite& a, const VoxelSite& b) { return a.bin < b.bin; }));
  }

  SUBCASE("full-circle rotational step is a single bin") {
    const GridSpec g{1.0, kTwoPi, 1.0};
    CHECK(g.rotational_bins() == 1);
    CHECK(rotational_bin(3.0, g) == 0);
    CHECK(rotational_bin(-3.0, g) == 0);
    CHECK(rotational_center(0, g) == 0.0);
    const GridSpec q{1.0, kTwoPi / 4, 1.0};
    CHECK(q.rotational_bins() == 4);
    CHECK(enumerate_voxels(q).size() == 8 * 64);
  }

  SUBCASE("centers outside the sphere are excluded") {
    CHECK(enumerate_voxels(GridSpec{1.0, kTwoPi, 0.5}).empty());
  }

  SUBCASE("voxel cap and grid validation") {
    GridSpec g{0.01, kTwoPi, 1.0};
    g.voxel_cap = 1000;
    CHECK_THROWS_AS(enumerate_voxels(g), ConfigError);
    CHECK_THROWS_AS(enumerate_voxels(GridSpec{0.1, 1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(enumerate_voxels(GridSpec{-0.1, kTwoPi, 1.0}), ConfigError);
    CHECK_THROWS_AS(enumerate_voxels(GridSpec{0.1, kTwoPi, 0.0}), ConfigError);
  }
}

TEST_CASE("binning") {
  const GridSpec g{0.1, kTwoPi / 8, 1.0};
  CHECK(translational_bin(0.0, 0.1) == 0);
  CHECK(translational_bin(-1e-17, 0.1) == 0);
  CHECK(translational_bin(-0.05, 0.1) == -1);
  CHECK(translational_center(-1, 0.1) == doctest::Approx(-0.05));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(-1, 1), ang(-3.14, 3.14);
  for (int i = 0; i < 500; ++i) {
    const Pose6 p{pos(rng), pos(rng), pos(rng), ang(rng), ang(rng), ang(rng)};
    const BinIndex b = bin_of(p, g);
    const Pose6 c = bin_center(b, g);
    CHECK(bin_of(c, g) == b);
    CHECK(std::abs(p.x - c.x) <= 0.05 + 1e-12);
    CHECK(std::abs(normalize_angle(p.gamma - c.gamma)) <= g.delta_r / 2 + 1e-12);
  }
}

TEST_CASE("build_rm on the planar arm") {
  const auto arm = ArmModel::planar_two_link(0.5, 0.5);
  const GridSpec grid = planar_grid(0.1, arm.total_length());
  const auto rm = build_rm(arm, grid);
  REQUIRE_FALSE(rm.voxels.empty());
  CHECK(rm.arm_id == "planar2");

  std::set<BinIndex> seen;
  for (const auto& v : rm.voxels) {
    CHECK(seen.insert(v.bin).second);
    CHECK(v.pose.position().squaredNorm() <= grid.radius * grid.radius);
    CHECK(v.pose == bin_center(v.bin, grid));
    const Pose6 fk = forward_kinematics(arm, v.q);
    CHECK(std::abs(fk.x - v.pose.x) <= grid.delta_p / 2);
    CHECK(std::abs(fk.y - v.pose.y) <= grid.delta_p / 2);
    CHECK(std::abs(fk.z - v.pose.z) <= grid.delta_p / 2);
    CHECK(v.mu >= 0.0);
    // The plane z = 0 only meets the first z bin.
    CHECK(v.bin[2] == 0);
  }
  CHECK(std::is_sorted(rm.voxels.begin(), rm.voxels.end(),
                       [](const ReachVoxel& a, const ReachVoxel& b) { return a.bin < b.bin; }));

  SUBCASE("parallel sweep equals the serial reference for any thread count") {
    const auto serial = build_rm_serial(arm, grid);
    CHECK(serial == rm);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(3);
    CHECK(build_rm(arm, grid) == serial);
    omp_set_num_threads(saved);
  }

  SUBCASE("stored voxels survive a fresh IK from their own q") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> pick(0, rm.voxels.size() - 1);
    for (int i = 0; i < 100; ++i) {
      const auto& v = rm.voxels[pick(rng)];
      const auto q = ik_solve(arm, v.pose, v.q);
      REQUIRE(q);
      CHECK(bin_of(forward_kinematics(arm, *q), grid) == v.bin);
    }
  }

  SUBCASE("rm_lookup") {
    const auto& v = rm.voxels[rm.voxels.size() / 2];
    CHECK(rm_lookup(rm, v.pose) == &v);
    Pose6 nudged = v.pose;
    nudged.x += 0.049;
    nudged.y -= 0.049;
    nudged.gamma = 2.0;
    CHECK(rm_lookup(rm, nudged) == &v);
    CHECK(rm_lookup(rm, {3.0, 0.0, 0.0, 0, 0, 0}) == nullptr);
  }
}

TEST_CASE("voxel at full reach has zero manipulability") {
  // Links sized so full extension lands on the bin center (0.05, 0.05).
  const double reach = std::hypot(0.05, 0.05);
  const auto arm = ArmModel::planar_two_link(reach / 2, reach / 2);
  GridSpec grid = planar_grid(0.1, 0.1);
  const auto rm = build_rm(arm, grid);
  const ReachVoxel* v = rm_lookup(rm, {0.05, 0.05, 0.0, 0, 0, 0});
  REQUIRE(v != nullptr);
  CHECK(v->mu < 1e-6);
}

TEST_CASE("empty map when the sphere misses the arm's working plane") {
  const auto arm = ArmModel("offset", {{0.2, 0.0, 0.5, 0.0}, {0.2, 0.0, 0.0, 0.0}}, {{-3, 3}, {-3, 3}});
  const auto rm = build_rm(arm, GridSpec{0.05, kTwoPi, 0.3});
  CHECK(rm.voxels.empty());
}

TEST_CASE("build_rm on a spatial arm at coarse resolution") {
  const auto arm = ArmModel::desk6();
  const GridSpec grid{0.25, kTwoPi, arm.total_length()};
  const auto rm = build_rm(arm, grid);
  CHECK(rm == build_rm_serial(arm, grid));
  REQUIRE_FALSE(rm.voxels.empty());
  for (const auto& v : rm.voxels) {
    const Eigen::Isometry3d t = end_effector_transform(arm, v.q);
    CHECK((t.translation() - v.pose.position()).norm() < 1e-6);
    CHECK(Eigen::AngleAxisd(v.pose.rotation() * t.rotation().transpose()).angle() < 1e-6);
  }
}
