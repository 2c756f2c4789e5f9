#include "doctest.h"
#include "oracles.hpp"

#include "irmplan/errors.hpp"
#include "irmplan/regions.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace irmplan;
using namespace oracle;

namespace {

ConvexRegion unit_square() { return ConvexRegion{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}; }

}  // namespace

TEST_CASE("filter_points") {
  SUBCASE("3x3 lattice keeps the center and edge midpoints") {
    const auto pts = lattice_if(0.1, 1, [](const Point2&) { return true; });
    const auto kept = filter_points(pts, 0.1);
    CHECK(kept.size() == 5);
    CHECK(std::find(kept.begin(), kept.end(), Point2{0, 0}) != kept.end());
    CHECK(std::find(kept.begin(), kept.end(), Point2{-0.1, -0.1}) == kept.end());
  }

  SUBCASE("isolated points are removed") {
    const PointSet2 pts{{0, 0}, {5, 5}, {10, 0}};
    CHECK(filter_points(pts, 0.1).empty());
  }

  SUBCASE("matches the all-pairs reference") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      PointSet2 pts(400);
      for (auto& p : pts) p = {u(rng), u(rng)};
      CHECK(filter_points(pts, 0.1) == filter_points_serial(pts, 0.1));
    }
  }
}

TEST_CASE("cluster agrees with a breadth-first search") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    PointSet2 pts(150);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const auto clusters = cluster(pts, 0.15);
    std::set<std::set<Point2>> got;
    for (const auto& c : clusters) {
      CHECK(std::is_sorted(c.begin(), c.end()));
      got.insert({c.begin(), c.end()});
    }
    CHECK(got == bfs_components(pts, 0.15));
    for (std::size_t i = 1; i < clusters.size(); ++i) CHECK(clusters[i - 1].front() < clusters[i].front());
  }
}

TEST_CASE("convex_hull") {
  SUBCASE("square with interior and edge points") {
    const PointSet2 pts{{0, 0}, {1, 0}, {0.5, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.7}};
    const auto hull = convex_hull(pts);
    CHECK(hull.vertices.size() == 4);
    CHECK(hull.area() == doctest::Approx(1.0));
  }

  SUBCASE("random sets contain every input point") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
      PointSet2 pts(60);
      for (auto& p : pts) p = {n(rng), n(rng)};
      const auto hull = convex_hull(pts);
      CHECK(hull.area() > 0.0);
      for (const auto& p : pts) CHECK(signed_distance(hull, p) >= -1e-12);
    }
  }

  SUBCASE("degenerate input") {
    CHECK_THROWS_AS(convex_hull(PointSet2{{0, 0}, {1, 1}}), DegenerateCluster);
    CHECK_THROWS_AS(convex_hull(PointSet2{{0, 0}, {1, 1}, {2, 2}, {3, 3}}), DegenerateCluster);
    CHECK_THROWS_AS(convex_hull(PointSet2{{0, 0}, {0, 0}, {0, 0}}), DegenerateCluster);
  }
}

TEST_CASE("has_hole") {
  const double d = 0.05;
  const auto disk = lattice_if(d, 12, [](const Point2& p) { return std::hypot(p.x, p.y) <= 0.5; });
  CHECK_FALSE(has_hole(convex_hull(disk), disk, d));
  const auto ring = annulus(d, 0.3, 0.55);
  CHECK(has_hole(convex_hull(ring), ring, d));
  const PointSet2 sliver{{0, 0}, {1, 0.001}, {2, 0}};
  CHECK_FALSE(has_hole(convex_hull(sliver), sliver, d));
}

TEST_CASE("build_regions") {
  const double d = 0.05;

  SUBCASE("one filled blob is one region") {
    const auto disk = lattice_if(d, 12, [](const Point2& p) { return std::hypot(p.x, p.y) <= 0.5; });
    RegionTrace trace;
    const auto set = build_regions(disk, d, 5, 3, &trace);
    CHECK(set.layer_index == 3);
    REQUIRE(set.regions.size() == 1);
    CHECK(trace.holed_hulls.empty());
    CHECK(trace.initial.size() == disk.size());
    for (const auto& p : trace.filtered) CHECK(in_union(set.regions, p));
  }

  SUBCASE("two separated blobs give two regions") {
    auto pts = lattice_if(d, 4, [](const Point2&) { return true; });
    for (const auto& p : lattice_if(d, 4, [](const Point2&) { return true; })) pts.push_back({p.x + 2.0, p.y});
    CHECK(build_regions(pts, d, 5).regions.size() == 2);
  }

  SUBCASE("an annulus is split until no piece has a hole") {
    const auto ring = annulus(d, 0.3, 0.55);
    RegionTrace trace;
    const auto set = build_regions(ring, d, 5, 0, &trace);
    CHECK(set.regions.size() >= 2);
    CHECK_FALSE(trace.holed_hulls.empty());
    CHECK(trace.accepted == set.regions);
  }

  SUBCASE("small clusters are dropped") {
    const PointSet2 tiny{{0, 0}, {d, 0}, {0, d}, {d, d}};
    CHECK_THROWS_AS(build_regions(tiny, d, 5), EmptyRegionSet);
    CHECK_THROWS_AS(build_regions(PointSet2{}, d, 5), EmptyRegionSet);
  }

  SUBCASE("parameter validation") {
    const PointSet2 pts{{0, 0}};
    CHECK_THROWS_AS(build_regions(pts, 0.0, 5), ConfigError);
    CHECK_THROWS_AS(build_regions(pts, d, 2), ConfigError);
  }
}

TEST_CASE("signed_distance") {
  const auto sq = unit_square();
  CHECK(signed_distance(sq, {0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(signed_distance(sq, {0.5, 0.1}) == doctest::Approx(0.1));
  CHECK(signed_distance(sq, {0.5, 0.0}) == 0.0);
  CHECK(signed_distance(sq, {2.0, 0.5}) == doctest::Approx(-1.0));
  CHECK(signed_distance(sq, {2.0, 2.0}) == doctest::Approx(-std::sqrt(2.0)));

  const Point2 g_in = sd_gradient(sq, {0.5, 0.1});
  CHECK(g_in.x == doctest::Approx(0.0));
  CHECK(g_in.y == doctest::Approx(1.0));
  const Point2 g_out = sd_gradient(sq, {2.0, 2.0});
  CHECK(g_out.x == doctest::Approx(-std::sqrt(0.5)));
  CHECK(g_out.y == doctest::Approx(-std::sqrt(0.5)));

  SUBCASE("gradient matches finite differences") {
    const ConvexRegion hex{{{1, 0}, {0.5, 0.9}, {-0.5, 0.9}, {-1, 0}, {-0.5, -0.9}, {0.5, -0.9}}};
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double h = 1e-6;
    for (int t = 0; t < 200; ++t) {
      const Point2 p{u(rng), u(rng)};
      const Point2 g = sd_gradient(hex, p);
      const double fx = (signed_distance(hex, {p.x + h, p.y}) - signed_distance(hex, {p.x - h, p.y})) / (2 * h);
      const double fy = (signed_distance(hex, {p.x, p.y + h}) - signed_distance(hex, {p.x, p.y - h})) / (2 * h);
      // Skip points within a step of a kink (equidistant edges inside).
      if (std::abs(std::hypot(fx, fy) - 1.0) > 1e-4) continue;
      CHECK(std::abs(g.x - fx) < 1e-5);
      CHECK(std::abs(g.y - fy) < 1e-5);
    }
  }
}
