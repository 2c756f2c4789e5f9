#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace irmplan {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
  auto operator<=>(const Point2&) const = default;
};

using PointSet2 = std::vector<Point2>;

/// Strictly convex polygon, vertices counter-clockwise.
struct ConvexRegion {
  std::vector<Point2> vertices;

  double area() const;

  bool operator==(const ConvexRegion&) const = default;
};

struct RegionSet {
  std::size_t layer_index = 0;
  std::vector<ConvexRegion> regions;

  bool operator==(const RegionSet&) const = default;
};

/// Keeps points with more than two other points within delta_g (inclusive).
/// Grid-bucketed and OpenMP-parallel over points.
PointSet2 filter_points(std::span<const Point2> points, double delta_g);

/// All-pairs reference for filter_points.
PointSet2 filter_points_serial(std::span<const Point2> points, double delta_g);

/// Connected components of the graph linking points within link_radius.
/// Members are sorted lexicographically; clusters are ordered by their
/// smallest member.
std::vector<PointSet2> cluster(std::span<const Point2> points, double link_radius);

/// Andrew's monotone chain. Collinear vertices are dropped. Throws
/// DegenerateCluster when the points span no area.
ConvexRegion convex_hull(std::span<const Point2> points);

/// Rasterizes the hull at delta_g; a cell is empty when no point lies within
/// delta_g of its center. True iff some 4-connected group of empty cells
/// never touches the hull's boundary ring.
bool has_hole(const ConvexRegion& hull, std::span<const Point2> points, double delta_g);

/// Intermediate state of one build_regions run, kept for plotting.
struct RegionTrace {
  PointSet2 initial;
  PointSet2 filtered;
  std::vector<PointSet2> clusters;
  /// Hulls that failed the hole check and were split.
  std::vector<ConvexRegion> holed_hulls;
  std::vector<ConvexRegion> accepted;
  /// Points each accepted region was built from.
  std::vector<PointSet2> accepted_points;
  std::size_t dropped_clusters = 0;
};

/// filter -> cluster -> hull. A holed cluster is cut across its principal
/// axis through the centroid of its enclosed cavity, and the pieces are
/// re-hulled until every piece is hole-free. Clusters with at
/// most n_min points, or collinear ones, are dropped. Throws EmptyRegionSet
/// when nothing survives.
RegionSet build_regions(std::span<const Point2> points, double delta_g, int n_min,
                        std::size_t layer_index = 0, RegionTrace* trace = nullptr);

/// Clustering link radius used by build_regions.
inline double link_radius_for(double delta_g) { return 1.5 * delta_g; }

/// Positive inside (distance to the boundary), negative outside.
double signed_distance(const ConvexRegion& region, const Point2& p);

/// Gradient of signed_distance: inward normal of the nearest edge inside,
/// unit vector toward the nearest boundary point outside.
Point2 sd_gradient(const ConvexRegion& region, const Point2& p);

}  // namespace irmplan
