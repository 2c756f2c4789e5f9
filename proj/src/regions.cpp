#include "irmplan/regions.hpp"

#include "irmplan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>

namespace irmplan {

namespace {

// Inclusive radius checks on lattice data need a little slack: spacing
// delta_g computed from coordinates is rarely exactly delta_g.
constexpr double kRadiusSlack = 1e-9;

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist2(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Uniform bucket grid for fixed-radius neighbor queries.
class BucketGrid {
 public:
  BucketGrid(std::span<const Point2> points, double cell) : points_(points), cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) buckets_[key(cell_of(points[i].x), cell_of(points[i].y))].push_back(i);
  }

  /// Calls fn(j) for every point j within radius r of p (r <= cell).
  template <typename Fn>
  void for_each_within(const Point2& p, double r, Fn&& fn) const {
    const double r2 = r * r;
    const long cx = cell_of(p.x), cy = cell_of(p.y);
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        const auto it = buckets_.find(key(cx + dx, cy + dy));
        if (it == buckets_.end()) continue;
        for (std::size_t j : it->second) {
          if (dist2(points_[j], p) <= r2) fn(j);
        }
      }
    }
  }

  bool any_within(const Point2& p, double r) const {
    bool found = false;
    const double r2 = r * r;
    const long cx = cell_of(p.x), cy = cell_of(p.y);
    for (long dx = -1; dx <= 1 && !found; ++dx) {
      for (long dy = -1; dy <= 1 && !found; ++dy) {
        const auto it = buckets_.find(key(cx + dx, cy + dy));
        if (it == buckets_.end()) continue;
        for (std::size_t j : it->second) {
          if (dist2(points_[j], p) <= r2) {
            found = true;
            break;
          }
        }
      }
    }
    return found;
  }

 private:
  long cell_of(double v) const { return static_cast<long>(std::floor(v / cell_)); }
  static std::uint64_t key(long cx, long cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
  }

  std::span<const Point2> points_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

bool inside_hull(const ConvexRegion& hull, const Point2& p) {
  const auto& v = hull.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[i], v[(i + 1) % v.size()], p) < -1e-12) return false;
  }
  return true;
}

std::optional<Point2> find_cavity(const ConvexRegion& hull, std::span<const Point2> points, double delta_g);

// Cuts across the principal axis of pts through a given point.
std::pair<PointSet2, PointSet2> split_principal(const PointSet2& pts, Point2 through) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : pts) {
    sxx += (p.x - cx) * (p.x - cx);
    sxy += (p.x - cx) * (p.y - cy);
    syy += (p.y - cy) * (p.y - cy);
  }
  double ax = 1.0, ay = 0.0;
  if (std::abs(sxy) > 1e-12 * (sxx + syy)) {
    const double lambda = 0.5 * (sxx + syy) + std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
    ax = sxy;
    ay = lambda - sxx;
  } else if (syy > sxx) {
    ax = 0.0;
    ay = 1.0;
  }
  PointSet2 lo, hi;
  for (const auto& p : pts) {
    ((p.x - through.x) * ax + (p.y - through.y) * ay < 0.0 ? lo : hi).push_back(p);
  }
  return {std::move(lo), std::move(hi)};
}

struct RegionBuilder {
  double delta_g;
  int n_min;
  RegionTrace* trace;
  std::vector<ConvexRegion> accepted;

  void drop() {
    if (trace) ++trace->dropped_clusters;
  }

  void process(const PointSet2& c) {
    if (static_cast<int>(c.size()) <= n_min) return drop();
    ConvexRegion hull;
    try {
      hull = convex_hull(c);
    } catch (const DegenerateCluster&) {
      return drop();
    }
    const auto cavity = find_cavity(hull, c, delta_g);
    if (!cavity) {
      accepted.push_back(hull);
      if (trace) {
        trace->accepted.push_back(std::move(hull));
        trace->accepted_points.push_back(c);
      }
      return;
    }
    if (trace) trace->holed_hulls.push_back(hull);
    auto [lo, hi] = split_principal(c, *cavity);
    process(lo);
    process(hi);
  }
};

}  // namespace

double ConvexRegion::area() const {
  double a = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& p = vertices[i];
    const auto& q = vertices[(i + 1) % vertices.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

PointSet2 filter_points(std::span<const Point2> points, double delta_g) {
  const double r = delta_g * (1.0 + kRadiusSlack);
  const BucketGrid grid(points, r);
  std::vector<char> keep(points.size(), 0);
  const auto n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(static)
  for (long long li = 0; li < n; ++li) {
    const auto i = static_cast<std::size_t>(li);
    int count = 0;
    grid.for_each_within(points[i], r, [&](std::size_t j) { count += (j != i); });
    keep[i] = count > 2;
  }
  PointSet2 out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i]) out.push_back(points[i]);
  }
  return out;
}

PointSet2 filter_points_serial(std::span<const Point2> points, double delta_g) {
  const double r = delta_g * (1.0 + kRadiusSlack);
  PointSet2 out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    int count = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i && dist2(points[i], points[j]) <= r * r) ++count;
    }
    if (count > 2) out.push_back(points[i]);
  }
  return out;
}

std::vector<PointSet2> cluster(std::span<const Point2> points, double link_radius) {
  const double r = link_radius * (1.0 + kRadiusSlack);
  const BucketGrid grid(points, r);
  DisjointSets sets(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    grid.for_each_within(points[i], r, [&](std::size_t j) { sets.unite(i, j); });
  }
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<PointSet2> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto root = sets.find(i);
    auto [it, inserted] = slot.emplace(root, out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(points[i]);
  }
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end(), [](const PointSet2& a, const PointSet2& b) { return a.front() < b.front(); });
  return out;
}

ConvexRegion convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateCluster("cluster has fewer than 3 distinct points");

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateCluster("cluster points are collinear");
  return ConvexRegion{std::move(hull)};
}

namespace {

// Centroid of the first empty raster component enclosed by occupied cells.
std::optional<Point2> find_cavity(const ConvexRegion& hull, std::span<const Point2> points, double delta_g) {
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  for (const auto& v : hull.vertices) {
    minx = std::min(minx, v.x);
    miny = std::min(miny, v.y);
    maxx = std::max(maxx, v.x);
    maxy = std::max(maxy, v.y);
  }
  const auto nx = static_cast<long>(std::max(1.0, std::ceil((maxx - minx) / delta_g - 1e-9)));
  const auto ny = static_cast<long>(std::max(1.0, std::ceil((maxy - miny) / delta_g - 1e-9)));
  const double r = delta_g * (1.0 + kRadiusSlack);
  const BucketGrid grid(points, r);

  // 0 = outside hull, 1 = inside and occupied, 2 = inside and empty.
  std::vector<unsigned char> state(static_cast<std::size_t>(nx * ny), 0);
  auto at = [&](long i, long j) -> unsigned char& { return state[static_cast<std::size_t>(j * nx + i)]; };
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const Point2 c{minx + (static_cast<double>(i) + 0.5) * delta_g, miny + (static_cast<double>(j) + 0.5) * delta_g};
      if (!inside_hull(hull, c)) continue;
      at(i, j) = grid.any_within(c, r) ? 1 : 2;
    }
  }

  std::vector<char> seen(state.size(), 0);
  constexpr long kDi[4] = {1, -1, 0, 0};
  constexpr long kDj[4] = {0, 0, 1, -1};
  for (long j0 = 0; j0 < ny; ++j0) {
    for (long i0 = 0; i0 < nx; ++i0) {
      const auto s0 = static_cast<std::size_t>(j0 * nx + i0);
      if (state[s0] != 2 || seen[s0]) continue;
      bool touches_ring = false;
      double sx = 0.0, sy = 0.0;
      long cells = 0;
      std::deque<std::pair<long, long>> queue{{i0, j0}};
      seen[s0] = 1;
      while (!queue.empty()) {
        const auto [i, j] = queue.front();
        queue.pop_front();
        sx += minx + (static_cast<double>(i) + 0.5) * delta_g;
        sy += miny + (static_cast<double>(j) + 0.5) * delta_g;
        ++cells;
        for (int d = 0; d < 4; ++d) {
          const long ni = i + kDi[d], nj = j + kDj[d];
          if (ni < 0 || nj < 0 || ni >= nx || nj >= ny || at(ni, nj) == 0) {
            touches_ring = true;
            continue;
          }
          const auto s = static_cast<std::size_t>(nj * nx + ni);
          if (state[s] == 2 && !seen[s]) {
            seen[s] = 1;
            queue.emplace_back(ni, nj);
          }
        }
      }
      if (!touches_ring) return Point2{sx / static_cast<double>(cells), sy / static_cast<double>(cells)};
    }
  }
  return std::nullopt;
}

}  // namespace

bool has_hole(const ConvexRegion& hull, std::span<const Point2> points, double delta_g) {
  return find_cavity(hull, points, delta_g).has_value();
}

RegionSet build_regions(std::span<const Point2> points, double delta_g, int n_min, std::size_t layer_index,
                        RegionTrace* trace) {
  if (!(delta_g > 0.0)) throw ConfigError("delta_g must be positive");
  if (n_min < 3) throw ConfigError("n_min must be at least 3");
  const PointSet2 filtered = filter_points(points, delta_g);
  const auto clusters = cluster(filtered, link_radius_for(delta_g));
  if (trace) {
    trace->initial.assign(points.begin(), points.end());
    trace->filtered = filtered;
    trace->clusters = clusters;
  }
  RegionBuilder builder{delta_g, n_min, trace, {}};
  for (const auto& c : clusters) builder.process(c);
  if (builder.accepted.empty()) {
    throw EmptyRegionSet("layer " + std::to_string(layer_index) + ": no cluster survived region extraction (" +
                         std::to_string(points.size()) + " points, " + std::to_string(filtered.size()) +
                         " after filtering)");
  }
  return RegionSet{layer_index, std::move(builder.accepted)};
}

double signed_distance(const ConvexRegion& region, const Point2& p) {
  const auto& v = region.vertices;
  double min_line = std::numeric_limits<double>::infinity();
  double min_seg2 = std::numeric_limits<double>::infinity();
  bool inside = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double len = std::hypot(ex, ey);
    const double d_line = (ex * (p.y - a.y) - ey * (p.x - a.x)) / len;
    if (d_line < 0.0) inside = false;
    min_line = std::min(min_line, d_line);
    const double t = std::clamp(((p.x - a.x) * ex + (p.y - a.y) * ey) / (len * len), 0.0, 1.0);
    min_seg2 = std::min(min_seg2, dist2(p, {a.x + t * ex, a.y + t * ey}));
  }
  return inside ? min_line : -std::sqrt(min_seg2);
}

Point2 sd_gradient(const ConvexRegion& region, const Point2& p) {
  const auto& v = region.vertices;
  double min_line = std::numeric_limits<double>::infinity();
  Point2 inward{};
  double min_seg2 = std::numeric_limits<double>::infinity();
  Point2 nearest{};
  bool inside = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double len = std::hypot(ex, ey);
    const double d_line = (ex * (p.y - a.y) - ey * (p.x - a.x)) / len;
    if (d_line < 0.0) inside = false;
    if (d_line < min_line) {
      min_line = d_line;
      inward = {-ey / len, ex / len};
    }
    const double t = std::clamp(((p.x - a.x) * ex + (p.y - a.y) * ey) / (len * len), 0.0, 1.0);
    const Point2 c{a.x + t * ex, a.y + t * ey};
    const double d2 = dist2(p, c);
    if (d2 < min_seg2) {
      min_seg2 = d2;
      nearest = c;
    }
  }
  if (inside) return inward;
  const double d = std::sqrt(min_seg2);
  return {(nearest.x - p.x) / d, (nearest.y - p.y) / d};
}

}  // namespace irmplan
