#include "irmplan/layered_graph.hpp"

#include "irmplan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>

namespace irmplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BaseConfig node_at(const LayeredGraph& g, std::size_t layer, std::size_t idx) {
  const auto& c = g.layers[layer].candidates[idx];
  return {c.x, c.y};
}

DiscretePath assemble_path(const LayeredGraph& graph, std::vector<std::size_t> choice, double cost) {
  DiscretePath path;
  path.total_cost = cost;
  path.nodes.reserve(choice.size());
  path.joints.reserve(choice.size());
  for (std::size_t i = 0; i < choice.size(); ++i) {
    const auto& c = graph.layers[i].candidates[choice[i]];
    path.nodes.push_back({c.x, c.y});
    path.joints.push_back(c.q);
  }
  path.choice = std::move(choice);
  return path;
}

void check_graph(const LayeredGraph& graph) {
  if (graph.layers.empty()) throw InputError("layered graph has no layers");
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    if (graph.layers[i].candidates.empty()) throw UnreachableWaypoint(graph.layers[i].waypoint_index);
  }
}

DiscretePath search_label(const LayeredGraph& graph, const SearchOptions& opt, SearchStats* stats) {
  const std::size_t n = graph.layers.size();
  const auto& w = opt.weights;
  std::vector<std::vector<double>> cost(n);
  std::vector<std::vector<long>> pred(n);
  for (std::size_t i = 0; i < n; ++i) {
    cost[i].assign(graph.layers[i].candidates.size(), kInf);
    pred[i].assign(graph.layers[i].candidates.size(), -1);
  }

  // (cost, layer, candidate); ties resolve to the lower (layer, candidate).
  using Entry = std::tuple<double, std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  SearchStats local;

  for (std::size_t j = 0; j < cost[0].size(); ++j) {
    cost[0][j] = opt.anchor_start ? w.length * path_length_cost(graph.start, node_at(graph, 0, j)) : 0.0;
    queue.emplace(cost[0][j], 0, j);
    ++local.pushes;
  }

  while (!queue.empty()) {
    const auto [c_head, i, j] = queue.top();
    queue.pop();
    ++local.pops;
    if (c_head > cost[i][j]) {
      ++local.stale_pops;
      continue;
    }
    ++local.expansions;
    if (i + 1 >= n) continue;
    const BaseConfig prev = i == 0 ? graph.start : node_at(graph, i - 1, static_cast<std::size_t>(pred[i][j]));
    const BaseConfig cur = node_at(graph, i, j);
    auto& next_cost = cost[i + 1];
    for (std::size_t k = 0; k < next_cost.size(); ++k) {
      const BaseConfig next = node_at(graph, i + 1, k);
      const double edge = w.length * path_length_cost(cur, next) + w.smooth * smoothness_cost(prev, cur, next);
      const double c_new = cost[i][j] + edge;
      ++local.relaxations;
      if (c_new < next_cost[k]) {
        next_cost[k] = c_new;
        pred[i + 1][k] = static_cast<long>(j);
        queue.emplace(c_new, i + 1, k);
        ++local.pushes;
      }
    }
  }

  const auto& last = cost[n - 1];
  const auto best = static_cast<std::size_t>(std::min_element(last.begin(), last.end()) - last.begin());
  std::vector<std::size_t> choice(n);
  choice[n - 1] = best;
  for (std::size_t i = n - 1; i > 0; --i) choice[i - 1] = static_cast<std::size_t>(pred[i][choice[i]]);
  if (stats) *stats = local;
  return assemble_path(graph, std::move(choice), last[best]);
}

// Lifted DP: the state for layer i is (node, predecessor index in layer i-1),
// which makes the three-point smoothness term exact.
DiscretePath search_exact(const LayeredGraph& graph, const SearchOptions& opt) {
  const std::size_t n = graph.layers.size();
  const auto& w = opt.weights;
  const std::size_t m0 = graph.layers[0].candidates.size();

  // cost[j * mp + p]: best cost reaching node j of layer i via predecessor p.
  std::vector<double> cost(m0);
  for (std::size_t j = 0; j < m0; ++j) {
    cost[j] = opt.anchor_start ? w.length * path_length_cost(graph.start, node_at(graph, 0, j)) : 0.0;
  }
  std::size_t mp = 1;  // the virtual start is the only predecessor of layer 0
  std::vector<std::vector<std::size_t>> back(n);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t mi = graph.layers[i].candidates.size();
    const std::size_t mn = graph.layers[i + 1].candidates.size();
    std::vector<double> next(mn * mi, kInf);
    std::vector<std::size_t> arg(mn * mi, 0);
    for (std::size_t j = 0; j < mi; ++j) {
      const BaseConfig cur = node_at(graph, i, j);
      for (std::size_t p = 0; p < mp; ++p) {
        const double base = cost[j * mp + p];
        if (base == kInf) continue;
        const BaseConfig prev = i == 0 ? graph.start : node_at(graph, i - 1, p);
        for (std::size_t k = 0; k < mn; ++k) {
          const BaseConfig nx = node_at(graph, i + 1, k);
          const double c = base + w.length * path_length_cost(cur, nx) + w.smooth * smoothness_cost(prev, cur, nx);
          if (c < next[k * mi + j]) {
            next[k * mi + j] = c;
            arg[k * mi + j] = p;
          }
        }
      }
    }
    back[i + 1] = std::move(arg);
    cost = std::move(next);
    mp = mi;
  }

  const auto best_it = std::min_element(cost.begin(), cost.end());
  const double best_cost = *best_it;
  std::size_t flat = static_cast<std::size_t>(best_it - cost.begin());
  std::vector<std::size_t> choice(n);
  // Walk back: at layer i the flat index is node * |layer i-1| + pred.
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t mprev = graph.layers[i - 1].candidates.size();
    choice[i] = flat / mprev;
    const std::size_t p = flat % mprev;
    choice[i - 1] = p;
    if (i - 1 > 0) {
      const std::size_t mpp = graph.layers[i - 2].candidates.size();
      flat = p * mpp + back[i][flat];
    }
  }
  if (n == 1) choice[0] = flat;
  return assemble_path(graph, std::move(choice), best_cost);
}

}  // namespace

std::vector<Pose6> discretize_trajectory(std::span<const Pose6> poses, double ds) {
  if (poses.size() < 2) throw InputError("trajectory needs at least 2 poses");
  if (!(ds > 0.0) || !std::isfinite(ds)) throw InputError("ds must be positive");

  std::vector<double> cum(poses.size(), 0.0);
  for (std::size_t i = 1; i < poses.size(); ++i) {
    cum[i] = cum[i - 1] + (poses[i].position() - poses[i - 1].position()).norm();
  }
  const double total = cum.back();
  if (!(total > 0.0)) throw InputError("trajectory has zero total length");

  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(total / ds - 1e-9)));
  std::vector<Pose6> out;
  out.reserve(steps + 1);
  out.push_back(poses.front());
  std::size_t seg = 0;
  for (std::size_t m = 1; m < steps; ++m) {
    const double s = total * static_cast<double>(m) / static_cast<double>(steps);
    while (seg + 2 < poses.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
    const Pose6& a = poses[seg];
    const Pose6& b = poses[seg + 1];
    auto lerp = [t](double u, double v) { return u + t * (v - u); };
    auto slerp_angle = [t](double u, double v) { return normalize_angle(u + t * normalize_angle(v - u)); };
    out.push_back({lerp(a.x, b.x), lerp(a.y, b.y), lerp(a.z, b.z), slerp_angle(a.alpha, b.alpha),
                   slerp_angle(a.beta, b.beta), slerp_angle(a.gamma, b.gamma)});
  }
  out.push_back(poses.back());
  return out;
}

double path_length_cost(const BaseConfig& a, const BaseConfig& b) { return std::hypot(b.x - a.x, b.y - a.y); }

double smoothness_cost(const BaseConfig& prev, const BaseConfig& cur, const BaseConfig& next) {
  return std::hypot(next.x - 2.0 * cur.x + prev.x, next.y - 2.0 * cur.y + prev.y);
}

LayeredGraph build_graph(const InverseReachabilityMap& irm, std::span<const Pose6> trajectory,
                         const BaseConfig& start, const MountOffset& mount) {
  LayeredGraph graph;
  graph.start = start;
  graph.layers.resize(trajectory.size());
  const auto n = static_cast<long long>(trajectory.size());
#pragma omp parallel for schedule(dynamic)
  for (long long li = 0; li < n; ++li) {
    const auto i = static_cast<std::size_t>(li);
    auto candidates = query_irm(irm, trajectory[i], mount);
    // Same base cell: keep the most dexterous arm configuration.
    std::stable_sort(candidates.begin(), candidates.end(), [](const BaseCandidate& a, const BaseCandidate& b) {
      if (a.x != b.x) return a.x < b.x;
      if (a.y != b.y) return a.y < b.y;
      return a.mu > b.mu;
    });
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](const BaseCandidate& a, const BaseCandidate& b) { return a.x == b.x && a.y == b.y; }),
                     candidates.end());
    graph.layers[i] = Layer{i, trajectory[i], std::move(candidates)};
  }
  for (const auto& layer : graph.layers) {
    if (layer.candidates.empty()) throw UnreachableWaypoint(layer.waypoint_index);
  }
  return graph;
}

double evaluate_path_cost(const LayeredGraph& graph, std::span<const std::size_t> choice, const SearchOptions& options) {
  const auto& w = options.weights;
  double total = 0.0;
  BaseConfig prev = graph.start;
  BaseConfig cur = node_at(graph, 0, choice[0]);
  if (options.anchor_start) total += w.length * path_length_cost(graph.start, cur);
  for (std::size_t i = 0; i + 1 < choice.size(); ++i) {
    const BaseConfig next = node_at(graph, i + 1, choice[i + 1]);
    total += w.length * path_length_cost(cur, next) + w.smooth * smoothness_cost(prev, cur, next);
    prev = cur;
    cur = next;
  }
  return total;
}

DiscretePath search(const LayeredGraph& graph, const SearchOptions& options, SearchStats* stats) {
  check_graph(graph);
  if (options.exact_smoothness) {
    if (stats) *stats = {};
    return search_exact(graph, options);
  }
  return search_label(graph, options, stats);
}

}  // namespace irmplan
