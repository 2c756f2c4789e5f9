#include "irmplan/refine.hpp"

#include "irmplan/errors.hpp"

#include <cmath>
#include <limits>

namespace irmplan {

namespace {

const ConvexRegion* bound_region(const RefineProblem& p, std::size_t i) {
  if (!p.binding[i]) return nullptr;
  return &p.regions[i].regions[*p.binding[i]];
}

void check_problem(const RefineProblem& p) {
  if (p.initial.empty()) throw InputError("refinement needs at least one node");
  if (p.regions.size() != p.initial.size() || p.binding.size() != p.initial.size()) {
    throw InputError("refinement problem: regions/binding count must match node count");
  }
  if (!(p.alpha > 0.0)) throw InputError("penalty gain alpha must be positive");
}

// Accumulates w * unit(v) into g at node `i` (scaled by `coef`), skipping
// zero vectors where the norm has no gradient.
void add_unit(std::vector<Point2>& g, std::size_t i, double coef, double vx, double vy) {
  const double n = std::hypot(vx, vy);
  if (n == 0.0) return;
  g[i].x += coef * vx / n;
  g[i].y += coef * vy / n;
}

}  // namespace

std::vector<std::optional<std::size_t>> bind_regions(std::span<const BaseConfig> nodes,
                                                     std::span<const RegionSet> regions) {
  std::vector<std::optional<std::size_t>> binding(nodes.size());
  for (std::size_t i = 0; i < nodes.size() && i < regions.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < regions[i].regions.size(); ++r) {
      const double sd = signed_distance(regions[i].regions[r], {nodes[i].x, nodes[i].y});
      if (sd > best) {
        best = sd;
        binding[i] = r;
      }
    }
  }
  return binding;
}

RefineProblem make_refine_problem(std::vector<BaseConfig> initial, std::vector<RegionSet> regions, double alpha,
                                  CostWeights weights, bool anchor_end) {
  RefineProblem p;
  p.binding = bind_regions(initial, regions);
  p.initial = std::move(initial);
  p.regions = std::move(regions);
  p.alpha = alpha;
  p.weights = weights;
  p.anchor_end = anchor_end;
  return p;
}

std::vector<std::size_t> free_nodes(const RefineProblem& problem) {
  std::vector<std::size_t> out;
  const std::size_t n = problem.initial.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (!problem.binding[i]) continue;
    if (problem.anchor_end && i + 1 == n) continue;
    out.push_back(i);
  }
  return out;
}

Eigen::VectorXd initial_state(const RefineProblem& problem) {
  const auto idx = free_nodes(problem);
  Eigen::VectorXd x(static_cast<Eigen::Index>(2 * idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    x(static_cast<Eigen::Index>(2 * k)) = problem.initial[idx[k]].x;
    x(static_cast<Eigen::Index>(2 * k + 1)) = problem.initial[idx[k]].y;
  }
  return x;
}

std::vector<BaseConfig> expand_state(const RefineProblem& problem, const Eigen::VectorXd& x) {
  std::vector<BaseConfig> path = problem.initial;
  const auto idx = free_nodes(problem);
  if (x.size() != static_cast<Eigen::Index>(2 * idx.size())) {
    throw InputError("state vector has " + std::to_string(x.size()) + " entries, expected " +
                     std::to_string(2 * idx.size()));
  }
  for (std::size_t k = 0; k < idx.size(); ++k) {
    path[idx[k]] = {x(static_cast<Eigen::Index>(2 * k)), x(static_cast<Eigen::Index>(2 * k + 1))};
  }
  return path;
}

double reach_penalty(double alpha, double signed_distance) {
  return std::exp(alpha * std::max(0.0, -signed_distance));
}

CostTerms cost_terms(const RefineProblem& problem, std::span<const BaseConfig> path) {
  CostTerms t;
  const std::size_t n = path.size();
  for (std::size_t i = 0; i + 1 < n; ++i) t.length += path_length_cost(path[i], path[i + 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) t.smooth += smoothness_cost(path[i - 1], path[i], path[i + 1]);
  t.length *= problem.weights.length;
  t.smooth *= problem.weights.smooth;
  for (std::size_t i = 0; i < n; ++i) {
    const ConvexRegion* r = bound_region(problem, i);
    t.reach += r ? reach_penalty(problem.alpha, signed_distance(*r, {path[i].x, path[i].y})) : 1.0;
  }
  return t;
}

double total_cost(const Eigen::VectorXd& x, const RefineProblem& problem) {
  check_problem(problem);
  const auto path = expand_state(problem, x);
  return cost_terms(problem, path).total();
}

Eigen::VectorXd total_gradient(const Eigen::VectorXd& x, const RefineProblem& problem) {
  check_problem(problem);
  const auto path = expand_state(problem, x);
  const std::size_t n = path.size();
  const double wl = problem.weights.length, ws = problem.weights.smooth;
  std::vector<Point2> g(n);

  // Length: each chord pulls both of its endpoints toward each other.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double cx = path[i + 1].x - path[i].x, cy = path[i + 1].y - path[i].y;
    add_unit(g, i + 1, wl, cx, cy);
    add_unit(g, i, -wl, cx, cy);
  }
  // Smoothness: d||s_i|| / dq = u_i * [1, -2, 1] over (i-1, i, i+1).
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sx = path[i + 1].x - 2.0 * path[i].x + path[i - 1].x;
    const double sy = path[i + 1].y - 2.0 * path[i].y + path[i - 1].y;
    add_unit(g, i - 1, ws, sx, sy);
    add_unit(g, i, -2.0 * ws, sx, sy);
    add_unit(g, i + 1, ws, sx, sy);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const ConvexRegion* r = bound_region(problem, i);
    if (!r) continue;
    const Point2 p{path[i].x, path[i].y};
    const double sd = signed_distance(*r, p);
    if (sd >= 0.0) continue;
    const Point2 dsd = sd_gradient(*r, p);
    const double k = -problem.alpha * std::exp(problem.alpha * (-sd));
    g[i].x += k * dsd.x;
    g[i].y += k * dsd.y;
  }

  const auto idx = free_nodes(problem);
  Eigen::VectorXd out(static_cast<Eigen::Index>(2 * idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out(static_cast<Eigen::Index>(2 * k)) = g[idx[k]].x;
    out(static_cast<Eigen::Index>(2 * k + 1)) = g[idx[k]].y;
  }
  return out;
}

RefineResult lbfgs_minimize(const RefineProblem& problem, const LbfgsOptions& options) {
  check_problem(problem);
  const Objective objective = [&problem](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    grad = total_gradient(x, problem);
    return total_cost(x, problem);
  };
  const LbfgsReport report = minimize_lbfgs(objective, initial_state(problem), options);
  RefineResult result;
  result.path = expand_state(problem, report.x);
  result.final_cost = report.f;
  result.iterations = report.iterations;
  result.converged = report.converged;
  result.gradient_norm = report.grad_norm;
  result.cost_trace = report.cost_trace;
  return result;
}

}  // namespace irmplan
