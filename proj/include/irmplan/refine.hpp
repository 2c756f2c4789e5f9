#pragma once

#include "irmplan/layered_graph.hpp"
#include "irmplan/lbfgs.hpp"
#include "irmplan/regions.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace irmplan {

/// Continuous refinement of a discrete base path. Node 0 is fixed; nodes
/// whose layer has no region are pinned at their discrete value.
struct RefineProblem {
  std::vector<BaseConfig> initial;
  /// Per-layer feasible regions; an empty entry marks a pinned layer.
  std::vector<RegionSet> regions;
  /// Region constraining each node (index into regions[i].regions); nullopt
  /// for pinned nodes.
  std::vector<std::optional<std::size_t>> binding;
  double alpha = 50.0;
  CostWeights weights;
  bool anchor_end = false;

  BaseConfig anchor() const { return initial.front(); }
};

struct RefineResult {
  std::vector<BaseConfig> path;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::vector<double> cost_trace;

  bool operator==(const RefineResult&) const = default;
};

struct CostTerms {
  double length = 0.0;
  double smooth = 0.0;
  double reach = 0.0;

  double total() const { return length + smooth + reach; }
};

/// For each node, the region with the largest signed distance (deepest
/// containment, or nearest when outside all). Layers without regions give
/// nullopt.
std::vector<std::optional<std::size_t>> bind_regions(std::span<const BaseConfig> nodes,
                                                     std::span<const RegionSet> regions);

/// Assembles a problem with default binding.
RefineProblem make_refine_problem(std::vector<BaseConfig> initial, std::vector<RegionSet> regions, double alpha,
                                  CostWeights weights = {}, bool anchor_end = false);

/// Node indices that are optimization variables, in path order.
std::vector<std::size_t> free_nodes(const RefineProblem& problem);

/// Flat (x0, y0, x1, y1, ...) vector of the free nodes' initial positions.
Eigen::VectorXd initial_state(const RefineProblem& problem);

/// Full path with the free nodes taken from x.
std::vector<BaseConfig> expand_state(const RefineProblem& problem, const Eigen::VectorXd& x);

/// exp(alpha * max(0, -sd)).
double reach_penalty(double alpha, double signed_distance);

/// Length, smoothness and reach terms of a full path (weights applied).
CostTerms cost_terms(const RefineProblem& problem, std::span<const BaseConfig> path);

double total_cost(const Eigen::VectorXd& x, const RefineProblem& problem);
Eigen::VectorXd total_gradient(const Eigen::VectorXd& x, const RefineProblem& problem);

RefineResult lbfgs_minimize(const RefineProblem& problem, const LbfgsOptions& options = {});

}  // namespace irmplan
