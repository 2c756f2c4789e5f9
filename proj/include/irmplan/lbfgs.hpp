#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace irmplan {

/// Objective callback: returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
  int max_iterations = 500;
  double grad_tol = 1e-6;
  int history = 8;
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  int max_halvings = 40;

  bool operator==(const LbfgsOptions&) const = default;
};

struct LbfgsReport {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective at the start and after every accepted step.
  std::vector<double> cost_trace;
  /// Iterations that fell back to steepest descent after a failed search.
  int fallbacks = 0;
};

/// Two-loop L-BFGS with gamma-scaled initial Hessian and backtracking Armijo
/// line search. When the quasi-Newton step fails the line search, one
/// steepest-descent step is tried and the history is cleared; if that also
/// fails the run stops unconverged. Accepted steps never increase f.
LbfgsReport minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& options = {});

}  // namespace irmplan
