#include "irmplan/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace irmplan {

namespace {

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd two_loop(const std::deque<CurvaturePair>& history, const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(history.size());
  for (std::size_t k = history.size(); k-- > 0;) {
    alpha[k] = history[k].rho * history[k].s.dot(q);
    q -= alpha[k] * history[k].y;
  }
  const auto& last = history.back();
  const double gamma = last.s.dot(last.y) / last.y.squaredNorm();
  Eigen::VectorXd r = gamma * q;
  for (std::size_t k = 0; k < history.size(); ++k) {
    const double beta = history[k].rho * history[k].y.dot(r);
    r += history[k].s * (alpha[k] - beta);
  }
  return -r;
}

struct StepResult {
  bool ok = false;
  Eigen::VectorXd x;
  Eigen::VectorXd g;
  double f = 0.0;
};

StepResult backtrack(const Objective& objective, const Eigen::VectorXd& x, double f, const Eigen::VectorXd& g,
                     const Eigen::VectorXd& d, double t, const LbfgsOptions& opt) {
  const double slope = g.dot(d);
  StepResult r;
  r.g.resize(x.size());
  for (int h = 0; h <= opt.max_halvings; ++h, t *= opt.shrink) {
    r.x = x + t * d;
    r.f = objective(r.x, r.g);
    if (std::isfinite(r.f) && r.f <= f + opt.armijo_c1 * t * slope) {
      r.ok = true;
      return r;
    }
  }
  return r;
}

}  // namespace

LbfgsReport minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& options) {
  LbfgsReport report;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd g(x.size());
  double f = objective(x, g);
  report.cost_trace.push_back(f);
  std::deque<CurvaturePair> history;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const double gnorm = g.norm();
    if (gnorm < options.grad_tol) break;

    Eigen::VectorXd d = history.empty() ? Eigen::VectorXd(-g) : two_loop(history, g);
    bool steepest = history.empty();
    if (g.dot(d) >= 0.0) {
      d = -g;
      steepest = true;
      history.clear();
    }
    StepResult step = backtrack(objective, x, f, g, d, steepest ? std::min(1.0, 1.0 / gnorm) : 1.0, options);
    if (!step.ok && !steepest) {
      ++report.fallbacks;
      history.clear();
      step = backtrack(objective, x, f, g, -g, std::min(1.0, 1.0 / gnorm), options);
    }
    if (!step.ok) break;

    CurvaturePair pair{step.x - x, step.g - g, 0.0};
    const double sy = pair.s.dot(pair.y);
    if (sy > 1e-12 * pair.s.norm() * pair.y.norm()) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (static_cast<int>(history.size()) > options.history) history.pop_front();
    }
    x = std::move(step.x);
    g = std::move(step.g);
    f = step.f;
    report.cost_trace.push_back(f);
    ++report.iterations;
  }

  report.grad_norm = g.norm();
  report.converged = report.grad_norm < options.grad_tol;
  report.x = std::move(x);
  report.f = f;
  return report;
}

}  // namespace irmplan
