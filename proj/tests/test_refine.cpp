#include "doctest.h"
#include "oracles.hpp"

#include "irmplan/errors.hpp"
#include "irmplan/metrics.hpp"
#include "irmplan/refine.hpp"

#include <cmath>
#include <random>

using namespace irmplan;
using namespace oracle;

TEST_CASE("reach_penalty") {
  CHECK(reach_penalty(50.0, 0.2) == 1.0);
  CHECK(reach_penalty(50.0, 0.0) == 1.0);
  CHECK(reach_penalty(50.0, -0.01) == doctest::Approx(std::exp(0.5)));
}

TEST_CASE("free nodes exclude the anchor, pinned nodes and an anchored end") {
  std::vector<BaseConfig> nodes{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  std::vector<RegionSet> regions{{0, {box(-1, -1, 1, 1)}}, {1, {}}, {2, {box(1, -1, 3, 1)}}, {3, {box(2, -1, 4, 1)}}};
  auto p = make_refine_problem(nodes, regions, 50.0);
  CHECK(free_nodes(p) == std::vector<std::size_t>{2, 3});
  CHECK(!p.binding[1]);
  p.anchor_end = true;
  CHECK(free_nodes(p) == std::vector<std::size_t>{2});
  CHECK(expand_state(p, initial_state(p)) == nodes);
  CHECK_THROWS_AS(expand_state(p, Eigen::VectorXd::Zero(3)), InputError);
}

TEST_CASE("binding picks the deepest region") {
  std::vector<BaseConfig> nodes{{0.9, 0.5}};
  std::vector<RegionSet> regions{{0, {box(0, 0, 1, 1), box(0.5, 0, 2, 1)}}};
  const auto b = bind_regions(nodes, regions);
  REQUIRE(b[0]);
  CHECK(*b[0] == 1);
}

TEST_CASE("total_cost matches the term-by-term definition") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto prob = random_problem(rng);
    const Eigen::VectorXd x = initial_state(prob);
    const double want = naive_cost(expand_state(prob, x), prob);
    CHECK(total_cost(x, prob) == doctest::Approx(want).epsilon(1e-12));
    const auto terms = cost_terms(prob, expand_state(prob, x));
    CHECK(terms.total() == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const auto prob = random_problem(rng);
    const Eigen::VectorXd x = initial_state(prob);
    if (x.size() == 0) continue;
    const Eigen::VectorXd g = total_gradient(x, prob);
    Eigen::VectorXd fd(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      fd(k) = (total_cost(xp, prob) - total_cost(xm, prob)) / (2 * h);
    }
    const double rel = (g - fd).norm() / std::max(1.0, fd.norm());
    CHECK(rel < 1e-5);
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("minimize_lbfgs") {
  SUBCASE("convex quadratic reaches its minimizer") {
    Eigen::MatrixXd a(3, 3);
    a << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
    const Eigen::VectorXd b = Eigen::Vector3d(1, -2, 0.5);
    const Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      g = a * x - b;
      return 0.5 * x.dot(a * x) - b.dot(x);
    };
    const auto r = minimize_lbfgs(f, Eigen::Vector3d(5, 5, 5));
    CHECK(r.converged);
    CHECK((r.x - a.ldlt().solve(b)).norm() < 1e-6);
    for (std::size_t i = 1; i < r.cost_trace.size(); ++i) CHECK(r.cost_trace[i] <= r.cost_trace[i - 1]);
  }

  SUBCASE("Rosenbrock") {
    const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      g.resize(2);
      g(0) = -2 * (1 - x(0)) - 400 * x(0) * (x(1) - x(0) * x(0));
      g(1) = 200 * (x(1) - x(0) * x(0));
      return std::pow(1 - x(0), 2) + 100 * std::pow(x(1) - x(0) * x(0), 2);
    };
    LbfgsOptions opt;
    opt.max_iterations = 2000;
    const auto r = minimize_lbfgs(f, Eigen::Vector2d(-1.2, 1.0), opt);
    CHECK(r.converged);
    CHECK((r.x - Eigen::Vector2d(1, 1)).norm() < 1e-5);
  }

  SUBCASE("zero-dimensional problem is already converged") {
    const Objective f = [](const Eigen::VectorXd&, Eigen::VectorXd& g) {
      g.resize(0);
      return 3.0;
    };
    const auto r = minimize_lbfgs(f, Eigen::VectorXd(0));
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.f == 3.0);
  }
}

TEST_CASE("refinement") {
  SUBCASE("straight path inside its regions is a fixed point") {
    std::vector<BaseConfig> nodes;
    std::vector<RegionSet> regions;
    // Dyadic spacing keeps the second differences exactly zero.
    for (std::size_t i = 0; i < 6; ++i) {
      const double x = 0.25 * static_cast<double>(i);
      nodes.push_back({x, 0.0});
      regions.push_back({i, {box(x - 0.1, -0.1, x + 0.1, 0.1)}});
    }
    const auto prob = make_refine_problem(nodes, regions, 50.0, {}, true);
    const auto r = lbfgs_minimize(prob);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.path == nodes);
  }

  SUBCASE("zig-zag is straightened and stays feasible") {
    for (bool anchor_end : {false, true}) {
      const auto prob = zigzag_problem(12, 0.4, anchor_end);
      const auto r = lbfgs_minimize(prob);
      CHECK(r.path.front() == prob.initial.front());
      if (anchor_end) CHECK(r.path.back() == prob.initial.back());
      CHECK(r.final_cost <= total_cost(initial_state(prob), prob));
      CHECK(base_smoothness(r.path) * 10.0 <= base_smoothness(prob.initial));
      for (std::size_t i = 1; i < r.path.size(); ++i) {
        CHECK(signed_distance(prob.regions[i].regions[0], {r.path[i].x, r.path[i].y}) >= -1e-6);
      }
      for (std::size_t i = 1; i < r.cost_trace.size(); ++i) CHECK(r.cost_trace[i] <= r.cost_trace[i - 1]);
    }
  }

  SUBCASE("pinned nodes do not move") {
    auto prob = zigzag_problem(8, 0.3, false);
    prob.regions[4].regions.clear();
    prob.binding[4].reset();
    const auto r = lbfgs_minimize(prob);
    CHECK(r.path[4] == prob.initial[4]);
    CHECK(r.path[0] == prob.initial[0]);
  }

  SUBCASE("infeasible start is pulled into its region") {
    std::vector<BaseConfig> nodes{{0, 0}, {1, 0.5}, {2, 0}};
    std::vector<RegionSet> regions{{0, {box(-0.1, -0.1, 0.1, 0.1)}}, {1, {box(0.9, -0.1, 1.1, 0.1)}}, {2, {box(1.9, -0.1, 2.1, 0.1)}}};
    const auto r = lbfgs_minimize(make_refine_problem(nodes, regions, 50.0));
    CHECK(signed_distance(regions[1].regions[0], {r.path[1].x, r.path[1].y}) >= -1e-6);
  }

  SUBCASE("invalid problems") {
    RefineProblem empty;
    CHECK_THROWS_AS(lbfgs_minimize(empty), InputError);
    auto prob = zigzag_problem(4, 0.1, false);
    prob.alpha = 0.0;
    CHECK_THROWS_AS(lbfgs_minimize(prob), InputError);
  }
}
