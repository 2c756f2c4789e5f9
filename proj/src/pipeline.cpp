#include "irmplan/pipeline.hpp"

#include "irmplan/errors.hpp"
#include "irmplan/trajectory.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace irmplan {

int apply_thread_cap_from_env() {
  const char* raw = std::getenv("IRM_PLANNER_THREADS");
  if (!raw || !*raw) return 0;
  int n = 0;
  const auto [ptr, ec] = std::from_chars(raw, raw + std::strlen(raw), n);
  if (ec != std::errc() || *ptr != '\0' || n < 1) {
    throw ConfigError(std::string("IRM_PLANNER_THREADS must be a positive integer, got '") + raw + "'");
  }
  omp_set_num_threads(n);
  return n;
}

ReachabilityMap build_rm_for(const PlannerConfig& config) { return build_rm(config.arm, config.grid); }

std::vector<Pose6> demo_for(const PlannerConfig& config, const std::string& name) {
  const bool planar = config.arm.is_planar();
  return demo_trajectory(name, planar ? config.mount.dz : config.mount.dz + 0.25, !planar);
}

BaseConfig default_start(std::span<const Pose6> waypoints, const MountOffset& mount) {
  if (waypoints.empty()) throw InputError("no waypoints");
  return {waypoints.front().x - mount.dx, waypoints.front().y - mount.dy};
}

Stage1Result plan_waypoints(const PlannerConfig& config, const InverseReachabilityMap& irm, std::vector<Pose6> waypoints,
                            const BaseConfig& start) {
  Stage1Result s;
  s.waypoints = std::move(waypoints);
  s.graph = build_graph(irm, s.waypoints, start, config.mount);
  s.path = search(s.graph, config.search_options(), &s.stats);
  return s;
}

Stage1Result plan_discrete(const PlannerConfig& config, const InverseReachabilityMap& irm,
                           std::span<const Pose6> trajectory, std::optional<BaseConfig> start) {
  auto waypoints = discretize_trajectory(trajectory, config.ds);
  const BaseConfig s = start.value_or(default_start(waypoints, config.mount));
  return plan_waypoints(config, irm, std::move(waypoints), s);
}

RegionStage extract_regions(const PlannerConfig& config, const LayeredGraph& graph, bool keep_traces) {
  const std::size_t n = graph.layers.size();
  RegionStage out;
  out.regions.resize(n);
  if (keep_traces) out.traces.resize(n);
  std::vector<std::string> failure(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long li = 0; li < count; ++li) {
    const auto i = static_cast<std::size_t>(li);
    PointSet2 points;
    points.reserve(graph.layers[i].candidates.size());
    for (const auto& c : graph.layers[i].candidates) points.push_back({c.x, c.y});
    RegionTrace* trace = keep_traces ? &out.traces[i] : nullptr;
    try {
      out.regions[i] = build_regions(points, config.delta_g, config.n_min, i, trace);
    } catch (const EmptyRegionSet& e) {
      out.regions[i] = RegionSet{i, {}};
      failure[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!failure[i].empty()) out.warnings.push_back(failure[i] + "; node pinned at its discrete position");
  }
  return out;
}

Pose6 arm_frame_target(const Pose6& world_target, const BaseConfig& base, const MountOffset& mount) {
  Pose6 local = world_target;
  local.x -= base.x + mount.dx;
  local.y -= base.y + mount.dy;
  local.z -= mount.dz;
  return local;
}

RefineStage refine_plan(const PlannerConfig& config, const PlanResult& discrete, const std::vector<RegionSet>& regions) {
  RefineStage out;
  const RefineProblem problem =
      make_refine_problem(discrete.base_path, regions, config.alpha, config.weights, config.anchor_end);
  out.refine = lbfgs_minimize(problem, config.optimizer);
  if (!out.refine.converged) {
    out.warnings.push_back("refinement stopped before reaching the gradient tolerance (|g| = " +
                           std::to_string(out.refine.gradient_norm) + " after " +
                           std::to_string(out.refine.iterations) + " iterations)");
  }

  out.plan.provenance = Provenance::kRefined;
  out.plan.targets = discrete.targets;
  const std::size_t n = discrete.targets.size();
  out.plan.base_path.resize(n);
  out.plan.joint_path.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const BaseConfig& base = out.refine.path[i];
    auto q = ik_solve(config.arm, arm_frame_target(discrete.targets[i], base, config.mount), discrete.joint_path[i]);
    if (q) {
      out.plan.base_path[i] = base;
      out.plan.joint_path[i] = std::move(*q);
    } else {
      out.plan.base_path[i] = discrete.base_path[i];
      out.plan.joint_path[i] = discrete.joint_path[i];
      out.reverted.push_back(i);
      out.warnings.push_back("node " + std::to_string(i) + ": no IK solution at the refined base; kept the discrete base");
    }
  }
  return out;
}

PlanResult to_plan(const Stage1Result& s1) {
  return PlanResult{s1.path.nodes, s1.path.joints, s1.waypoints, Provenance::kDiscrete};
}

PipelineResult run_pipeline(const PlannerConfig& config, std::span<const Pose6> trajectory,
                            std::optional<BaseConfig> start, bool keep_traces) {
  PipelineResult r;
  r.rm = build_rm_for(config);
  r.irm = build_irm(r.rm);
  auto waypoints = discretize_trajectory(trajectory, config.ds);
  r.start = start.value_or(default_start(waypoints, config.mount));
  r.stage1 = plan_waypoints(config, r.irm, std::move(waypoints), r.start);
  r.discrete_plan = to_plan(r.stage1);
  r.regions = extract_regions(config, r.stage1.graph, keep_traces);
  r.refined = refine_plan(config, r.discrete_plan, r.regions.regions);
  r.discrete_metrics = evaluate_plan(config.arm, config.mount, r.discrete_plan);
  r.refined_metrics = evaluate_plan(config.arm, config.mount, r.refined.plan);
  r.warnings = r.regions.warnings;
  r.warnings.insert(r.warnings.end(), r.refined.warnings.begin(), r.refined.warnings.end());
  return r;
}

PlanArtifact discrete_artifact(const PipelineResult& result, const PlannerConfig& config) {
  PlanArtifact a;
  a.arm_id = config.arm.id();
  a.mount = config.mount;
  a.start = result.start;
  a.plan = result.discrete_plan;
  a.total_cost = result.stage1.path.total_cost;
  a.stats = result.stage1.stats;
  return a;
}

PlanArtifact refined_artifact(const PipelineResult& result, const PlannerConfig& config) {
  PlanArtifact a;
  a.arm_id = config.arm.id();
  a.mount = config.mount;
  a.start = result.start;
  a.plan = result.refined.plan;
  a.refine = result.refined.refine;
  a.reverted = result.refined.reverted;
  return a;
}

std::vector<std::filesystem::path> write_pipeline_artifacts(const PipelineResult& result, const PlannerConfig& config,
                                                            const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IOError("cannot create " + out_dir.string() + ": " + ec.message());
  const std::vector<std::pair<std::string, Json>> files{
      {"config.json", to_json(config)},
      {"rm.json", to_json(result.rm)},
      {"irm.json", to_json(result.irm)},
      {"waypoints.json", trajectory_to_json(result.stage1.waypoints)},
      {"discrete_plan.json", to_json(discrete_artifact(result, config))},
      {"regions.json", regions_to_json(result.regions.regions)},
      {"refined_plan.json", to_json(refined_artifact(result, config))},
      {"metrics_discrete.json", to_json(result.discrete_metrics, Provenance::kDiscrete)},
      {"metrics.json", to_json(result.refined_metrics, Provenance::kRefined)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, json] : files) {
    written.push_back(out_dir / name);
    write_json_file(written.back(), json);
  }
  return written;
}

}  // namespace irmplan
