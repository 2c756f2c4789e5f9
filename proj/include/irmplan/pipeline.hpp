#pragma once

#include "irmplan/config.hpp"
#include "irmplan/io.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace irmplan {

/// Reads IRM_PLANNER_THREADS and caps the OpenMP worker count. Returns the
/// cap, or 0 when the variable is unset. Throws ConfigError when it is not a
/// positive integer.
int apply_thread_cap_from_env();

ReachabilityMap build_rm_for(const PlannerConfig& config);

/// Built-in demo path placed for the configured arm: at the mount height for
/// planar arms, 0.25 m above it with height variation for spatial arms.
std::vector<Pose6> demo_for(const PlannerConfig& config, const std::string& name);

/// Base position that puts the arm mount directly over the first waypoint.
BaseConfig default_start(std::span<const Pose6> waypoints, const MountOffset& mount);

struct Stage1Result {
  std::vector<Pose6> waypoints;
  LayeredGraph graph;
  DiscretePath path;
  SearchStats stats;
};

/// Discretizes the trajectory at config.ds, builds the layered graph and
/// searches it. Throws UnreachableWaypoint.
Stage1Result plan_discrete(const PlannerConfig& config, const InverseReachabilityMap& irm,
                           std::span<const Pose6> trajectory, std::optional<BaseConfig> start = std::nullopt);

/// Same, on already discretized waypoints.
Stage1Result plan_waypoints(const PlannerConfig& config, const InverseReachabilityMap& irm,
                            std::vector<Pose6> waypoints, const BaseConfig& start);

struct RegionStage {
  std::vector<RegionSet> regions;
  /// Filled only when traces were requested.
  std::vector<RegionTrace> traces;
  std::vector<std::string> warnings;
};

/// Regions for every layer of the graph (OpenMP over layers). A layer where
/// extraction yields nothing gets an empty set and a warning; its node stays
/// pinned during refinement.
RegionStage extract_regions(const PlannerConfig& config, const LayeredGraph& graph, bool keep_traces = false);

struct RefineStage {
  RefineResult refine;
  PlanResult plan;
  /// Nodes whose IK at the refined base failed; they keep the discrete base
  /// and joints.
  std::vector<std::size_t> reverted;
  std::vector<std::string> warnings;
};

/// L-BFGS refinement of the discrete base path followed by IK at each
/// refined base, seeded with the discrete joints.
RefineStage refine_plan(const PlannerConfig& config, const PlanResult& discrete, const std::vector<RegionSet>& regions);

/// Target pose expressed in the arm frame of a base at `base`.
Pose6 arm_frame_target(const Pose6& world_target, const BaseConfig& base, const MountOffset& mount);

PlanResult to_plan(const Stage1Result& s1);

struct PipelineResult {
  ReachabilityMap rm;
  InverseReachabilityMap irm;
  Stage1Result stage1;
  RegionStage regions;
  RefineStage refined;
  PlanResult discrete_plan;
  MetricsReport discrete_metrics;
  MetricsReport refined_metrics;
  BaseConfig start;
  std::vector<std::string> warnings;
};

/// discretize -> graph -> search -> regions -> refine -> IK -> metrics.
PipelineResult run_pipeline(const PlannerConfig& config, std::span<const Pose6> trajectory,
                            std::optional<BaseConfig> start = std::nullopt, bool keep_traces = false);

/// Writes config.json, rm.json, irm.json, waypoints.json, discrete_plan.json,
/// regions.json, refined_plan.json, metrics_discrete.json and metrics.json.
/// Returns the written paths in that order. Throws IOError.
std::vector<std::filesystem::path> write_pipeline_artifacts(const PipelineResult& result, const PlannerConfig& config,
                                                            const std::filesystem::path& out_dir);

PlanArtifact discrete_artifact(const PipelineResult& result, const PlannerConfig& config);
PlanArtifact refined_artifact(const PipelineResult& result, const PlannerConfig& config);

}  // namespace irmplan
