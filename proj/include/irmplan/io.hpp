#pragma once

#include "irmplan/irm.hpp"
#include "irmplan/layered_graph.hpp"
#include "irmplan/metrics.hpp"
#include "irmplan/refine.hpp"
#include "irmplan/regions.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace irmplan {

using Json = nlohmann::json;

/// Every artifact carries {"format_version": kFormatVersion, "kind": ...}.
inline constexpr int kFormatVersion = 1;

/// Checks format_version and kind. Throws FormatError on mismatch.
void check_header(const Json& j, const std::string& kind);

Json to_json(const GridSpec& grid);
GridSpec grid_from_json(const Json& j);

/// Voxels are stored as {bin, q, mu}; the pose is recomputed from the bin.
Json to_json(const ReachabilityMap& rm);
ReachabilityMap rm_from_json(const Json& j);

Json to_json(const InverseReachabilityMap& irm);
InverseReachabilityMap irm_from_json(const Json& j);

Json pose_to_json(const Pose6& p);
Pose6 pose_from_json(const Json& j);

/// Discrete or refined plan with the inputs needed to re-evaluate it.
struct PlanArtifact {
  std::string arm_id;
  MountOffset mount;
  BaseConfig start;
  PlanResult plan;
  /// Discrete plans: objective value and search counters.
  double total_cost = 0.0;
  SearchStats stats;
  /// Refined plans: optimizer report and the nodes whose IK fell back to the
  /// discrete solution.
  RefineResult refine;
  std::vector<std::size_t> reverted;

  bool operator==(const PlanArtifact&) const = default;
};

Json to_json(const PlanArtifact& a);
PlanArtifact plan_from_json(const Json& j);

/// One entry per layer; an empty region list marks a pinned layer.
Json regions_to_json(const std::vector<RegionSet>& regions);
std::vector<RegionSet> regions_from_json(const Json& j);

Json to_json(const MetricsReport& m, Provenance provenance);
MetricsReport metrics_from_json(const Json& j);

/// Pretty-printed with a trailing newline. Throws IOError.
void write_json_file(const std::filesystem::path& path, const Json& j);
/// Throws IOError when unreadable and FormatError when not valid JSON.
Json read_json_file(const std::filesystem::path& path);

}  // namespace irmplan
