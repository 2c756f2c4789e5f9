#pragma once

#include "irmplan/io.hpp"

#include <filesystem>

namespace irmplan {

/// Every tunable of the two-stage planner.
struct PlannerConfig {
  ArmModel arm = ArmModel::planar_two_link(0.5, 0.5);
  /// radius defaults to the arm's total length.
  GridSpec grid;
  MountOffset mount;
  double ds = 0.2;
  /// Region grid spacing; defaults to grid.delta_p.
  double delta_g = 0.05;
  int n_min = 5;
  double alpha = 50.0;
  CostWeights weights;
  LbfgsOptions optimizer;
  bool anchor_start = true;
  bool anchor_end = false;
  bool exact_smoothness = false;

  SearchOptions search_options() const { return {weights, anchor_start, exact_smoothness}; }

  bool operator==(const PlannerConfig&) const = default;
};

/// Strict parse: unknown keys, wrong types and out-of-range values all throw
/// (FormatError for schema problems, ConfigError for bad values) with the
/// offending field path in the message.
PlannerConfig config_from_json(const Json& j);
PlannerConfig load_config(const std::filesystem::path& path);

/// Round-trips through config_from_json. Arms are written as explicit DH
/// tables.
Json to_json(const PlannerConfig& config);

}  // namespace irmplan
