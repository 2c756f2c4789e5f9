#pragma once

#include "irmplan/irm.hpp"
#include "irmplan/layered_graph.hpp"

#include <span>
#include <string>
#include <vector>

namespace irmplan {

enum class Provenance { kDiscrete, kRefined };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Complete mobile-manipulator plan: one (base, joints) pair per target.
struct PlanResult {
  std::vector<BaseConfig> base_path;
  std::vector<JointConfig> joint_path;
  std::vector<Pose6> targets;
  Provenance provenance = Provenance::kDiscrete;

  bool operator==(const PlanResult&) const = default;
};

/// Base length in meters, smoothness in 1/m, end-effector errors in mm.
/// Rotational errors (radians) cover only the rotation components the arm
/// controls and are zero for position-only arms.
struct MetricsReport {
  double L_b = 0.0;
  double S_b = 0.0;
  double E_ee_max = 0.0;
  double E_ee_mean = 0.0;
  double rmse = 0.0;
  double E_rot_max = 0.0;
  double E_rot_mean = 0.0;

  bool operator==(const MetricsReport&) const = default;
};

struct EeErrors {
  double max_mm = 0.0;
  double mean_mm = 0.0;
  double rmse_mm = 0.0;
  double rot_max = 0.0;
  double rot_mean = 0.0;
  std::vector<double> per_waypoint_mm;
};

double base_length(std::span<const BaseConfig> path);

/// Discrete integrated squared curvature: sum of Menger curvature squared
/// times the mean adjacent chord length over interior nodes.
double base_smoothness(std::span<const BaseConfig> path);

/// Curvature of the circle through three points; 0 for collinear or
/// coincident points.
double menger_curvature(const BaseConfig& a, const BaseConfig& b, const BaseConfig& c);

/// World end-effector transform for a base at (x, y), yaw 0.
Eigen::Isometry3d world_end_effector(const ArmModel& model, const MountOffset& mount, const BaseConfig& base,
                                     const JointConfig& q);

EeErrors ee_error(const ArmModel& model, const MountOffset& mount, const PlanResult& plan);

MetricsReport evaluate_plan(const ArmModel& model, const MountOffset& mount, const PlanResult& plan);

}  // namespace irmplan
