#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace irmplan {

/// Wraps an angle into (-pi, pi].
double normalize_angle(double a);

/// End-effector pose: position plus extrinsic X-Y-Z (roll, pitch, yaw) Euler
/// angles, i.e. R = Rz(gamma) * Ry(beta) * Rx(alpha).
struct Pose6 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  Eigen::Vector3d position() const { return {x, y, z}; }
  Eigen::Matrix3d rotation() const;

  /// Same pose with every angle wrapped into (-pi, pi].
  Pose6 normalized() const;

  static Pose6 from_transform(const Eigen::Isometry3d& t);

  bool operator==(const Pose6&) const = default;
};

Eigen::Matrix3d rotation_from_rpy(double alpha, double beta, double gamma);

/// Standard DH row: T = Rz(theta + theta_offset) Tz(d) Tx(a) Rx(alpha).
struct DhRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;

  bool operator==(const DhRow&) const = default;
};

struct JointLimit {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const JointLimit&) const = default;
};

/// Which pose components the arm can control. Drives the IK residual and the
/// Jacobian rows used for manipulability.
enum class TaskSpace {
  kPlanarPosition,   // x, y              (planar, 2 joints)
  kPlanar,           // x, y, yaw         (planar, >= 3 joints)
  kSpatialPosition,  // x, y, z           (spatial, 3..5 joints)
  kSpatial,          // full pose         (spatial, >= 6 joints)
};

class ArmModel {
 public:
  /// Throws ConfigError when the table is inconsistent (fewer than two joints,
  /// limit count mismatch, lo >= hi, zero total length).
  ArmModel(std::string id, std::vector<DhRow> rows, std::vector<JointLimit> limits);

  /// Planar two-link arm with full-circle limits on both joints.
  static ArmModel planar_two_link(double l1, double l2, std::string id = "planar2");
  /// Small six-axis arm used for spatial tests and examples.
  static ArmModel desk6();
  /// Looks up a built-in model by name ("planar2", "desk6").
  static ArmModel preset(const std::string& name);

  const std::string& id() const { return id_; }
  std::size_t joint_count() const { return rows_.size(); }
  std::span<const DhRow> dh_rows() const { return rows_; }
  std::span<const JointLimit> limits() const { return limits_; }

  /// Sum of per-link extents sqrt(a^2 + d^2); the reach sphere radius.
  double total_length() const { return total_length_; }

  TaskSpace task_space() const { return task_space_; }
  bool is_planar() const {
    return task_space_ == TaskSpace::kPlanarPosition || task_space_ == TaskSpace::kPlanar;
  }
  /// Indices into the 6-row geometric Jacobian (vx vy vz wx wy wz) that the
  /// task space uses.
  std::vector<int> task_rows() const;

  bool within_limits(std::span<const double> q) const;

  bool operator==(const ArmModel&) const = default;

 private:
  std::string id_;
  std::vector<DhRow> rows_;
  std::vector<JointLimit> limits_;
  double total_length_ = 0.0;
  TaskSpace task_space_ = TaskSpace::kSpatial;
};

/// Joint vector. The model-aware constructor enforces joint limits.
class JointConfig {
 public:
  JointConfig() = default;
  explicit JointConfig(std::vector<double> q) : q_(std::move(q)) {}
  /// Throws InputError when q has the wrong size or violates a limit.
  JointConfig(const ArmModel& model, std::vector<double> q);

  std::span<const double> values() const { return q_; }
  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }

  bool operator==(const JointConfig&) const = default;

 private:
  std::vector<double> q_;
};

/// Homogeneous transform of the end effector in the arm-base frame.
Eigen::Isometry3d end_effector_transform(const ArmModel& model, const JointConfig& q);

Pose6 forward_kinematics(const ArmModel& model, const JointConfig& q);

/// Geometric Jacobian, rows (vx, vy, vz, wx, wy, wz), one column per joint.
Eigen::MatrixXd jacobian(const ArmModel& model, const JointConfig& q);

/// Yoshikawa index sqrt(det(J J^T)) over the task rows.
double manipulability(const ArmModel& model, const JointConfig& q);

struct IkOptions {
  double tol_pos = 1e-6;
  double tol_rot = 1e-6;
  double damping = 1e-3;
  int max_iterations = 200;
  int restarts = 8;
};

/// Task-space residual (target - current) in the model's task coordinates.
Eigen::VectorXd task_error(const ArmModel& model, const Pose6& target, const Eigen::Isometry3d& current);

/// Solves IK for the model's task components. Planar two-link arms use the
/// closed form (solution nearest the seed); everything else runs damped least
/// squares from the seed, then from deterministic random restarts. Returns
/// nullopt when the target is unreachable or the budget runs out.
std::optional<JointConfig> ik_solve(const ArmModel& model, const Pose6& target,
                                    const JointConfig& seed, const IkOptions& options = {});

}  // namespace irmplan
