#include "irmplan/metrics.hpp"

#include "irmplan/errors.hpp"

#include <algorithm>
#include <cmath>

namespace irmplan {

std::string to_string(Provenance p) { return p == Provenance::kDiscrete ? "discrete" : "refined"; }

Provenance provenance_from_string(const std::string& s) {
  if (s == "discrete") return Provenance::kDiscrete;
  if (s == "refined") return Provenance::kRefined;
  throw FormatError("unknown provenance '" + s + "'");
}

double base_length(std::span<const BaseConfig> path) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) total += path_length_cost(path[i], path[i + 1]);
  return total;
}

double menger_curvature(const BaseConfig& a, const BaseConfig& b, const BaseConfig& c) {
  const double ab = path_length_cost(a, b), bc = path_length_cost(b, c), ca = path_length_cost(c, a);
  const double denom = ab * bc * ca;
  if (denom == 0.0) return 0.0;
  const double twice_area = std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
  return 2.0 * twice_area / denom;
}

double base_smoothness(std::span<const BaseConfig> path) {
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const double k = menger_curvature(path[i - 1], path[i], path[i + 1]);
    const double ds = 0.5 * (path_length_cost(path[i - 1], path[i]) + path_length_cost(path[i], path[i + 1]));
    total += k * k * ds;
  }
  return total;
}

Eigen::Isometry3d world_end_effector(const ArmModel& model, const MountOffset& mount, const BaseConfig& base,
                                     const JointConfig& q) {
  return arm_base_transform(base.x, base.y, mount) * end_effector_transform(model, q);
}

EeErrors ee_error(const ArmModel& model, const MountOffset& mount, const PlanResult& plan) {
  const std::size_t n = plan.targets.size();
  if (plan.base_path.size() != n || plan.joint_path.size() != n) {
    throw InputError("plan has mismatched base/joint/target counts");
  }
  EeErrors e;
  e.per_waypoint_mm.resize(n);
  double sum = 0.0, sum2 = 0.0, rot_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Isometry3d t = world_end_effector(model, mount, plan.base_path[i], plan.joint_path[i]);
    const double err_mm = (t.translation() - plan.targets[i].position()).norm() * 1000.0;
    e.per_waypoint_mm[i] = err_mm;
    e.max_mm = std::max(e.max_mm, err_mm);
    sum += err_mm;
    sum2 += err_mm * err_mm;

    double rot = 0.0;
    if (model.task_space() == TaskSpace::kPlanar) {
      const Eigen::Matrix3d r = t.rotation();
      rot = std::abs(normalize_angle(plan.targets[i].gamma - std::atan2(r(1, 0), r(0, 0))));
    } else if (model.task_space() == TaskSpace::kSpatial) {
      rot = Eigen::AngleAxisd(plan.targets[i].rotation() * t.rotation().transpose()).angle();
    }
    e.rot_max = std::max(e.rot_max, rot);
    rot_sum += rot;
  }
  if (n > 0) {
    e.mean_mm = sum / static_cast<double>(n);
    e.rmse_mm = std::sqrt(sum2 / static_cast<double>(n));
    e.rot_mean = rot_sum / static_cast<double>(n);
  }
  return e;
}

MetricsReport evaluate_plan(const ArmModel& model, const MountOffset& mount, const PlanResult& plan) {
  const EeErrors e = ee_error(model, mount, plan);
  MetricsReport m;
  m.L_b = base_length(plan.base_path);
  m.S_b = base_smoothness(plan.base_path);
  m.E_ee_max = e.max_mm;
  m.E_ee_mean = e.mean_mm;
  m.rmse = e.rmse_mm;
  m.E_rot_max = e.rot_max;
  m.E_rot_mean = e.rot_mean;
  return m;
}

}  // namespace irmplan
