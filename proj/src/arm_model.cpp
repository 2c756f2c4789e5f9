#include "irmplan/arm_model.hpp"

#include "irmplan/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace irmplan {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Isometry3d dh_transform(const DhRow& row, double q) {
  const double theta = q + row.theta_offset;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Eigen::Matrix4d m;
  m << ct, -st * ca, st * sa, row.a * ct,
       st, ct * ca, -ct * sa, row.a * st,
       0.0, sa, ca, row.d,
       0.0, 0.0, 0.0, 1.0;
  return Eigen::Isometry3d(m);
}

bool is_zero_twist(double alpha) {
  return std::abs(std::sin(alpha)) < 1e-12 && std::cos(alpha) > 0.0;
}

// Shifts `value` by multiples of 2pi into the limit interval, preferring the
// representative closest to `reference`.
std::optional<double> fit_to_limit(double value, const JointLimit& lim, double reference) {
  std::optional<double> best;
  const double base = value + kTwoPi * std::round((reference - value) / kTwoPi);
  for (int k = -2; k <= 2; ++k) {
    const double v = base + k * kTwoPi;
    if (v < lim.lo - 1e-12 || v > lim.hi + 1e-12) continue;
    const double clamped = std::clamp(v, lim.lo, lim.hi);
    if (!best || std::abs(clamped - reference) < std::abs(*best - reference)) best = clamped;
  }
  return best;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t pose_hash(const Pose6& p) {
  std::uint64_t h = 0x5eed;
  for (double v : {p.x, p.y, p.z, p.alpha, p.beta, p.gamma}) {
    h = splitmix(h ^ std::bit_cast<std::uint64_t>(v));
  }
  return h;
}

Eigen::Vector3d rotation_log(const Eigen::Matrix3d& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.axis() * aa.angle();
}

struct ErrorNorms {
  double pos;
  double rot;
};

ErrorNorms split_norms(TaskSpace space, const Eigen::VectorXd& e) {
  switch (space) {
    case TaskSpace::kPlanarPosition:
    case TaskSpace::kSpatialPosition:
      return {e.norm(), 0.0};
    case TaskSpace::kPlanar:
      return {e.head<2>().norm(), std::abs(e(2))};
    case TaskSpace::kSpatial:
      return {e.head<3>().norm(), e.tail<3>().norm()};
  }
  return {e.norm(), 0.0};
}

Eigen::MatrixXd task_jacobian(const ArmModel& model, const JointConfig& q) {
  const Eigen::MatrixXd full = jacobian(model, q);
  const auto rows = model.task_rows();
  Eigen::MatrixXd j(rows.size(), full.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) j.row(static_cast<Eigen::Index>(r)) = full.row(rows[r]);
  return j;
}

std::optional<JointConfig> planar_two_link_ik(const ArmModel& model, const Pose6& target,
                                              const JointConfig& seed, const IkOptions& options) {
  const auto rows = model.dh_rows();
  const auto lims = model.limits();
  const double l1 = rows[0].a, l2 = rows[1].a;
  const double x = target.x, y = target.y;
  const double r2 = x * x + y * y;
  double c2 = (r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
  if (c2 > 1.0 + 1e-12 || c2 < -1.0 - 1e-12) return std::nullopt;
  c2 = std::clamp(c2, -1.0, 1.0);
  const double s2_abs = std::sqrt(std::max(0.0, 1.0 - c2 * c2));

  std::optional<std::vector<double>> best;
  double best_dist = 0.0;
  for (double s2 : {s2_abs, -s2_abs}) {
    const double th2 = std::atan2(s2, c2);
    const double th1 = std::atan2(y, x) - std::atan2(l2 * s2, l1 + l2 * c2);
    const auto q1 = fit_to_limit(th1 - rows[0].theta_offset, lims[0], seed.size() > 0 ? seed[0] : 0.0);
    const auto q2 = fit_to_limit(th2 - rows[1].theta_offset, lims[1], seed.size() > 1 ? seed[1] : 0.0);
    if (!q1 || !q2) continue;
    double dist = 0.0;
    if (seed.size() == 2) dist = std::hypot(*q1 - seed[0], *q2 - seed[1]);
    if (!best || dist < best_dist) {
      best = std::vector<double>{*q1, *q2};
      best_dist = dist;
    }
    if (s2_abs == 0.0) break;
  }
  if (!best) return std::nullopt;
  JointConfig q(*best);
  const auto norms = split_norms(model.task_space(),
                                 task_error(model, target, end_effector_transform(model, q)));
  if (norms.pos > options.tol_pos) return std::nullopt;
  return q;
}

std::optional<JointConfig> dls_from(const ArmModel& model, const Pose6& target,
                                    Eigen::VectorXd q, const IkOptions& options) {
  const auto lims = model.limits();
  const double lambda2 = options.damping * options.damping;
  auto clamp_q = [&](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = std::clamp(v(i), lims[static_cast<std::size_t>(i)].lo, lims[static_cast<std::size_t>(i)].hi);
    }
  };
  clamp_q(q);
  auto to_config = [](const Eigen::VectorXd& v) {
    return JointConfig(std::vector<double>(v.data(), v.data() + v.size()));
  };
  for (int it = 0; it < options.max_iterations; ++it) {
    const JointConfig cfg = to_config(q);
    const Eigen::VectorXd e = task_error(model, target, end_effector_transform(model, cfg));
    if (e.norm() < 1e-13) break;
    const Eigen::MatrixXd j = task_jacobian(model, cfg);
    const Eigen::MatrixXd jjt =
        j * j.transpose() + lambda2 * Eigen::MatrixXd::Identity(j.rows(), j.rows());
    Eigen::VectorXd dq = j.transpose() * jjt.ldlt().solve(e);
    const double step = dq.norm();
    if (step > 0.5) dq *= 0.5 / step;
    q += dq;
    clamp_q(q);
  }
  const JointConfig cfg = to_config(q);
  const auto norms = split_norms(model.task_space(),
                                 task_error(model, target, end_effector_transform(model, cfg)));
  if (norms.pos <= options.tol_pos && norms.rot <= options.tol_rot) return cfg;
  return std::nullopt;
}

}  // namespace

double normalize_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

Eigen::Matrix3d rotation_from_rpy(double alpha, double beta, double gamma) {
  return (Eigen::AngleAxisd(gamma, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(beta, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(alpha, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

Eigen::Matrix3d Pose6::rotation() const { return rotation_from_rpy(alpha, beta, gamma); }

Pose6 Pose6::normalized() const {
  return {x, y, z, normalize_angle(alpha), normalize_angle(beta), normalize_angle(gamma)};
}

Pose6 Pose6::from_transform(const Eigen::Isometry3d& t) {
  const Eigen::Matrix3d r = t.rotation();
  const Eigen::Vector3d p = t.translation();
  const double beta = std::atan2(-r(2, 0), std::hypot(r(0, 0), r(1, 0)));
  const double alpha = std::atan2(r(2, 1), r(2, 2));
  const double gamma = std::atan2(r(1, 0), r(0, 0));
  return Pose6{p.x(), p.y(), p.z(), alpha, beta, gamma}.normalized();
}

ArmModel::ArmModel(std::string id, std::vector<DhRow> rows, std::vector<JointLimit> limits)
    : id_(std::move(id)), rows_(std::move(rows)), limits_(std::move(limits)) {
  if (rows_.size() < 2) throw ConfigError("arm needs at least 2 joints");
  if (limits_.size() != rows_.size()) {
    throw ConfigError("arm has " + std::to_string(rows_.size()) + " DH rows but " +
                      std::to_string(limits_.size()) + " joint limits");
  }
  for (std::size_t i = 0; i < limits_.size(); ++i) {
    if (!(limits_[i].lo < limits_[i].hi)) {
      throw ConfigError("joint " + std::to_string(i) + " limit requires lo < hi");
    }
  }
  for (const auto& r : rows_) {
    if (!std::isfinite(r.a) || !std::isfinite(r.alpha) || !std::isfinite(r.d) ||
        !std::isfinite(r.theta_offset)) {
      throw ConfigError("DH row contains a non-finite value");
    }
    total_length_ += std::hypot(r.a, r.d);
  }
  if (!(total_length_ > 0.0)) throw ConfigError("arm total length must be positive");

  const bool planar = std::all_of(rows_.begin(), rows_.end(),
                                  [](const DhRow& r) { return is_zero_twist(r.alpha); });
  const std::size_t n = rows_.size();
  if (planar) {
    task_space_ = n == 2 ? TaskSpace::kPlanarPosition : TaskSpace::kPlanar;
  } else if (n >= 6) {
    task_space_ = TaskSpace::kSpatial;
  } else if (n >= 3) {
    task_space_ = TaskSpace::kSpatialPosition;
  } else {
    throw ConfigError("spatial arm needs at least 3 joints");
  }
}

ArmModel ArmModel::planar_two_link(double l1, double l2, std::string id) {
  return ArmModel(std::move(id), {{l1, 0.0, 0.0, 0.0}, {l2, 0.0, 0.0, 0.0}},
                  {{-kPi, kPi}, {-kPi, kPi}});
}

ArmModel ArmModel::desk6() {
  const double h = kPi / 2.0;
  return ArmModel("desk6",
                  {{0.0, h, 0.30, 0.0},
                   {0.40, 0.0, 0.0, 0.0},
                   {0.05, h, 0.0, 0.0},
                   {0.0, -h, 0.35, 0.0},
                   {0.0, h, 0.0, 0.0},
                   {0.0, 0.0, 0.08, 0.0}},
                  {{-kPi, kPi}, {-2.5, 2.5}, {-2.5, 2.5}, {-kPi, kPi}, {-2.2, 2.2}, {-kPi, kPi}});
}

ArmModel ArmModel::preset(const std::string& name) {
  if (name == "planar2") return planar_two_link(0.5, 0.5);
  if (name == "desk6") return desk6();
  throw ConfigError("unknown arm preset '" + name + "' (expected planar2 or desk6)");
}

std::vector<int> ArmModel::task_rows() const {
  switch (task_space_) {
    case TaskSpace::kPlanarPosition: return {0, 1};
    case TaskSpace::kPlanar: return {0, 1, 5};
    case TaskSpace::kSpatialPosition: return {0, 1, 2};
    case TaskSpace::kSpatial: return {0, 1, 2, 3, 4, 5};
  }
  return {};
}

bool ArmModel::within_limits(std::span<const double> q) const {
  if (q.size() != limits_.size()) return false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] >= limits_[i].lo && q[i] <= limits_[i].hi)) return false;
  }
  return true;
}

JointConfig::JointConfig(const ArmModel& model, std::vector<double> q) : q_(std::move(q)) {
  if (q_.size() != model.joint_count()) {
    throw InputError("joint vector has " + std::to_string(q_.size()) + " entries, arm has " +
                     std::to_string(model.joint_count()) + " joints");
  }
  if (!model.within_limits(q_)) throw InputError("joint vector violates joint limits");
}

Eigen::Isometry3d end_effector_transform(const ArmModel& model, const JointConfig& q) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  const auto rows = model.dh_rows();
  for (std::size_t i = 0; i < rows.size(); ++i) t = t * dh_transform(rows[i], q[i]);
  return t;
}

Pose6 forward_kinematics(const ArmModel& model, const JointConfig& q) {
  return Pose6::from_transform(end_effector_transform(model, q));
}

Eigen::MatrixXd jacobian(const ArmModel& model, const JointConfig& q) {
  const auto rows = model.dh_rows();
  const std::size_t n = rows.size();
  std::vector<Eigen::Vector3d> origins, axes;
  origins.reserve(n);
  axes.reserve(n);
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  for (std::size_t i = 0; i < n; ++i) {
    origins.push_back(t.translation());
    axes.push_back(t.rotation().col(2));
    t = t * dh_transform(rows[i], q[i]);
  }
  const Eigen::Vector3d pe = t.translation();
  Eigen::MatrixXd j(6, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    j.block<3, 1>(0, c) = axes[i].cross(pe - origins[i]);
    j.block<3, 1>(3, c) = axes[i];
  }
  return j;
}

double manipulability(const ArmModel& model, const JointConfig& q) {
  const Eigen::MatrixXd j = task_jacobian(model, q);
  const double det = (j * j.transpose()).determinant();
  return std::sqrt(std::max(0.0, det));
}

Eigen::VectorXd task_error(const ArmModel& model, const Pose6& target, const Eigen::Isometry3d& current) {
  const Eigen::Vector3d dp = target.position() - current.translation();
  switch (model.task_space()) {
    case TaskSpace::kPlanarPosition:
      return Eigen::Vector2d(dp.x(), dp.y());
    case TaskSpace::kPlanar: {
      const Eigen::Matrix3d r = current.rotation();
      const double yaw = std::atan2(r(1, 0), r(0, 0));
      return Eigen::Vector3d(dp.x(), dp.y(), normalize_angle(target.gamma - yaw));
    }
    case TaskSpace::kSpatialPosition:
      return dp;
    case TaskSpace::kSpatial: {
      Eigen::VectorXd e(6);
      e.head<3>() = dp;
      e.tail<3>() = rotation_log(target.rotation() * current.rotation().transpose());
      return e;
    }
  }
  return dp;
}

std::optional<JointConfig> ik_solve(const ArmModel& model, const Pose6& target,
                                    const JointConfig& seed, const IkOptions& options) {
  const double reach = model.task_space() == TaskSpace::kPlanarPosition ||
                               model.task_space() == TaskSpace::kPlanar
                           ? std::hypot(target.x, target.y)
                           : target.position().norm();
  if (reach > model.total_length() + options.tol_pos) return std::nullopt;

  const std::size_t n = model.joint_count();
  const auto rows = model.dh_rows();
  if (model.task_space() == TaskSpace::kPlanarPosition && std::abs(rows[0].a) > 0.0 &&
      std::abs(rows[1].a) > 0.0) {
    return planar_two_link_ik(model, target, seed, options);
  }

  Eigen::VectorXd q0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (seed.size() == n) {
    for (std::size_t i = 0; i < n; ++i) q0(static_cast<Eigen::Index>(i)) = seed[i];
  }
  if (auto sol = dls_from(model, target, q0, options)) return sol;

  std::mt19937_64 rng(pose_hash(target));
  const auto lims = model.limits();
  for (int r = 0; r < options.restarts; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_real_distribution<double> dist(lims[i].lo, lims[i].hi);
      q0(static_cast<Eigen::Index>(i)) = dist(rng);
    }
    if (auto sol = dls_from(model, target, q0, options)) return sol;
  }
  return std::nullopt;
}

}  // namespace irmplan
