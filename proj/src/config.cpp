#include "irmplan/config.hpp"

#include "irmplan/errors.hpp"
#include "json_fields.hpp"

namespace irmplan {

namespace {

ArmModel arm_from_json(const Json& j) {
  const std::string path = "arm";
  if (jf::find(j, "preset", path)) {
    jf::only_keys(j, {"preset"}, path);
    return ArmModel::preset(jf::string(j, "preset", path));
  }
  jf::only_keys(j, {"id", "dh", "limits"}, path);
  const Json& dh = jf::array(jf::at(j, "dh", path), "arm.dh");
  const Json& limits = jf::array(jf::at(j, "limits", path), "arm.limits");
  std::vector<DhRow> rows;
  for (std::size_t i = 0; i < dh.size(); ++i) {
    const std::string rp = jf::index("arm.dh", i);
    jf::only_keys(dh[i], {"a", "alpha", "d", "theta_offset"}, rp);
    DhRow row;
    row.a = jf::number(dh[i], "a", rp);
    row.alpha = jf::number(dh[i], "alpha", rp);
    row.d = jf::number(dh[i], "d", rp);
    if (jf::find(dh[i], "theta_offset", rp)) row.theta_offset = jf::number(dh[i], "theta_offset", rp);
    rows.push_back(row);
  }
  std::vector<JointLimit> lims;
  for (std::size_t i = 0; i < limits.size(); ++i) {
    const auto v = jf::numbers(limits[i], jf::index("arm.limits", i), 2);
    lims.push_back({v[0], v[1]});
  }
  const std::string id = jf::find(j, "id", path) ? jf::string(j, "id", path) : "custom";
  return ArmModel(id, std::move(rows), std::move(lims));
}

Json arm_to_json(const ArmModel& arm) {
  Json dh = Json::array();
  for (const auto& r : arm.dh_rows()) dh.push_back({{"a", r.a}, {"alpha", r.alpha}, {"d", r.d}, {"theta_offset", r.theta_offset}});
  Json limits = Json::array();
  for (const auto& l : arm.limits()) limits.push_back({l.lo, l.hi});
  return {{"id", arm.id()}, {"dh", std::move(dh)}, {"limits", std::move(limits)}};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

PlannerConfig config_from_json(const Json& j) {
  jf::only_keys(j,
                {"format_version", "kind", "arm", "grid", "mount_offset", "ds", "delta_g", "n_min", "alpha", "weights",
                 "optimizer", "anchor_start", "anchor_end", "exact_smoothness"},
                "");
  check_header(j, "planner_config");
  PlannerConfig c;
  c.arm = arm_from_json(jf::at(j, "arm", ""));

  c.grid.radius = c.arm.total_length();
  if (const Json* g = jf::find(j, "grid", "")) {
    jf::only_keys(*g, {"delta_p", "delta_r", "radius", "voxel_cap"}, "grid");
    if (jf::find(*g, "delta_p", "grid")) c.grid.delta_p = jf::number(*g, "delta_p", "grid");
    if (jf::find(*g, "delta_r", "grid")) c.grid.delta_r = jf::number(*g, "delta_r", "grid");
    if (jf::find(*g, "radius", "grid")) c.grid.radius = jf::number(*g, "radius", "grid");
    if (jf::find(*g, "voxel_cap", "grid")) {
      const long long cap = jf::integer(jf::at(*g, "voxel_cap", "grid"), "grid.voxel_cap");
      require(cap > 0, "grid.voxel_cap must be positive");
      c.grid.voxel_cap = static_cast<std::size_t>(cap);
    }
  }
  c.grid.validate();

  if (const Json* m = jf::find(j, "mount_offset", "")) {
    const auto v = jf::numbers(*m, "mount_offset", 3);
    c.mount = {v[0], v[1], v[2]};
  }
  if (jf::find(j, "ds", "")) c.ds = jf::number(j, "ds", "");
  require(c.ds > 0.0, "ds must be positive");
  c.delta_g = jf::find(j, "delta_g", "") ? jf::number(j, "delta_g", "") : c.grid.delta_p;
  require(c.delta_g > 0.0, "delta_g must be positive");
  if (jf::find(j, "n_min", "")) c.n_min = static_cast<int>(jf::integer(j, "n_min", ""));
  require(c.n_min >= 3, "n_min must be at least 3");
  if (jf::find(j, "alpha", "")) c.alpha = jf::number(j, "alpha", "");
  require(c.alpha > 0.0, "alpha must be positive");

  if (const Json* w = jf::find(j, "weights", "")) {
    jf::only_keys(*w, {"length", "smooth"}, "weights");
    if (jf::find(*w, "length", "weights")) c.weights.length = jf::number(*w, "length", "weights");
    if (jf::find(*w, "smooth", "weights")) c.weights.smooth = jf::number(*w, "smooth", "weights");
    require(c.weights.length >= 0.0 && c.weights.smooth >= 0.0, "weights must be non-negative");
  }
  if (const Json* o = jf::find(j, "optimizer", "")) {
    jf::only_keys(*o, {"max_iter", "grad_tol", "history"}, "optimizer");
    if (jf::find(*o, "max_iter", "optimizer")) c.optimizer.max_iterations = static_cast<int>(jf::integer(*o, "max_iter", "optimizer"));
    if (jf::find(*o, "grad_tol", "optimizer")) c.optimizer.grad_tol = jf::number(*o, "grad_tol", "optimizer");
    if (jf::find(*o, "history", "optimizer")) c.optimizer.history = static_cast<int>(jf::integer(*o, "history", "optimizer"));
    require(c.optimizer.max_iterations >= 0, "optimizer.max_iter must be non-negative");
    require(c.optimizer.grad_tol > 0.0, "optimizer.grad_tol must be positive");
    require(c.optimizer.history >= 1, "optimizer.history must be at least 1");
  }
  if (const Json* b = jf::find(j, "anchor_start", "")) c.anchor_start = jf::boolean(*b, "anchor_start");
  if (const Json* b = jf::find(j, "anchor_end", "")) c.anchor_end = jf::boolean(*b, "anchor_end");
  if (const Json* b = jf::find(j, "exact_smoothness", "")) c.exact_smoothness = jf::boolean(*b, "exact_smoothness");
  return c;
}

PlannerConfig load_config(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return config_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Json to_json(const PlannerConfig& c) {
  return {{"format_version", kFormatVersion},
          {"kind", "planner_config"},
          {"arm", arm_to_json(c.arm)},
          {"grid", to_json(c.grid)},
          {"mount_offset", {c.mount.dx, c.mount.dy, c.mount.dz}},
          {"ds", c.ds},
          {"delta_g", c.delta_g},
          {"n_min", c.n_min},
          {"alpha", c.alpha},
          {"weights", {{"length", c.weights.length}, {"smooth", c.weights.smooth}}},
          {"optimizer",
           {{"max_iter", c.optimizer.max_iterations}, {"grad_tol", c.optimizer.grad_tol}, {"history", c.optimizer.history}}},
          {"anchor_start", c.anchor_start},
          {"anchor_end", c.anchor_end},
          {"exact_smoothness", c.exact_smoothness}};
}

}  // namespace irmplan
