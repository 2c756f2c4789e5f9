#include "irmplan/io.hpp"

#include "irmplan/errors.hpp"
#include "json_fields.hpp"

#include <fstream>
#include <sstream>

namespace irmplan {

namespace {

Json header(const std::string& kind) { return Json{{"format_version", kFormatVersion}, {"kind", kind}}; }

Json joints_to_json(const JointConfig& q) { return Json(std::vector<double>(q.values().begin(), q.values().end())); }

JointConfig joints_from_json(const Json& j, const std::string& path) { return JointConfig(jf::numbers(j, path)); }

Json point_list(const std::vector<BaseConfig>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back({p.x, p.y});
  return out;
}

std::vector<BaseConfig> point_list_from(const Json& j, const std::string& path) {
  jf::array(j, path);
  std::vector<BaseConfig> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = jf::numbers(j[i], jf::index(path, i), 2);
    out.push_back({v[0], v[1]});
  }
  return out;
}

std::size_t index_value(const Json& j, const std::string& path) {
  const long long v = jf::integer(j, path);
  if (v < 0) throw FormatError(path + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

void check_header(const Json& j, const std::string& kind) {
  const long long version = jf::integer(j, "format_version", "");
  if (version != kFormatVersion) {
    throw FormatError("format_version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kFormatVersion) + ")");
  }
  const std::string got = jf::string(j, "kind", "");
  if (got != kind) throw FormatError("expected a '" + kind + "' artifact, got '" + got + "'");
}

Json to_json(const GridSpec& grid) {
  return Json{{"delta_p", grid.delta_p}, {"delta_r", grid.delta_r}, {"radius", grid.radius}, {"voxel_cap", grid.voxel_cap}};
}

GridSpec grid_from_json(const Json& j) {
  jf::only_keys(j, {"delta_p", "delta_r", "radius", "voxel_cap"}, "grid");
  GridSpec g;
  g.delta_p = jf::number(j, "delta_p", "grid");
  g.delta_r = jf::number(j, "delta_r", "grid");
  g.radius = jf::number(j, "radius", "grid");
  if (const Json* cap = jf::find(j, "voxel_cap", "grid")) g.voxel_cap = index_value(*cap, "grid.voxel_cap");
  return g;
}

Json to_json(const ReachabilityMap& rm) {
  Json j = header("rm");
  j["arm_id"] = rm.arm_id;
  j["grid"] = to_json(rm.grid);
  Json voxels = Json::array();
  for (const auto& v : rm.voxels) voxels.push_back({{"bin", v.bin}, {"q", joints_to_json(v.q)}, {"mu", v.mu}});
  j["voxels"] = std::move(voxels);
  return j;
}

ReachabilityMap rm_from_json(const Json& j) {
  check_header(j, "rm");
  ReachabilityMap rm;
  rm.arm_id = jf::string(j, "arm_id", "");
  rm.grid = grid_from_json(jf::at(j, "grid", ""));
  rm.grid.validate();
  const Json& voxels = jf::array(jf::at(j, "voxels", ""), "voxels");
  rm.voxels.reserve(voxels.size());
  for (std::size_t i = 0; i < voxels.size(); ++i) {
    const std::string path = jf::index("voxels", i);
    const Json& bin_json = jf::array(jf::at(voxels[i], "bin", path), path + ".bin", 6);
    ReachVoxel v;
    for (std::size_t k = 0; k < 6; ++k) v.bin[k] = static_cast<int>(jf::integer(bin_json[k], jf::index(path + ".bin", k)));
    v.pose = bin_center(v.bin, rm.grid);
    v.q = joints_from_json(jf::at(voxels[i], "q", path), path + ".q");
    v.mu = jf::number(voxels[i], "mu", path);
    if (!rm.voxels.empty() && !(rm.voxels.back().bin < v.bin)) throw FormatError(path + ": voxels must be sorted and unique");
    rm.voxels.push_back(std::move(v));
  }
  return rm;
}

Json to_json(const InverseReachabilityMap& irm) {
  Json j = header("irm");
  j["arm_id"] = irm.arm_id;
  j["grid"] = to_json(irm.grid);
  Json submaps = Json::array();
  for (const auto& [key, entries] : irm.index) {
    Json list = Json::array();
    for (const auto& e : entries) list.push_back({{"x_r", e.x_r}, {"y_r", e.y_r}, {"q", joints_to_json(e.q)}, {"mu", e.mu}});
    submaps.push_back({{"key", {key.z, key.alpha, key.beta, key.gamma}}, {"entries", std::move(list)}});
  }
  j["submaps"] = std::move(submaps);
  return j;
}

InverseReachabilityMap irm_from_json(const Json& j) {
  check_header(j, "irm");
  InverseReachabilityMap irm;
  irm.arm_id = jf::string(j, "arm_id", "");
  irm.grid = grid_from_json(jf::at(j, "grid", ""));
  irm.grid.validate();
  const Json& submaps = jf::array(jf::at(j, "submaps", ""), "submaps");
  for (std::size_t s = 0; s < submaps.size(); ++s) {
    const std::string path = jf::index("submaps", s);
    const Json& k = jf::array(jf::at(submaps[s], "key", path), path + ".key", 4);
    IrmKey key{static_cast<int>(jf::integer(k[0], path + ".key[0]")), static_cast<int>(jf::integer(k[1], path + ".key[1]")),
               static_cast<int>(jf::integer(k[2], path + ".key[2]")), static_cast<int>(jf::integer(k[3], path + ".key[3]"))};
    const Json& list = jf::array(jf::at(submaps[s], "entries", path), path + ".entries");
    std::vector<IrmEntry> entries;
    entries.reserve(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ep = jf::index(path + ".entries", i);
      entries.push_back({jf::number(list[i], "x_r", ep), jf::number(list[i], "y_r", ep),
                         joints_from_json(jf::at(list[i], "q", ep), ep + ".q"), jf::number(list[i], "mu", ep)});
    }
    if (!irm.index.emplace(key, std::move(entries)).second) throw FormatError(path + ": duplicate key");
  }
  return irm;
}

Json pose_to_json(const Pose6& p) { return Json{p.x, p.y, p.z, p.alpha, p.beta, p.gamma}; }

Pose6 pose_from_json(const Json& j) {
  const auto v = jf::numbers(j, "pose", 6);
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

Json to_json(const PlanArtifact& a) {
  Json j = header("plan");
  j["provenance"] = to_string(a.plan.provenance);
  j["arm_id"] = a.arm_id;
  j["mount_offset"] = {a.mount.dx, a.mount.dy, a.mount.dz};
  j["start"] = {a.start.x, a.start.y};
  Json targets = Json::array();
  for (const auto& t : a.plan.targets) targets.push_back(pose_to_json(t));
  j["targets"] = std::move(targets);
  Json nodes = Json::array();
  for (std::size_t i = 0; i < a.plan.base_path.size(); ++i) {
    nodes.push_back({{"x", a.plan.base_path[i].x}, {"y", a.plan.base_path[i].y}, {"q", joints_to_json(a.plan.joint_path[i])}});
  }
  j["nodes"] = std::move(nodes);
  if (a.plan.provenance == Provenance::kDiscrete) {
    j["total_cost"] = a.total_cost;
    j["search_stats"] = {{"pushes", a.stats.pushes},
                         {"pops", a.stats.pops},
                         {"stale_pops", a.stats.stale_pops},
                         {"expansions", a.stats.expansions},
                         {"relaxations", a.stats.relaxations}};
  } else {
    j["refine"] = {{"final_cost", a.refine.final_cost},
                   {"iterations", a.refine.iterations},
                   {"converged", a.refine.converged},
                   {"gradient_norm", a.refine.gradient_norm},
                   {"cost_trace", a.refine.cost_trace},
                   {"optimized_path", point_list(a.refine.path)}};
    j["ik_reverted"] = a.reverted;
  }
  return j;
}

PlanArtifact plan_from_json(const Json& j) {
  check_header(j, "plan");
  PlanArtifact a;
  a.plan.provenance = provenance_from_string(jf::string(j, "provenance", ""));
  a.arm_id = jf::string(j, "arm_id", "");
  const auto m = jf::numbers(jf::at(j, "mount_offset", ""), "mount_offset", 3);
  a.mount = {m[0], m[1], m[2]};
  const auto s = jf::numbers(jf::at(j, "start", ""), "start", 2);
  a.start = {s[0], s[1]};
  const Json& targets = jf::array(jf::at(j, "targets", ""), "targets");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto v = jf::numbers(targets[i], jf::index("targets", i), 6);
    a.plan.targets.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  const Json& nodes = jf::array(jf::at(j, "nodes", ""), "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = jf::index("nodes", i);
    jf::only_keys(nodes[i], {"x", "y", "q"}, path);
    a.plan.base_path.push_back({jf::number(nodes[i], "x", path), jf::number(nodes[i], "y", path)});
    a.plan.joint_path.push_back(joints_from_json(jf::at(nodes[i], "q", path), path + ".q"));
  }
  if (nodes.size() != a.plan.targets.size()) throw FormatError("nodes and targets must have the same length");

  if (a.plan.provenance == Provenance::kDiscrete) {
    a.total_cost = jf::number(j, "total_cost", "");
    const Json& st = jf::at(j, "search_stats", "");
    a.stats.pushes = index_value(jf::at(st, "pushes", "search_stats"), "search_stats.pushes");
    a.stats.pops = index_value(jf::at(st, "pops", "search_stats"), "search_stats.pops");
    a.stats.stale_pops = index_value(jf::at(st, "stale_pops", "search_stats"), "search_stats.stale_pops");
    a.stats.expansions = index_value(jf::at(st, "expansions", "search_stats"), "search_stats.expansions");
    a.stats.relaxations = index_value(jf::at(st, "relaxations", "search_stats"), "search_stats.relaxations");
  } else {
    const Json& r = jf::at(j, "refine", "");
    a.refine.final_cost = jf::number(r, "final_cost", "refine");
    a.refine.iterations = static_cast<int>(jf::integer(r, "iterations", "refine"));
    a.refine.converged = jf::boolean(jf::at(r, "converged", "refine"), "refine.converged");
    a.refine.gradient_norm = jf::number(r, "gradient_norm", "refine");
    a.refine.cost_trace = jf::numbers(jf::at(r, "cost_trace", "refine"), "refine.cost_trace");
    a.refine.path = point_list_from(jf::at(r, "optimized_path", "refine"), "refine.optimized_path");
    if (a.refine.path.size() != nodes.size()) throw FormatError("refine.optimized_path: expected one point per node");
    const Json& rev = jf::array(jf::at(j, "ik_reverted", ""), "ik_reverted");
    for (std::size_t i = 0; i < rev.size(); ++i) a.reverted.push_back(index_value(rev[i], jf::index("ik_reverted", i)));
  }
  return a;
}

Json regions_to_json(const std::vector<RegionSet>& regions) {
  Json j = header("regions");
  Json layers = Json::array();
  for (const auto& set : regions) {
    Json polys = Json::array();
    for (const auto& r : set.regions) {
      Json verts = Json::array();
      for (const auto& v : r.vertices) verts.push_back({v.x, v.y});
      polys.push_back(std::move(verts));
    }
    layers.push_back({{"layer_index", set.layer_index}, {"regions", std::move(polys)}});
  }
  j["layers"] = std::move(layers);
  return j;
}

std::vector<RegionSet> regions_from_json(const Json& j) {
  check_header(j, "regions");
  const Json& layers = jf::array(jf::at(j, "layers", ""), "layers");
  std::vector<RegionSet> out;
  out.reserve(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string path = jf::index("layers", i);
    RegionSet set;
    set.layer_index = index_value(jf::at(layers[i], "layer_index", path), path + ".layer_index");
    const Json& polys = jf::array(jf::at(layers[i], "regions", path), path + ".regions");
    for (std::size_t r = 0; r < polys.size(); ++r) {
      const std::string rp = jf::index(path + ".regions", r);
      jf::array(polys[r], rp);
      if (polys[r].size() < 3) throw FormatError(rp + ": a region needs at least 3 vertices");
      ConvexRegion region;
      for (std::size_t v = 0; v < polys[r].size(); ++v) {
        const auto xy = jf::numbers(polys[r][v], jf::index(rp, v), 2);
        region.vertices.push_back({xy[0], xy[1]});
      }
      set.regions.push_back(std::move(region));
    }
    out.push_back(std::move(set));
  }
  return out;
}

Json to_json(const MetricsReport& m, Provenance provenance) {
  Json j = header("metrics");
  j["provenance"] = to_string(provenance);
  j["L_b"] = m.L_b;
  j["S_b"] = m.S_b;
  j["E_ee_max"] = m.E_ee_max;
  j["E_ee_mean"] = m.E_ee_mean;
  j["rmse"] = m.rmse;
  j["E_rot_max"] = m.E_rot_max;
  j["E_rot_mean"] = m.E_rot_mean;
  return j;
}

MetricsReport metrics_from_json(const Json& j) {
  check_header(j, "metrics");
  MetricsReport m;
  m.L_b = jf::number(j, "L_b", "");
  m.S_b = jf::number(j, "S_b", "");
  m.E_ee_max = jf::number(j, "E_ee_max", "");
  m.E_ee_mean = jf::number(j, "E_ee_mean", "");
  m.rmse = jf::number(j, "rmse", "");
  m.E_rot_max = jf::number(j, "E_rot_max", "");
  m.E_rot_mean = jf::number(j, "E_rot_mean", "");
  return m;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw IOError("failed writing " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace irmplan
