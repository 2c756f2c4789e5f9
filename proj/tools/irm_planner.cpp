// irm_planner: command-line driver for the two-stage base planner.
//
// Exit codes: 0 success, 2 bad input (arguments, config, trajectory or
// artifact files, I/O), 3 infeasible (a waypoint has no base candidate),
// 4 internal error.

#include "irmplan/errors.hpp"
#include "irmplan/pipeline.hpp"
#include "irmplan/plot.hpp"
#include "irmplan/trajectory.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace irmplan;

constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size() || !std::isfinite(v)) {
      throw InputError(what + ": '" + cell + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.size() != n) throw InputError(what + ": expected " + std::to_string(n) + " comma-separated values");
  return out;
}

std::optional<BaseConfig> parse_start(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = parse_list(text, 2, "--start");
  return BaseConfig{v[0], v[1]};
}

std::vector<Pose6> trajectory_input(const std::string& file, const std::string& demo, const PlannerConfig& config) {
  return file.empty() ? demo_for(config, demo) : load_trajectory(file);
}

void check_arm(const PlannerConfig& config, const std::string& artifact_arm, const std::string& what) {
  if (config.arm.id() != artifact_arm) {
    throw ConfigError(what + " was built for arm '" + artifact_arm + "' but the config describes '" + config.arm.id() + "'");
  }
}

/// Config used by commands that take an optional --config next to an
/// artifact: the given file, or the built-in arm the artifact names.
PlannerConfig config_for_artifact(const std::string& path, const std::string& arm_id, const MountOffset& mount) {
  if (!path.empty()) {
    PlannerConfig c = load_config(path);
    check_arm(c, arm_id, "artifact");
    return c;
  }
  PlannerConfig c;
  c.arm = ArmModel::preset(arm_id);
  c.mount = mount;
  return c;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

LayeredGraph graph_for_plan(const InverseReachabilityMap& irm, const PlanArtifact& plan) {
  return build_graph(irm, plan.plan.targets, plan.start, plan.mount);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Base configuration planner for mobile manipulators following an end-effector path"};
  app.require_subcommand(1);

  // rm build
  auto* rm_cmd = app.add_subcommand("rm", "reachability map")->require_subcommand(1);
  auto* rm_build = rm_cmd->add_subcommand("build", "build a reachability map from a planner config");
  std::string rm_config, rm_out;
  rm_build->add_option("--config", rm_config, "planner config")->required();
  rm_build->add_option("--out", rm_out, "output file")->required();

  // irm build / query
  auto* irm_cmd = app.add_subcommand("irm", "inverse reachability map")->require_subcommand(1);
  auto* irm_build = irm_cmd->add_subcommand("build", "invert a reachability map");
  std::string irm_rm, irm_out;
  irm_build->add_option("--rm", irm_rm, "reachability map")->required();
  irm_build->add_option("--out", irm_out, "output file")->required();
  auto* irm_query = irm_cmd->add_subcommand("query", "base candidates for one end-effector pose");
  std::string q_irm, q_pose, q_mount = "0,0,0", q_out;
  irm_query->add_option("--irm", q_irm, "inverse reachability map")->required();
  irm_query->add_option("--pose", q_pose, "x,y,z,alpha,beta,gamma")->required();
  irm_query->add_option("--mount", q_mount, "mount offset dx,dy,dz")->capture_default_str();
  irm_query->add_option("--out", q_out, "output file (default: stdout)");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "stage 1: layered-graph search");
  std::string p_irm, p_traj, p_demo, p_start, p_config, p_out;
  plan_cmd->add_option("--irm", p_irm, "inverse reachability map")->required();
  auto* p_traj_opt = plan_cmd->add_option("--traj", p_traj, "trajectory file (.json or .csv)");
  plan_cmd->add_option("--demo", p_demo, "built-in trajectory")->excludes(p_traj_opt)->check(CLI::IsMember(demo_names()));
  plan_cmd->add_option("--start", p_start, "start base position x,y (default: under the first waypoint)");
  plan_cmd->add_option("--config", p_config, "planner config (ds, mount, weights)");
  plan_cmd->add_option("--out", p_out, "output plan")->required();

  // regions
  auto* regions_cmd = app.add_subcommand("regions", "feasible convex regions for every layer of a plan");
  std::string r_irm, r_plan, r_config, r_out;
  regions_cmd->add_option("--irm", r_irm, "inverse reachability map")->required();
  regions_cmd->add_option("--plan", r_plan, "discrete plan")->required();
  regions_cmd->add_option("--config", r_config, "planner config (delta_g, n_min)");
  regions_cmd->add_option("--out", r_out, "output regions")->required();

  // refine
  auto* refine_cmd = app.add_subcommand("refine", "stage 2: L-BFGS refinement of a discrete plan");
  std::string f_plan, f_regions, f_config, f_out;
  std::optional<double> f_alpha;
  bool f_anchor_end = false;
  refine_cmd->add_option("--plan", f_plan, "discrete plan")->required();
  refine_cmd->add_option("--regions", f_regions, "regions")->required();
  refine_cmd->add_option("--alpha", f_alpha, "penalty sharpness (default from config, else 50)");
  refine_cmd->add_flag("--anchor-end", f_anchor_end, "also hold the final node fixed");
  refine_cmd->add_option("--config", f_config, "planner config (arm, weights, optimizer)");
  refine_cmd->add_option("--out", f_out, "output refined plan")->required();

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "run every stage and write all artifacts");
  std::string x_config, x_traj, x_demo, x_start, x_out;
  bool x_plots = false;
  pipe_cmd->add_option("--config", x_config, "planner config")->required();
  auto* x_traj_opt = pipe_cmd->add_option("--traj", x_traj, "trajectory file (.json or .csv)");
  pipe_cmd->add_option("--demo", x_demo, "built-in trajectory")->excludes(x_traj_opt)->check(CLI::IsMember(demo_names()));
  pipe_cmd->add_option("--start", x_start, "start base position x,y");
  pipe_cmd->add_option("--out-dir", x_out, "artifact directory")->required();
  pipe_cmd->add_flag("--plots", x_plots, "also write SVG plots");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "L_b, S_b and E_ee of a plan");
  std::string m_plan, m_config, m_out;
  metrics_cmd->add_option("--plan", m_plan, "plan")->required();
  metrics_cmd->add_option("--config", m_config, "planner config");
  metrics_cmd->add_option("--out", m_out, "output report (default: stdout)");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "SVG figures from pipeline artifacts");
  std::string g_run, g_out, g_config;
  std::optional<std::size_t> g_layer;
  plot_cmd->add_option("--run", g_run, "directory written by the pipeline command")->required();
  plot_cmd->add_option("--out-dir", g_out, "output directory (default: the run directory)");
  plot_cmd->add_option("--layer", g_layer, "layer shown in the region panels");
  plot_cmd->add_option("--config", g_config, "planner config (default: config.json in the run directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    apply_thread_cap_from_env();

    if (rm_build->parsed()) {
      const PlannerConfig config = load_config(rm_config);
      const auto rm = build_rm_for(config);
      write_json_file(rm_out, to_json(rm));
      std::cout << "reachability map: " << rm.voxels.size() << " voxels -> " << rm_out << '\n';
    } else if (irm_build->parsed()) {
      const auto irm = build_irm(rm_from_json(read_json_file(irm_rm)));
      write_json_file(irm_out, to_json(irm));
      std::cout << "inverse reachability map: " << irm.index.size() << " submaps, " << irm.entry_count()
                << " entries -> " << irm_out << '\n';
    } else if (irm_query->parsed()) {
      const auto irm = irm_from_json(read_json_file(q_irm));
      const auto v = parse_list(q_pose, 6, "--pose");
      const auto m = parse_list(q_mount, 3, "--mount");
      const Pose6 pose{v[0], v[1], v[2], v[3], v[4], v[5]};
      Json list = Json::array();
      for (const auto& c : query_irm(irm, pose, {m[0], m[1], m[2]})) {
        list.push_back({{"x", c.x}, {"y", c.y}, {"q", c.q.values()}, {"mu", c.mu}});
      }
      const Json out{{"format_version", kFormatVersion}, {"kind", "irm_query"}, {"pose", pose_to_json(pose)},
                     {"candidates", std::move(list)}};
      if (q_out.empty()) {
        std::cout << out.dump(2) << '\n';
      } else {
        write_json_file(q_out, out);
      }
    } else if (plan_cmd->parsed()) {
      if (p_traj.empty() && p_demo.empty()) throw InputError("plan needs --traj or --demo");
      const auto irm = irm_from_json(read_json_file(p_irm));
      const PlannerConfig config = config_for_artifact(p_config, irm.arm_id, {});
      const auto traj = trajectory_input(p_traj, p_demo, config);
      const auto s1 = plan_discrete(config, irm, traj, parse_start(p_start));
      PlanArtifact a;
      a.arm_id = irm.arm_id;
      a.mount = config.mount;
      a.start = s1.graph.start;
      a.plan = to_plan(s1);
      a.total_cost = s1.path.total_cost;
      a.stats = s1.stats;
      write_json_file(p_out, to_json(a));
      std::cout << "discrete plan: " << a.plan.base_path.size() << " nodes, cost " << a.total_cost << " -> " << p_out
                << '\n';
    } else if (regions_cmd->parsed()) {
      const auto irm = irm_from_json(read_json_file(r_irm));
      const auto plan = plan_from_json(read_json_file(r_plan));
      PlannerConfig config = config_for_artifact(r_config, plan.arm_id, plan.mount);
      if (r_config.empty()) config.delta_g = irm.grid.delta_p;
      const auto stage = extract_regions(config, graph_for_plan(irm, plan));
      print_warnings(stage.warnings);
      write_json_file(r_out, regions_to_json(stage.regions));
      std::cout << "regions for " << stage.regions.size() << " layers -> " << r_out << '\n';
    } else if (refine_cmd->parsed()) {
      const auto discrete = plan_from_json(read_json_file(f_plan));
      if (discrete.plan.provenance != Provenance::kDiscrete) throw InputError(f_plan + ": expected a discrete plan");
      const auto regions = regions_from_json(read_json_file(f_regions));
      PlannerConfig config = config_for_artifact(f_config, discrete.arm_id, discrete.mount);
      if (f_alpha) config.alpha = *f_alpha;
      if (!(config.alpha > 0.0)) throw ConfigError("--alpha must be positive");
      config.anchor_end = config.anchor_end || f_anchor_end;
      const auto stage = refine_plan(config, discrete.plan, regions);
      print_warnings(stage.warnings);
      PlanArtifact a = discrete;
      a.plan = stage.plan;
      a.refine = stage.refine;
      a.reverted = stage.reverted;
      write_json_file(f_out, to_json(a));
      std::cout << "refined plan: cost " << stage.refine.final_cost << " after " << stage.refine.iterations
                << " iterations -> " << f_out << '\n';
    } else if (pipe_cmd->parsed()) {
      if (x_traj.empty() && x_demo.empty()) throw InputError("pipeline needs --traj or --demo");
      const PlannerConfig config = load_config(x_config);
      const auto traj = trajectory_input(x_traj, x_demo, config);
      const auto result = run_pipeline(config, traj, parse_start(x_start), x_plots);
      print_warnings(result.warnings);
      for (const auto& p : write_pipeline_artifacts(result, config, x_out)) std::cout << "wrote " << p.string() << '\n';
      if (x_plots) {
        PlotInputs in{result.stage1.graph,        result.discrete_plan.base_path, result.refined.plan.base_path,
                      result.regions.regions,      result.regions.traces,          result.refined.refine.cost_trace,
                      std::nullopt};
        for (const auto& p : emit_plots(in, x_out)) std::cout << "wrote " << p.string() << '\n';
      }
      const auto& m = result.refined_metrics;
      std::cout << "L_b " << m.L_b << " m, S_b " << m.S_b << " 1/m, E_ee mean " << m.E_ee_mean << " mm, max "
                << m.E_ee_max << " mm\n";
    } else if (metrics_cmd->parsed()) {
      const auto a = plan_from_json(read_json_file(m_plan));
      const PlannerConfig config = config_for_artifact(m_config, a.arm_id, a.mount);
      const Json out = to_json(evaluate_plan(config.arm, a.mount, a.plan), a.plan.provenance);
      if (m_out.empty()) {
        std::cout << out.dump(2) << '\n';
      } else {
        write_json_file(m_out, out);
      }
    } else if (plot_cmd->parsed()) {
      const std::filesystem::path run = g_run;
      const auto irm = irm_from_json(read_json_file(run / "irm.json"));
      const auto discrete = plan_from_json(read_json_file(run / "discrete_plan.json"));
      if (g_config.empty() && std::filesystem::exists(run / "config.json")) g_config = (run / "config.json").string();
      const PlannerConfig config = config_for_artifact(g_config, discrete.arm_id, discrete.mount);
      const auto refined = plan_from_json(read_json_file(run / "refined_plan.json"));
      PlotInputs in;
      in.graph = graph_for_plan(irm, discrete);
      in.discrete = discrete.plan.base_path;
      in.refined = refined.plan.base_path;
      in.regions = regions_from_json(read_json_file(run / "regions.json"));
      in.traces = extract_regions(config, in.graph, true).traces;
      in.cost_trace = refined.refine.cost_trace;
      in.region_layer = g_layer;
      const std::filesystem::path out = g_out.empty() ? run : std::filesystem::path(g_out);
      for (const auto& p : emit_plots(in, out)) std::cout << "wrote " << p.string() << '\n';
      const std::filesystem::path rm_path = run / "rm.json";
      if (std::filesystem::exists(rm_path)) {
        const auto slice = out / "rm_slice.svg";
        std::ofstream f(slice, std::ios::binary | std::ios::trunc);
        f << svg_rm_slice(rm_from_json(read_json_file(rm_path)));
        if (!f) throw IOError("failed writing " + slice.string());
        std::cout << "wrote " << slice.string() << '\n';
      }
    }
    return 0;
  } catch (const UnreachableWaypoint& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitInput;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IOError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
