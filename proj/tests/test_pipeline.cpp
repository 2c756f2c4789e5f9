#include "doctest.h"

#include "irmplan/errors.hpp"
#include "irmplan/pipeline.hpp"
#include "irmplan/plot.hpp"
#include "irmplan/trajectory.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>

using namespace irmplan;

namespace {

const PipelineResult& lemniscate_run() {
  static const PipelineResult run = [] {
    const auto config = load_config(IRMPLAN_DEMO_CONFIG);
    return run_pipeline(config, demo_for(config, "lemniscate"), std::nullopt, true);
  }();
  return run;
}

// Tag balance check: every opened element is closed in order.
bool well_formed(const std::string& svg) {
  static const std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
  std::vector<std::string> stack;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[3] == "/") continue;
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    } else {
      stack.push_back(m[2]);
    }
  }
  return stack.empty() && svg.find("<svg") != std::string::npos;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(IRMPLAN_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "irmplan_test_pipeline" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("lemniscate pipeline end to end") {
  const auto& run = lemniscate_run();
  CHECK(run.refined_metrics.E_ee_mean < 1e-3);
  CHECK(run.discrete_metrics.E_ee_mean < 1e-3);
  CHECK(run.refined.plan.provenance == Provenance::kRefined);
  CHECK(run.refined.plan.base_path.size() == run.stage1.waypoints.size());
  CHECK(run.regions.regions.size() == run.stage1.waypoints.size());
  CHECK(run.regions.traces.size() == run.regions.regions.size());
  // Refinement keeps the start anchored.
  CHECK(run.refined.plan.base_path.front() == run.discrete_plan.base_path.front());
}

TEST_CASE("pipeline is deterministic") {
  const auto config = load_config(IRMPLAN_DEMO_CONFIG);
  const auto again = run_pipeline(config, demo_for(config, "lemniscate"), std::nullopt, true);
  const auto& run = lemniscate_run();
  CHECK(again.refined.plan == run.refined.plan);
  CHECK(again.refined_metrics == run.refined_metrics);
  CHECK(again.regions.regions == run.regions.regions);
}

TEST_CASE("unreachable waypoint") {
  const auto config = load_config(IRMPLAN_DEMO_CONFIG);
  const auto irm = build_irm(build_rm_for(config));
  // Far above the mount: no base can bring the planar arm there.
  const std::vector<Pose6> traj{{0, 0, config.mount.dz, 0, 0, 0}, {1, 0, config.mount.dz + 2.0, 0, 0, 0}};
  CHECK_THROWS_AS(plan_discrete(config, irm, traj), UnreachableWaypoint);
}

TEST_CASE("svg output is well formed") {
  const auto& run = lemniscate_run();
  CHECK(well_formed(svg_graph(run.stage1.graph, run.stage1.path.nodes)));
  CHECK(well_formed(svg_regions(&run.regions.traces[0], 0)));
  CHECK(well_formed(svg_refinement(run.discrete_plan.base_path, run.refined.plan.base_path, run.regions.regions)));
  CHECK(well_formed(svg_cost(run.refined.refine.cost_trace)));
  CHECK(well_formed(svg_rm_slice(run.rm)));
  CHECK(well_formed(svg_cost({})));

  const auto pinned = svg_regions(nullptr, 3);
  CHECK(well_formed(pinned));
  CHECK(pinned.find("pinned") != std::string::npos);
}

TEST_CASE("emit_plots writes four files") {
  const auto& run = lemniscate_run();
  PlotInputs in;
  in.graph = run.stage1.graph;
  in.discrete = run.discrete_plan.base_path;
  in.refined = run.refined.plan.base_path;
  in.regions = run.regions.regions;
  in.traces = run.regions.traces;
  in.cost_trace = run.refined.refine.cost_trace;
  const auto dir = scratch("plots");
  const auto files = emit_plots(in, dir);
  REQUIRE(files.size() == 4);
  for (const auto& f : files) {
    CHECK(std::filesystem::exists(f));
    CHECK(well_formed(slurp(f)));
  }
  CHECK_THROWS_AS(emit_plots(in, "/proc/irmplan_no_such_dir"), IOError);
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch("cli");
  const std::string cfg = IRMPLAN_DEMO_CONFIG;
  CHECK(run_cli("rm build --config " + cfg + " --out " + (dir / "rm.json").string()) == 0);
  CHECK(run_cli("irm build --rm " + (dir / "rm.json").string() + " --out " + (dir / "irm.json").string()) == 0);

  std::ofstream(dir / "far.csv") << "x,y,z,alpha,beta,gamma\n0,0,0.5,0,0,0\n1,0,3.0,0,0,0\n";
  CHECK(run_cli("plan --irm " + (dir / "irm.json").string() + " --traj " + (dir / "far.csv").string() + " --config " +
                cfg + " --out " + (dir / "plan.json").string()) == 3);

  std::ofstream(dir / "bad.csv") << "x,y,z\n0,0,0\n";
  CHECK(run_cli("plan --irm " + (dir / "irm.json").string() + " --traj " + (dir / "bad.csv").string() + " --config " +
                cfg + " --out " + (dir / "plan.json").string()) == 2);
  CHECK(run_cli("irm build --rm " + (dir / "missing.json").string() + " --out " + (dir / "x.json").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("") == 2);
}
