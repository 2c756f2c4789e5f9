#include "doctest.h"

#include "irmplan/config.hpp"
#include "irmplan/errors.hpp"
#include "irmplan/io.hpp"
#include "irmplan/trajectory.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>

using namespace irmplan;

namespace {

Json demo_config_json() {
  return Json::parse(R"({
    "format_version": 1,
    "kind": "planner_config",
    "arm": {"id": "p2", "dh": [{"a": 0.4, "alpha": 0, "d": 0}, {"a": 0.2, "alpha": 0, "d": 0}],
            "limits": [[-3, 3], [-2.8, 2.8]]},
    "grid": {"delta_p": 0.1, "delta_r": 6.283185307179586},
    "mount_offset": [0.1, 0, 0.5]
  })");
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "irmplan_test_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("header checks") {
  Json j{{"format_version", kFormatVersion}, {"kind", "rm"}};
  CHECK_NOTHROW(check_header(j, "rm"));
  CHECK_THROWS_AS(check_header(j, "irm"), FormatError);
  j["format_version"] = 2;
  CHECK_THROWS_AS(check_header(j, "rm"), FormatError);
  CHECK_THROWS_AS(check_header(Json{{"kind", "rm"}}, "rm"), FormatError);
}

TEST_CASE("rm and irm survive a file round trip") {
  GridSpec grid;
  grid.delta_p = 0.1;
  grid.radius = 0.6;
  const auto rm = build_rm(ArmModel::planar_two_link(0.4, 0.2), grid);
  REQUIRE(!rm.voxels.empty());
  const auto path = std::filesystem::temp_directory_path() / "irmplan_test_io" / "rm.json";
  std::filesystem::create_directories(path.parent_path());
  write_json_file(path, to_json(rm));
  CHECK(rm_from_json(read_json_file(path)) == rm);

  const auto irm = build_irm(rm);
  CHECK(irm_from_json(to_json(irm)) == irm);
  // The wrong kind is rejected.
  CHECK_THROWS_AS(irm_from_json(to_json(rm)), FormatError);
}

TEST_CASE("rm voxels must be sorted") {
  GridSpec grid;
  grid.delta_p = 0.1;
  grid.radius = 0.6;
  Json j = to_json(build_rm(ArmModel::planar_two_link(0.4, 0.2), grid));
  auto& voxels = j["voxels"];
  REQUIRE(voxels.size() >= 2);
  std::swap(voxels[0], voxels[1]);
  CHECK_THROWS_AS(rm_from_json(j), FormatError);
}

TEST_CASE("truncated and missing files") {
  const auto bad = temp_file("truncated.json", R"({"format_version": 1, "kind": "rm", "grid": {)");
  CHECK_THROWS_AS(read_json_file(bad), FormatError);
  CHECK_THROWS_AS(read_json_file(bad.parent_path() / "does_not_exist.json"), IOError);
  CHECK_THROWS_AS(write_json_file("/nonexistent_dir_for_irmplan/x.json", Json::object()), IOError);
}

TEST_CASE("regions json keeps pinned layers") {
  std::vector<RegionSet> layers(3);
  for (std::size_t i = 0; i < layers.size(); ++i) layers[i].layer_index = i;
  layers[0].regions.push_back({{{0, 0}, {1, 0}, {0, 1}}});
  layers[2].regions.push_back({{{0, 0}, {2, 0}, {2, 2}, {0, 2}}});
  CHECK(regions_from_json(regions_to_json(layers)) == layers);

  Json j = regions_to_json(layers);
  j["layers"][0]["regions"][0] = Json::parse("[[0, 0], [1, 0]]");
  CHECK_THROWS_AS(regions_from_json(j), FormatError);
}

TEST_CASE("metrics json") {
  MetricsReport m{1.25, 0.5, 1e-9, 5e-10, 6e-10, 0, 0};
  const Json j = to_json(m, Provenance::kRefined);
  CHECK(j.at("provenance") == "refined");
  CHECK(metrics_from_json(j) == m);
}

TEST_CASE("config: defaults and round trip") {
  const auto c = config_from_json(demo_config_json());
  CHECK(c.grid.radius == doctest::Approx(0.6));
  CHECK(c.delta_g == c.grid.delta_p);
  CHECK(c.n_min == 5);
  CHECK(c.mount == MountOffset{0.1, 0.0, 0.5});
  CHECK(config_from_json(to_json(c)) == c);
}

TEST_CASE("config: presets") {
  Json j = demo_config_json();
  j["arm"] = Json{{"preset", "desk6"}};
  j["grid"] = Json{{"delta_p", 0.25}, {"delta_r", std::numbers::pi}};
  CHECK(config_from_json(j).arm.joint_count() == 6);
  j["arm"] = Json{{"preset", "no_such_arm"}};
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
}

TEST_CASE("config: strictness") {
  Json j = demo_config_json();
  j["unknown"] = 1;
  CHECK_THROWS_AS(config_from_json(j), FormatError);

  j = demo_config_json();
  j["weights"] = Json{{"length", 1}, {"curvature", 2}};
  CHECK_THROWS_AS(config_from_json(j), FormatError);

  j = demo_config_json();
  j["ds"] = "0.2";
  CHECK_THROWS_AS(config_from_json(j), FormatError);

  j = demo_config_json();
  j["mount_offset"] = Json::array({0, 0});
  CHECK_THROWS_AS(config_from_json(j), FormatError);

  j = demo_config_json();
  j["n_min"] = 2;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);

  j = demo_config_json();
  j["alpha"] = 0;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);

  j = demo_config_json();
  j["grid"]["delta_r"] = 1.0;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);

  j = demo_config_json();
  j["optimizer"] = Json{{"history", 0}};
  CHECK_THROWS_AS(config_from_json(j), ConfigError);

  j = demo_config_json();
  j["kind"] = "plan";
  CHECK_THROWS_AS(config_from_json(j), FormatError);
}

TEST_CASE("config: error messages name the field") {
  Json j = demo_config_json();
  j["arm"]["dh"][1]["a"] = "long";
  try {
    config_from_json(j);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("arm.dh[1]") != std::string::npos);
  }
}

TEST_CASE("trajectory csv") {
  const auto poses = trajectory_from_csv("x,y,z,alpha,beta,gamma\n0,0,0.5,0,0,0\n1,2,0.5,0,0,0.25\n");
  REQUIRE(poses.size() == 2);
  CHECK(poses[1].y == 2.0);
  CHECK(poses[1].gamma == 0.25);

  CHECK_THROWS_AS(trajectory_from_csv("0,0,0,0,0,0\n1,1,1,0,0,0\n"), FormatError);
  CHECK_THROWS_AS(trajectory_from_csv("x,y,z,alpha,beta,gamma\n0,0,0,0,0\n1,1,1,0,0,0\n"), FormatError);
  CHECK_THROWS_AS(trajectory_from_csv("x,y,z,alpha,beta,gamma\n0,0,nan,0,0,0\n1,1,1,0,0,0\n"), FormatError);
  CHECK_THROWS_AS(trajectory_from_csv("x,y,z,alpha,beta,gamma\n0,0,0,0,0,0\n"), FormatError);
  try {
    trajectory_from_csv("x,y,z,alpha,beta,gamma\n0,0,0,0,0,0\n1,1,abc,0,0,0\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("trajectory files") {
  const std::vector<Pose6> poses{{0, 0, 0.5, 0, 0, 0}, {0.5, 0.25, 0.5, 0, 0, 1.0}, {1, 0.5, 0.5, 0, 0, 0}};
  const auto json_path = temp_file("traj.json", trajectory_to_json(poses).dump());
  CHECK(load_trajectory(json_path) == poses);
  const auto csv_path = temp_file("traj.csv", "x,y,z,alpha,beta,gamma\n0,0,0.5,0,0,0\n0.5,0.25,0.5,0,0,1\n1,0.5,0.5,0,0,0\n");
  CHECK(load_trajectory(csv_path) == poses);
  CHECK_THROWS_AS(load_trajectory(csv_path.parent_path() / "missing.csv"), IOError);
}

TEST_CASE("demo trajectories") {
  for (const auto& name : demo_names()) {
    const auto flat = demo_trajectory(name, 0.5, false);
    REQUIRE(flat.size() >= 7);
    for (const auto& p : flat) CHECK(p.z == 0.5);
    // Closed paths.
    CHECK(std::hypot(flat.front().x - flat.back().x, flat.front().y - flat.back().y) < 1e-9);
    double zmax = 0.0;
    for (const auto& p : demo_trajectory(name, 0.5, true)) zmax = std::max(zmax, p.z);
    if (name != "capsule") CHECK(zmax > 0.6);
  }
  CHECK_THROWS_AS(demo_trajectory("spiral", 0.5), InputError);
}
