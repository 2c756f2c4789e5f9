#pragma once

#include "irmplan/io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace irmplan {

/// Reads a trajectory from JSON ({"format_version", "kind": "trajectory",
/// "poses": [[x, y, z, alpha, beta, gamma], ...]}) or CSV (header line
/// "x,y,z,alpha,beta,gamma", one pose per row). The format is chosen by the
/// ".csv" extension. Throws FormatError with a line or field diagnostic.
std::vector<Pose6> load_trajectory(const std::filesystem::path& path);

std::vector<Pose6> trajectory_from_json(const Json& j);
std::vector<Pose6> trajectory_from_csv(const std::string& text);
Json trajectory_to_json(const std::vector<Pose6>& poses);

/// Names accepted by demo_trajectory.
const std::vector<std::string>& demo_names();

/// Closed demo paths centered on the origin (resample with
/// discretize_trajectory). The curved ones are sampled densely; the polygon
/// is returned as its vertex list:
///   lemniscate  x = 1.5 cos t, y = 0.6 sin 2t             (3.0 x 1.2 m)
///               z = z0 + 0.1 (1 - cos t)                   (0.2 m rise)
///   capsule     stadium, straight sides 1.5 m, radius 0.5  (2.5 x 1.0 m)
///               z = z0
///   polygon     elongated hexagon, vertices (+-1.5, 0), (+-0.75, +-0.75)
///                                                          (3.0 x 1.5 m)
///               z rises linearly by 0.2 m along the path
/// Orientation is zero throughout. With vary_height false, z = z0 exactly.
/// Throws InputError for an unknown name.
std::vector<Pose6> demo_trajectory(const std::string& name, double z0, bool vary_height = true);

}  // namespace irmplan
