#include "irmplan/trajectory.hpp"

#include "irmplan/errors.hpp"
#include "json_fields.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace irmplan {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw FormatError("line " + std::to_string(line) + ": '" + cell + "' is not a finite number");
  }
  return v;
}

void check_count(const std::vector<Pose6>& poses) {
  if (poses.size() < 2) throw FormatError("trajectory needs at least 2 poses, got " + std::to_string(poses.size()));
}

std::vector<Pose6> sample(int n, auto&& at) {
  std::vector<Pose6> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) out.push_back(at(static_cast<double>(i) / n));
  return out;
}

}  // namespace

std::vector<Pose6> trajectory_from_json(const Json& j) {
  check_header(j, "trajectory");
  const Json& poses = jf::array(jf::at(j, "poses", ""), "poses");
  std::vector<Pose6> out;
  out.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto v = jf::numbers(poses[i], jf::index("poses", i), 6);
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  check_count(out);
  return out;
}

std::vector<Pose6> trajectory_from_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<Pose6> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (!header) {
      if (cells != std::vector<std::string>{"x", "y", "z", "alpha", "beta", "gamma"}) {
        throw FormatError("line " + std::to_string(lineno) + ": expected header 'x,y,z,alpha,beta,gamma'");
      }
      header = true;
      continue;
    }
    if (cells.size() != 6) {
      throw FormatError("line " + std::to_string(lineno) + ": expected 6 values, got " + std::to_string(cells.size()));
    }
    double v[6];
    for (std::size_t k = 0; k < 6; ++k) v[k] = parse_double(cells[k], lineno);
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  if (!header) throw FormatError("line 1: missing header 'x,y,z,alpha,beta,gamma'");
  check_count(out);
  return out;
}

std::vector<Pose6> load_trajectory(const std::filesystem::path& path) {
  try {
    if (path.extension() == ".csv") {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IOError("cannot open " + path.string());
      std::stringstream buf;
      buf << in.rdbuf();
      return trajectory_from_csv(buf.str());
    }
    return trajectory_from_json(read_json_file(path));
  } catch (const FormatError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw FormatError(path.string() + ": " + what);
  }
}

Json trajectory_to_json(const std::vector<Pose6>& poses) {
  Json list = Json::array();
  for (const auto& p : poses) list.push_back(pose_to_json(p));
  return {{"format_version", kFormatVersion}, {"kind", "trajectory"}, {"poses", std::move(list)}};
}

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"lemniscate", "capsule", "polygon"};
  return names;
}

std::vector<Pose6> demo_trajectory(const std::string& name, double z0, bool vary_height) {
  const double h = vary_height ? 1.0 : 0.0;
  if (name == "lemniscate") {
    return sample(720, [&](double s) {
      const double t = 2 * kPi * s;
      return Pose6{1.5 * std::cos(t), 0.6 * std::sin(2 * t), z0 + h * 0.1 * (1 - std::cos(t)), 0, 0, 0};
    });
  }
  if (name == "capsule") {
    // Arc-length parameter over two 1.5 m sides and two half circles.
    const double r = 0.5, side = 1.5, arc = kPi * r;
    const double total = 2 * side + 2 * arc;
    return sample(720, [&](double s) {
      double d = s * total;
      double x = 0, y = 0;
      if (d < side) {
        x = -side / 2 + d;
        y = -r;
      } else if ((d -= side) < arc) {
        const double a = -kPi / 2 + d / r;
        x = side / 2 + r * std::cos(a);
        y = r * std::sin(a);
      } else if ((d -= arc) < side) {
        x = side / 2 - d;
        y = r;
      } else {
        d -= side;
        const double a = kPi / 2 + d / r;
        x = -side / 2 + r * std::cos(a);
        y = r * std::sin(a);
      }
      return Pose6{x, y, z0, 0, 0, 0};
    });
  }
  if (name == "polygon") {
    const std::vector<std::pair<double, double>> v{{-1.5, 0}, {-0.75, -0.75}, {0.75, -0.75}, {1.5, 0}, {0.75, 0.75}, {-0.75, 0.75}, {-1.5, 0}};
    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < v.size(); ++i) {
      cum.push_back(cum.back() + std::hypot(v[i].first - v[i - 1].first, v[i].second - v[i - 1].second));
    }
    std::vector<Pose6> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back({v[i].first, v[i].second, z0 + h * 0.2 * cum[i] / cum.back(), 0, 0, 0});
    }
    return out;
  }
  throw InputError("unknown demo trajectory '" + name + "' (expected lemniscate, capsule or polygon)");
}

}  // namespace irmplan
