#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace irmplan {

/// Bad or out-of-range configuration (grid too fine, invalid DH table, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or version-mismatched artifact file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input such as a degenerate trajectory.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trajectory waypoint has no base candidate in the IRM.
class UnreachableWaypoint : public std::runtime_error {
 public:
  explicit UnreachableWaypoint(std::size_t index)
      : std::runtime_error("waypoint " + std::to_string(index) +
                           " is unreachable: no base candidate in the inverse reachability map"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Nothing survived region extraction for a layer.
class EmptyRegionSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cluster whose points are all collinear (zero-area hull).
class DegenerateCluster : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace irmplan
