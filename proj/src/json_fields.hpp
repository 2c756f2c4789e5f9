#pragma once

// Schema-checked accessors for nlohmann::json. Every failure names the
// offending field path, e.g. "grid.delta_p: expected a number".

#include "irmplan/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace irmplan::jf {

using Json = nlohmann::json;

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
inline std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const Json& object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw FormatError(path + ": expected an object");
  return j;
}

inline const Json& array(const Json& j, const std::string& path, std::size_t expected_size = SIZE_MAX) {
  if (!j.is_array()) throw FormatError(path + ": expected an array");
  if (expected_size != SIZE_MAX && j.size() != expected_size) {
    throw FormatError(path + ": expected " + std::to_string(expected_size) + " elements, got " + std::to_string(j.size()));
  }
  return j;
}

inline const Json& at(const Json& j, const std::string& key, const std::string& path) {
  object(j, path);
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(join(path, key) + ": missing");
  return *it;
}

inline const Json* find(const Json& j, const std::string& key, const std::string& path) {
  object(j, path);
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw FormatError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(path + ": value is not finite");
  return v;
}

inline double number(const Json& j, const std::string& key, const std::string& path) {
  return number(at(j, key, path), join(path, key));
}

inline long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw FormatError(path + ": expected an integer");
  return j.get<long long>();
}

inline long long integer(const Json& j, const std::string& key, const std::string& path) {
  return integer(at(j, key, path), join(path, key));
}

inline bool boolean(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw FormatError(path + ": expected true or false");
  return j.get<bool>();
}

inline std::string string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw FormatError(path + ": expected a string");
  return j.get<std::string>();
}

inline std::string string(const Json& j, const std::string& key, const std::string& path) {
  return string(at(j, key, path), join(path, key));
}

inline std::vector<double> numbers(const Json& j, const std::string& path, std::size_t expected_size = SIZE_MAX) {
  array(j, path, expected_size);
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index(path, i)));
  return out;
}

/// Rejects keys outside `allowed`.
inline void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& path) {
  object(j, path);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw FormatError(join(path, key) + ": unknown key");
  }
}

}  // namespace irmplan::jf
