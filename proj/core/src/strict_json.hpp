#pragma once

// Strict JSON reading helpers shared by the document loaders.

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "aebsim/scenarios.hpp"

namespace aebsim::detail {

using json = nlohmann::json;

inline std::string type_name(const json& j) { return j.type_name(); }

// Strict object reader: every key must be consumed before finish().
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ScenarioError(path_, "expected an object, got " + type_name(j_));
  }

  const std::string& path() const { return path_; }
  std::string sub(const std::string& key) const { return path_ + "/" + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& require(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) throw ScenarioError(path_, "missing required key '" + key + "'");
    return *it;
  }

  const json* optional(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key) { return as_number(require(key), sub(key)); }
  double number(const std::string& key, double fallback) {
    const json* v = optional(key);
    return v ? as_number(*v, sub(key)) : fallback;
  }
  int integer(const std::string& key, int fallback) {
    const json* v = optional(key);
    return v ? as_int(*v, sub(key)) : fallback;
  }
  bool boolean(const std::string& key, bool fallback) {
    const json* v = optional(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ScenarioError(sub(key), "expected a boolean, got " + type_name(*v));
    return v->get<bool>();
  }
  std::string string(const std::string& key) { return as_string(require(key), sub(key)); }
  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = optional(key);
    return v ? as_string(*v, sub(key)) : fallback;
  }
  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
    const json* v = optional(key);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v->get<std::int64_t>());
    throw ScenarioError(sub(key), "expected a non-negative integer");
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ScenarioError(sub(key), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ScenarioError(path, "expected a number, got " + type_name(v));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(path, "number must be finite");
    return d;
  }
  static int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ScenarioError(path, "expected an integer, got " + type_name(v));
    const auto i = v.get<std::int64_t>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
      throw ScenarioError(path, "integer out of range");
    return static_cast<int>(i);
  }
  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ScenarioError(path, "expected a string, got " + type_name(v));
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline const json& require_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ScenarioError(path, "expected an array, got " + type_name(v));
  return v;
}

// Converts enum parse failures into path-qualified errors.
template <class F>
auto parse_enum(const json& v, const std::string& path, F&& from_string) {
  const std::string name = ObjectReader::as_string(v, path);
  try {
    return from_string(name);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(path, e.what());
  }
}

}  // namespace aebsim::detail
