#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aebsim/aeb.hpp"
#include "aebsim/attacks.hpp"
#include "aebsim/fusion.hpp"
#include "aebsim/monitors.hpp"
#include "aebsim/sensors.hpp"
#include "aebsim/world.hpp"

namespace aebsim {

inline constexpr int kScenarioFormatVersion = 1;

/// Schema violation while reading a scenario, sweep or analysis document.
/// The message starts with the JSON path of the offending node.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& path, const std::string& message)
      : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + message),
        path_(path),
        message_(message) {}
  const std::string& path() const { return path_; }
  const std::string& message() const { return message_; }

 private:
  std::string path_;
  std::string message_;
};

/// Parses a JSON file; errors name the file.
nlohmann::json read_json_file(const std::string& path);

/// Which sensors feed detection concatenation (and thus the controller).
struct FusionInputs {
  bool radar = true;
  bool camera = true;
  bool lidar = true;

  bool operator==(const FusionInputs&) const = default;
  bool uses(SensorKind kind) const;
};

struct EgoConfig {
  Body body;  // velocity along the heading is the initial speed
  bool aeb_enabled = true;
  double lane_halfwidth = 1.75;
  SensorSuite sensors;
  FusionInputs fusion_inputs;
  TrackerConfig tracker;
  AebConfig aeb;
};

struct Termination {
  bool on_crash = true;
  bool on_ego_stopped = true;
};

struct Scenario {
  int format_version = kScenarioFormatVersion;
  std::string name;
  double duration_limit = 10.0;  // s
  double dt = 0.05;              // s
  std::uint64_t seed = 1;
  EgoConfig ego;
  std::vector<Body> actors;
  std::vector<AttackSpec> attacks;
  std::vector<SafetyConstraint> monitors;
  std::optional<Vec2> conflict_point;
  double comfort_margin = kDefaultComfortMargin;
  Termination termination;
  /// Unbound attack parameters for template embedding; carried verbatim.
  nlohmann::json attack_slots;

  WorldState initial_world() const;
  /// Semantic checks beyond the schema (ids unique, attacks target installed sensors, ...).
  void validate() const;
};

/// Strict load: unknown keys and type mismatches raise ScenarioError.
Scenario load_scenario(const nlohmann::json& document);
Scenario load_scenario_file(const std::string& path);
nlohmann::json to_json(const Scenario& scenario);

/// FNV-1a 64 over the canonical serialisation, hex encoded.
std::string scenario_hash(const Scenario& scenario);

struct CpnoParams {
  double ego_speed = 25.0 / 3.6;  // m/s
  double ped_speed = 5.0 / 3.6;   // m/s
  double conflict_distance = 40.0;  // ego front bumper to the pedestrian path at t=0, m
  double ped_start_offset = 4.0;    // lateral start of the pedestrian, m (nearside = +y)
  double occluder_lateral = 3.0;    // parked-car centerline, m
  double occluder_gap = 1.4;        // gap between the parked cars the pedestrian steps out of, m
  double occluder_length = 4.5;
  double occluder_width = 1.8;
};

/// Car-to-pedestrian nearside obstructed: the pedestrian waits between two
/// parked cars, then crosses so that it reaches the ego centerline exactly
/// when an unbraked ego would arrive.
Scenario instantiate_cpno(const CpnoParams& params = {});

struct SweepAxis {
  std::string path;  // JSON pointer into the base scenario document
  std::vector<nlohmann::json> values;
  std::string label;  // display name; defaults to the path

  bool operator==(const SweepAxis&) const = default;
};

struct SweepGrid {
  int format_version = kScenarioFormatVersion;
  std::string name;
  nlohmann::json base;  // scenario document
  std::vector<SweepAxis> axes;
  int replicates = 1;
  std::uint64_t seed = 1;

  std::size_t cell_count() const;
  void validate() const;
};

SweepGrid load_sweep(const nlohmann::json& document);
SweepGrid load_sweep_file(const std::string& path, const std::string& base_dir = {});
nlohmann::json to_json(const SweepGrid& grid);

struct SweepCell {
  std::vector<std::size_t> coords;
  Scenario scenario;  // seed already set to the cell's first replicate seed
};

/// Cartesian product of the axes in row-major order (last axis fastest).
std::vector<SweepCell> expand_sweep(const SweepGrid& grid);

/// Per-cell, per-replicate seed: hash(base seed, coordinates, replicate).
std::uint64_t cell_seed(std::uint64_t base_seed, const std::vector<std::size_t>& coords, int replicate);

/// Inverse of the row-major flattening used by expand_sweep.
std::vector<std::size_t> unflatten(std::size_t index, const std::vector<std::size_t>& shape);
std::size_t flatten(const std::vector<std::size_t>& coords, const std::vector<std::size_t>& shape);

}  // namespace aebsim
