#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aebsim/sensors.hpp"
#include "aebsim/world.hpp"

namespace aebsim {

enum class AttackKind {
  RadarDenialJamming,
  RadarRangeDeception,
  RadarVelocityDeception,
  CameraAdversarialPatch,
  LidarBlinding,
};

std::string_view to_string(AttackKind kind);
AttackKind attack_kind_from_string(std::string_view name);
SensorKind target_sensor(AttackKind kind);

/// Frame the attacker pose is expressed in. `World` is a fixed roadside
/// point; `Ego` is a fixed offset from the ego sensor mount (an attacker that
/// keeps station in front of the victim).
enum class AttackAnchor { World, Ego };

std::string_view to_string(AttackAnchor anchor);
AttackAnchor attack_anchor_from_string(std::string_view name);

struct AttackSpec {
  std::string id;
  AttackKind kind = AttackKind::RadarDenialJamming;
  Pose2 attacker_pose;
  AttackAnchor anchor = AttackAnchor::World;
  double tx_power = 10.0;         // dBm, radar kinds
  double antenna_gain = 0.0;      // dBi, radar kinds
  double spoof_range_offset = 0;  // m, range deception
  double spoof_velocity = 0;      // m/s, velocity deception (reported range rate)
  std::set<ObjectClass> patch_classes;
  Sector sector;                  // LiDAR blinding, ego frame
  double t_start = 0.0;
  double t_end = 1e9;

  bool operator==(const AttackSpec&) const = default;
  bool active_at(double t) const { return t >= t_start && t <= t_end; }
  /// Throws std::invalid_argument when the kind-relevant fields are unusable.
  void validate() const;
};

/// Sensors fitted to the ego. Absent optionals mean the sensor is not installed.
struct SensorSuite {
  std::optional<RadarConfig> radar;
  std::optional<CameraConfig> camera;
  std::optional<LidarConfig> lidar;

  bool operator==(const SensorSuite&) const = default;
  bool has(SensorKind kind) const;
};

/// Attacker position in world coordinates given the current sensor mount.
Vec2 attacker_position(const AttackSpec& spec, const Pose2& sensor_pose);

/// One-way link budget jammer -> victim radar receiver, in dBm:
/// Pj + Gj + Gr + 10 log10(lambda^2 / ((4 pi)^2 d^2)), d clamped to >= 0.5 m.
double jammer_power_at_receiver(const AttackSpec& spec, const Pose2& sensor_pose, const RadarConfig& cfg);

/// Ground-truth most important object: nearest body ahead of the sensor mount
/// whose nearest point lies within the lane half-width.
std::optional<TargetGeometry> true_mio(const WorldState& world, double lane_halfwidth);

/// Throws std::invalid_argument when a spec targets a sensor the suite lacks.
void check_attack_targets(const std::vector<AttackSpec>& specs, const SensorSuite& sensors);

Interference compile_interference(const std::vector<AttackSpec>& specs, const WorldState& world,
                                  const SensorSuite& sensors, double lane_halfwidth);

struct AttackTraceRecord {
  double time = 0.0;
  std::vector<std::string> active;
  double extra_noise = 0.0;  // dBm, -inf when none
  std::size_t ghosts = 0;
  std::size_t suppressed_classes = 0;
  std::size_t blinded_sectors = 0;
};

AttackTraceRecord summarize(const std::vector<AttackSpec>& specs, const Interference& interference, double time);

}  // namespace aebsim
