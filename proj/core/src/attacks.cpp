#include "aebsim/attacks.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aebsim {

namespace {

constexpr std::array<std::pair<AttackKind, std::string_view>, 5> kKindNames{{
    {AttackKind::RadarDenialJamming, "RadarDenialJamming"},
    {AttackKind::RadarRangeDeception, "RadarRangeDeception"},
    {AttackKind::RadarVelocityDeception, "RadarVelocityDeception"},
    {AttackKind::CameraAdversarialPatch, "CameraAdversarialPatch"},
    {AttackKind::LidarBlinding, "LidarBlinding"},
}};

constexpr double kMinJammerDistance = 0.5;

double sum_dbm(double a, double b) { return mw_to_dbm(dbm_to_mw(a) + dbm_to_mw(b)); }

}  // namespace

std::string_view to_string(AttackKind kind) {
  for (const auto& [k, n] : kKindNames)
    if (k == kind) return n;
  return "RadarDenialJamming";
}

AttackKind attack_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown attack kind '" + std::string(name) + "'");
}

SensorKind target_sensor(AttackKind kind) {
  switch (kind) {
    case AttackKind::CameraAdversarialPatch: return SensorKind::Camera;
    case AttackKind::LidarBlinding: return SensorKind::Lidar;
    default: return SensorKind::Radar;
  }
}

std::string_view to_string(AttackAnchor anchor) { return anchor == AttackAnchor::Ego ? "ego" : "world"; }

AttackAnchor attack_anchor_from_string(std::string_view name) {
  if (name == "world") return AttackAnchor::World;
  if (name == "ego") return AttackAnchor::Ego;
  throw std::invalid_argument("unknown attack anchor '" + std::string(name) + "'");
}

void AttackSpec::validate() const {
  if (!(t_start <= t_end)) throw std::invalid_argument("attack '" + id + "': t_start must not exceed t_end");
  if (!attacker_pose.finite()) throw std::invalid_argument("attack '" + id + "': attacker_pose must be finite");
  switch (kind) {
    case AttackKind::RadarDenialJamming:
    case AttackKind::RadarRangeDeception:
    case AttackKind::RadarVelocityDeception:
      if (!std::isfinite(tx_power) || !std::isfinite(antenna_gain))
        throw std::invalid_argument("attack '" + id + "': tx_power and antenna_gain must be finite");
      break;
    case AttackKind::CameraAdversarialPatch:
      if (patch_classes.empty()) throw std::invalid_argument("attack '" + id + "': patch_classes must not be empty");
      break;
    case AttackKind::LidarBlinding:
      if (!(sector.lo <= sector.hi)) throw std::invalid_argument("attack '" + id + "': sector must satisfy lo <= hi");
      break;
  }
}

bool SensorSuite::has(SensorKind kind) const {
  switch (kind) {
    case SensorKind::Radar: return radar.has_value();
    case SensorKind::Camera: return camera.has_value();
    case SensorKind::Lidar: return lidar.has_value();
  }
  return false;
}

Vec2 attacker_position(const AttackSpec& spec, const Pose2& sensor_pose) {
  if (spec.anchor == AttackAnchor::Ego) return sensor_pose.to_world(spec.attacker_pose.position());
  return spec.attacker_pose.position();
}

double jammer_power_at_receiver(const AttackSpec& spec, const Pose2& sensor_pose, const RadarConfig& cfg) {
  if (!std::isfinite(spec.tx_power)) return -std::numeric_limits<double>::infinity();
  const double d = std::max(kMinJammerDistance, (attacker_position(spec, sensor_pose) - sensor_pose.position()).norm());
  const double four_pi = 4.0 * kPi;
  const double path = cfg.wavelength * cfg.wavelength / (four_pi * four_pi * d * d);
  return spec.tx_power + spec.antenna_gain + cfg.antenna_gain + 10.0 * std::log10(path);
}

std::optional<TargetGeometry> true_mio(const WorldState& world, double lane_halfwidth) {
  const Body& ego = world.ego();
  const Pose2 mount = sensor_mount(ego);
  std::optional<TargetGeometry> best;
  for (const Body& body : world.bodies) {
    if (body.id == world.ego_id) continue;
    const TargetGeometry g = observe(mount, ego, body);
    if (g.local.x < 0.0 || std::abs(g.local.y) > lane_halfwidth) continue;
    if (!best || g.range < best->range || (g.range == best->range && g.range_rate < best->range_rate)) best = g;
  }
  return best;
}

void check_attack_targets(const std::vector<AttackSpec>& specs, const SensorSuite& sensors) {
  for (const AttackSpec& s : specs) {
    s.validate();
    if (!sensors.has(target_sensor(s.kind)))
      throw std::invalid_argument("attack '" + s.id + "' targets " + std::string(to_string(target_sensor(s.kind))) +
                                  " but the ego has no such sensor");
  }
}

Interference compile_interference(const std::vector<AttackSpec>& specs, const WorldState& world,
                                  const SensorSuite& sensors, double lane_halfwidth) {
  Interference out;
  if (specs.empty()) return out;
  const Body& ego = world.ego();
  const Pose2 mount = sensor_mount(ego);
  std::optional<std::optional<TargetGeometry>> mio;  // computed lazily
  const auto truth = [&]() -> const std::optional<TargetGeometry>& {
    if (!mio) mio = true_mio(world, lane_halfwidth);
    return *mio;
  };

  for (const AttackSpec& s : specs) {
    if (!s.active_at(world.time) || !sensors.has(target_sensor(s.kind))) continue;
    switch (s.kind) {
      case AttackKind::RadarDenialJamming:
        out.extra_noise = sum_dbm(out.extra_noise, jammer_power_at_receiver(s, mount, *sensors.radar));
        break;
      case AttackKind::RadarRangeDeception:
      case AttackKind::RadarVelocityDeception: {
        const auto& target = truth();
        if (!target) break;
        const RadarConfig& radar = *sensors.radar;
        Detection ghost;
        ghost.sensor = SensorKind::Radar;
        ghost.azimuth = target->azimuth;
        ghost.timestamp = world.time;
        ghost.snr = jammer_power_at_receiver(s, mount, radar) - radar.noise_floor;
        if (s.kind == AttackKind::RadarRangeDeception) {
          ghost.range = std::clamp(target->range + s.spoof_range_offset, 0.0, radar.max_range);
          ghost.range_rate = target->range_rate;
        } else {
          ghost.range = target->range;
          ghost.range_rate = s.spoof_velocity;
        }
        out.ghost_detections.push_back(std::move(ghost));
        break;
      }
      case AttackKind::CameraAdversarialPatch: {
        const CameraConfig& cam = *sensors.camera;
        const Vec2 local = mount.to_local(attacker_position(s, mount));
        const double az = std::atan2(local.y, local.x);
        if (local.x > 0.0 && local.norm() <= cam.max_range && std::abs(az) <= 0.5 * cam.fov)
          out.suppressed_classes.insert(s.patch_classes.begin(), s.patch_classes.end());
        break;
      }
      case AttackKind::LidarBlinding: {
        const double half = 0.5 * sensors.lidar->fov;
        const Sector clipped{std::max(s.sector.lo, -half), std::min(s.sector.hi, half)};
        if (clipped.lo <= clipped.hi) out.blinded_sectors.push_back(clipped);
        break;
      }
    }
  }
  return out;
}

AttackTraceRecord summarize(const std::vector<AttackSpec>& specs, const Interference& interference, double time) {
  AttackTraceRecord r;
  r.time = time;
  for (const AttackSpec& s : specs)
    if (s.active_at(time)) r.active.push_back(s.id);
  r.extra_noise = interference.extra_noise;
  r.ghosts = interference.ghost_detections.size();
  r.suppressed_classes = interference.suppressed_classes.size();
  r.blinded_sectors = interference.blinded_sectors.size();
  return r;
}

}  // namespace aebsim
