#include "aebsim/sensors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace aebsim {

namespace {

constexpr std::array<std::pair<SensorKind, std::string_view>, 3> kSensorNames{{
    {SensorKind::Radar, "Radar"},
    {SensorKind::Camera, "Camera"},
    {SensorKind::Lidar, "Lidar"},
}};

constexpr std::array<std::pair<ObjectClass, std::string_view>, 4> kClassNames{{
    {ObjectClass::Car, "Car"},
    {ObjectClass::Pedestrian, "Pedestrian"},
    {ObjectClass::Cyclist, "Cyclist"},
    {ObjectClass::Unknown, "Unknown"},
}};

constexpr double kNearFieldRange = 0.5;

bool in_fov(double azimuth, double fov) { return std::abs(azimuth) <= 0.5 * fov; }

struct RadarScene {
  RangeProfile profile;
  double noise_mean = 0.0;
  // Bodies contributing power, in world order.
  std::vector<TargetGeometry> targets;
};

RadarScene radar_scene(const WorldState& world, const RadarConfig& cfg, const Interference& interference, Rng& rng) {
  RadarScene scene;
  const int bins = cfg.bins();
  scene.profile.bin_width = cfg.range_bin_width;
  scene.profile.power.resize(static_cast<std::size_t>(bins));
  scene.noise_mean = dbm_to_mw(cfg.noise_floor) + dbm_to_mw(interference.extra_noise);
  for (double& p : scene.profile.power) p = rng.exponential(scene.noise_mean);

  const Body& ego = world.ego();
  const Pose2 mount = sensor_mount(ego);
  for (const Body& body : world.bodies) {
    if (body.id == world.ego_id) continue;
    const TargetGeometry g = observe(mount, ego, body);
    if (g.range >= cfg.max_range || !in_fov(g.azimuth, cfg.fov)) continue;
    const double vf = visible_fraction(world, mount, body);
    if (vf <= 0.0) continue;
    const double power = dbm_to_mw(radar_received_power(cfg, g.range, body.radar_cross_section)) * vf;
    if (!(power > 0.0)) continue;
    const auto bin = static_cast<std::size_t>(g.range / cfg.range_bin_width);
    scene.profile.power[bin] += power;
    scene.targets.push_back(g);
  }
  for (const Detection& ghost : interference.ghost_detections) {
    if (ghost.sensor != SensorKind::Radar || ghost.range < 0.0 || ghost.range >= cfg.max_range) continue;
    const auto bin = static_cast<std::size_t>(ghost.range / cfg.range_bin_width);
    scene.profile.power[bin] += dbm_to_mw(cfg.noise_floor + ghost.snr.value_or(0.0));
  }
  return scene;
}

}  // namespace

std::string_view to_string(SensorKind kind) {
  for (const auto& [k, n] : kSensorNames)
    if (k == kind) return n;
  return "Radar";
}

SensorKind sensor_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kSensorNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown sensor '" + std::string(name) + "'");
}

std::string_view to_string(ObjectClass cls) {
  for (const auto& [k, n] : kClassNames)
    if (k == cls) return n;
  return "Unknown";
}

ObjectClass object_class_from_string(std::string_view name) {
  for (const auto& [k, n] : kClassNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown object class '" + std::string(name) + "'");
}

ObjectClass class_of(BodyKind kind) {
  switch (kind) {
    case BodyKind::Pedestrian: return ObjectClass::Pedestrian;
    case BodyKind::Cyclist: return ObjectClass::Cyclist;
    case BodyKind::Car:
    case BodyKind::Obstruction:
    case BodyKind::EgoVehicle: return ObjectClass::Car;
  }
  return ObjectClass::Unknown;
}

int RadarConfig::bins() const { return static_cast<int>(std::ceil(max_range / range_bin_width)); }

double DetectionCurve::at(double range) const {
  if (points.empty()) return 1.0;
  if (range <= points.front().first) return points.front().second;
  if (range >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& [r1, p1] = points[i];
    if (range <= r1) {
      const auto& [r0, p0] = points[i - 1];
      const double u = r1 > r0 ? (range - r0) / (r1 - r0) : 1.0;
      return p0 + (p1 - p0) * u;
    }
  }
  return points.back().second;
}

bool Interference::is_identity() const {
  return std::isinf(extra_noise) && extra_noise < 0.0 && ghost_detections.empty() && suppressed_classes.empty() &&
         blinded_sectors.empty();
}

TargetGeometry observe(const Pose2& mount, const Body& ego, const Body& target) {
  TargetGeometry g;
  g.body = &target;
  const Vec2 eye = mount.position();
  const Vec2 nearest = closest_point(target.footprint(), eye);
  const Vec2 rel = nearest - eye;
  g.local = mount.to_local(nearest);
  g.range = rel.norm();
  g.azimuth = std::atan2(g.local.y, g.local.x);
  const Vec2 rel_v = target.velocity - ego.velocity;
  g.range_rate = g.range > 0.0 ? rel.dot(rel_v) / g.range : -ego.velocity.norm();
  return g;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return mw > 0.0 ? 10.0 * std::log10(mw) : -std::numeric_limits<double>::infinity(); }

double radar_received_power(const RadarConfig& cfg, double target_range, double rcs) {
  if (!(rcs > 0.0)) return -std::numeric_limits<double>::infinity();
  const double r = std::max(target_range, kNearFieldRange);
  const double four_pi = 4.0 * kPi;
  const double ratio = cfg.wavelength * cfg.wavelength * rcs / (four_pi * four_pi * four_pi * std::pow(r, 4));
  return cfg.tx_power + 2.0 * cfg.antenna_gain + 10.0 * std::log10(ratio);
}

namespace {

double alpha_for(std::size_t n_cells, double pfa) {
  const double n = static_cast<double>(n_cells);
  return n * (std::pow(pfa, -1.0 / n) - 1.0);
}

}  // namespace

double cfar_alpha(const CfarConfig& cfar) { return alpha_for(2 * static_cast<std::size_t>(cfar.num_train), cfar.pfa); }

std::vector<std::size_t> cfar_detect(const std::vector<double>& profile, const CfarConfig& cfar) {
  if (cfar.num_train < 1 || cfar.num_guard < 0 || !(cfar.pfa > 0.0 && cfar.pfa < 1.0))
    throw std::invalid_argument("cfar_detect: invalid CFAR configuration");
  const auto n = static_cast<long>(profile.size());
  const long t = cfar.num_train;
  const long g = cfar.num_guard;
  if (n <= 2 * (t + g)) throw std::invalid_argument("cfar_detect: profile shorter than the CFAR window");

  std::vector<double> prefix(profile.size() + 1, 0.0);
  for (long i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + profile[i];
  const auto window_sum = [&](long lo, long hi) { return prefix[hi + 1] - prefix[lo]; };  // inclusive

  const double alpha_full = alpha_for(static_cast<std::size_t>(2 * t), cfar.pfa);
  std::vector<std::size_t> hits;
  for (long i = 0; i < n; ++i) {
    const bool left_ok = i - g - t >= 0;
    const bool right_ok = i + g + t <= n - 1;
    double sum = 0.0;
    long cells = 0;
    if (left_ok && right_ok) {
      sum = window_sum(i - g - t, i - g - 1) + window_sum(i + g + 1, i + g + t);
      cells = 2 * t;
    } else if (right_ok) {
      const long hi = std::min(n - 1, i + g + 2 * t);
      sum = window_sum(i + g + 1, hi);
      cells = hi - (i + g);
    } else if (left_ok) {
      const long lo = std::max(0L, i - g - 2 * t);
      sum = window_sum(lo, i - g - 1);
      cells = (i - g) - lo;
    } else {
      continue;
    }
    if (cells <= 0) continue;
    const double alpha = cells == 2 * t ? alpha_full : alpha_for(static_cast<std::size_t>(cells), cfar.pfa);
    const double mean = sum / static_cast<double>(cells);
    if (profile[i] > alpha * mean) hits.push_back(static_cast<std::size_t>(i));
  }
  return hits;
}

RangeProfile build_power_profile(const WorldState& world, const RadarConfig& cfg, const Interference& interference,
                                 Rng& rng) {
  return radar_scene(world, cfg, interference, rng).profile;
}

std::vector<Detection> radar_sense(const WorldState& world, const RadarConfig& cfg, const Interference& interference,
                                   Rng& rng) {
  RadarScene scene = radar_scene(world, cfg, interference, rng);
  const std::vector<std::size_t> bins = cfar_detect(scene.profile.power, cfg.cfar);
  const double ego_speed = world.ego().speed();

  std::vector<Detection> out;
  out.reserve(bins.size());
  for (const std::size_t bin : bins) {
    const double lo = static_cast<double>(bin) * cfg.range_bin_width;
    const double hi = lo + cfg.range_bin_width;
    Detection d;
    d.sensor = SensorKind::Radar;
    d.range = lo + 0.5 * cfg.range_bin_width;
    d.timestamp = world.time;
    d.snr = 10.0 * std::log10(scene.profile.power[bin] / scene.noise_mean);

    const auto ghost = std::find_if(interference.ghost_detections.begin(), interference.ghost_detections.end(),
                                    [&](const Detection& g) {
                                      return g.sensor == SensorKind::Radar && g.range >= lo && g.range < hi;
                                    });
    const TargetGeometry* nearest = nullptr;
    for (const TargetGeometry& t : scene.targets)
      if (t.range >= lo && t.range < hi && (!nearest || t.range < nearest->range)) nearest = &t;

    if (ghost != interference.ghost_detections.end()) {
      d.azimuth = ghost->azimuth;
      d.range_rate = ghost->range_rate.value_or(0.0) + rng.normal(0.0, cfg.range_rate_sigma);
    } else if (nearest) {
      d.azimuth = nearest->azimuth;
      d.range_rate = nearest->range_rate + rng.normal(0.0, cfg.range_rate_sigma);
      d.source_id = nearest->body->id;
    } else {
      // False alarm: looks like stationary clutter somewhere in the beam.
      d.azimuth = rng.uniform(-0.5 * cfg.fov, 0.5 * cfg.fov);
      d.range_rate = -ego_speed * std::cos(d.azimuth) + rng.normal(0.0, cfg.range_rate_sigma);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Detection> camera_sense(const WorldState& world, const CameraConfig& cfg,
                                    const Interference& interference, Rng& rng) {
  const Body& ego = world.ego();
  const Pose2 mount = sensor_mount(ego);
  std::vector<Detection> out;
  for (const Body& body : world.bodies) {
    if (body.id == world.ego_id) continue;
    const TargetGeometry g = observe(mount, ego, body);
    if (g.range > cfg.max_range || !in_fov(g.azimuth, cfg.fov)) continue;
    const double vf = visible_fraction(world, mount, body);
    if (vf < cfg.min_visible_fraction || vf <= 0.0) continue;
    const double p = cfg.p_detect.at(g.range) * vf;
    if (!(rng.uniform() < p)) continue;
    const ObjectClass cls = class_of(body.kind);
    if (interference.suppressed_classes.count(cls)) continue;

    Detection d;
    d.sensor = SensorKind::Camera;
    d.range = g.range;
    d.azimuth = g.azimuth;
    if (cfg.range_sigma > 0.0) d.range = std::max(0.0, d.range + rng.normal(0.0, cfg.range_sigma));
    if (cfg.azimuth_sigma > 0.0) d.azimuth += rng.normal(0.0, cfg.azimuth_sigma);
    if (cfg.range_rate_sigma) {
      d.range_rate = g.range_rate;
      if (*cfg.range_rate_sigma > 0.0) *d.range_rate += rng.normal(0.0, *cfg.range_rate_sigma);
    }
    d.class_label = cls;
    d.timestamp = world.time;
    d.source_id = body.id;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Detection> lidar_sense(const WorldState& world, const LidarConfig& cfg, const Interference& interference) {
  const Body& ego = world.ego();
  const Pose2 mount = sensor_mount(ego);
  const Vec2 origin = mount.position();

  struct Candidate {
    const Body* body;
    Rect footprint;
    bool visible;
  };
  std::vector<Candidate> candidates;
  for (const Body& body : world.bodies) {
    if (body.id == world.ego_id) continue;
    candidates.push_back({&body, body.footprint(), visible_fraction(world, mount, body) > 0.0});
  }

  struct Return {
    double range;
    double azimuth;
    const Body* body;
  };
  std::vector<std::optional<Return>> returns;
  const int rays = static_cast<int>(std::floor(cfg.fov / cfg.angular_resolution + 1e-9)) + 1;
  returns.reserve(static_cast<std::size_t>(rays));
  for (int k = 0; k < rays; ++k) {
    const double az = -0.5 * cfg.fov + k * cfg.angular_resolution;
    const bool blinded = std::any_of(interference.blinded_sectors.begin(), interference.blinded_sectors.end(),
                                     [&](const Sector& s) { return s.contains(az); });
    if (blinded) {
      returns.emplace_back();
      continue;
    }
    const Vec2 dir{std::cos(mount.heading + az), std::sin(mount.heading + az)};
    std::optional<Return> best;
    for (const Candidate& c : candidates) {
      const auto hit = ray_hit(c.footprint, origin, dir);
      if (hit && (!best || *hit < best->range)) best = Return{*hit, az, c.body};
    }
    if (best) {
      const auto it = std::find_if(candidates.begin(), candidates.end(),
                                   [&](const Candidate& c) { return c.body == best->body; });
      if (best->range > cfg.max_range || !it->visible) best.reset();
    }
    returns.push_back(best);
  }

  std::vector<Detection> out;
  std::size_t i = 0;
  while (i < returns.size()) {
    if (!returns[i]) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < returns.size() && returns[j] && std::abs(returns[j]->range - returns[j - 1]->range) <= cfg.cluster_gap)
      ++j;
    double sum_r = 0.0, sum_az = 0.0;
    std::map<std::string, int> votes;
    std::vector<std::string> order;
    for (std::size_t k = i; k < j; ++k) {
      sum_r += returns[k]->range;
      sum_az += returns[k]->azimuth;
      if (votes[returns[k]->body->id]++ == 0) order.push_back(returns[k]->body->id);
    }
    const double n = static_cast<double>(j - i);
    Detection d;
    d.sensor = SensorKind::Lidar;
    d.range = sum_r / n;
    d.azimuth = sum_az / n;
    d.class_label = ObjectClass::Unknown;
    d.timestamp = world.time;
    d.source_id = *std::max_element(order.begin(), order.end(),
                                    [&](const std::string& a, const std::string& b) { return votes[a] < votes[b]; });
    out.push_back(std::move(d));
    i = j;
  }
  return out;
}

}  // namespace aebsim
