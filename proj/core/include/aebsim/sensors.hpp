#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aebsim/random.hpp"
#include "aebsim/world.hpp"

namespace aebsim {

enum class SensorKind { Radar, Camera, Lidar };
enum class ObjectClass { Car, Pedestrian, Cyclist, Unknown };

std::string_view to_string(SensorKind kind);
SensorKind sensor_kind_from_string(std::string_view name);
std::string_view to_string(ObjectClass cls);
ObjectClass object_class_from_string(std::string_view name);

/// Class a perfect classifier would assign to a body (parked obstructions are cars).
ObjectClass class_of(BodyKind kind);

struct CfarConfig {
  int num_train = 8;  // training cells per side
  int num_guard = 2;  // guard cells per side
  double pfa = 1e-4;

  bool operator==(const CfarConfig&) const = default;
};

struct RadarConfig {
  double tx_power = 10.0;       // dBm
  double antenna_gain = 30.0;   // dBi
  double wavelength = 0.0039;   // m
  double max_range = 100.0;     // m
  double range_bin_width = 0.5; // m
  double noise_floor = -125.0;  // dBm per range bin
  double fov = deg_to_rad(30.0);
  double range_rate_sigma = 0.1;  // m/s
  CfarConfig cfar;

  bool operator==(const RadarConfig&) const = default;
  int bins() const;
};

/// Piecewise-linear detection probability over range, clamped at the ends.
struct DetectionCurve {
  std::vector<std::pair<double, double>> points{{0.0, 1.0}, {50.0, 0.95}, {80.0, 0.6}};

  bool operator==(const DetectionCurve&) const = default;
  double at(double range) const;
};

struct CameraConfig {
  double fov = deg_to_rad(60.0);
  double max_range = 80.0;
  DetectionCurve p_detect;
  double min_visible_fraction = 0.5;
  double range_sigma = 0.0;
  double azimuth_sigma = 0.0;
  /// When set, the camera also reports range rate (truth plus this noise);
  /// when absent it reports none and the tracker differentiates range.
  std::optional<double> range_rate_sigma;

  bool operator==(const CameraConfig&) const = default;
};

struct LidarConfig {
  double fov = deg_to_rad(90.0);
  double angular_resolution = deg_to_rad(0.5);
  double max_range = 60.0;
  double cluster_gap = 1.0;  // m, max range jump between adjacent returns of one cluster

  bool operator==(const LidarConfig&) const = default;
};

struct Detection {
  SensorKind sensor = SensorKind::Radar;
  double range = 0.0;    // m, from the sensor mount
  double azimuth = 0.0;  // rad, ego frame, + to the left
  std::optional<double> range_rate;  // m/s, negative when closing
  std::optional<ObjectClass> class_label;
  std::optional<double> snr;  // dB
  double timestamp = 0.0;
  std::string source_id;  // body that produced it; empty for false alarms and ghosts

  bool operator==(const Detection&) const = default;
};

struct Sector {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const Sector&) const = default;
  bool contains(double azimuth) const { return azimuth >= lo && azimuth <= hi; }
};

/// Attack effects as seen by the sensors.
struct Interference {
  double extra_noise = -std::numeric_limits<double>::infinity();  // dBm, summed onto the radar noise floor
  std::vector<Detection> ghost_detections;  // radar ghosts; snr is the injected power over the noise floor
  std::set<ObjectClass> suppressed_classes;
  std::vector<Sector> blinded_sectors;

  bool operator==(const Interference&) const = default;
  bool is_identity() const;
};

/// Ground-truth measurement geometry of one body from a sensor mount.
struct TargetGeometry {
  const Body* body = nullptr;
  double range = 0.0;
  double azimuth = 0.0;
  double range_rate = 0.0;
  Vec2 local;  // nearest point in the mount frame
};

/// Range/azimuth/range-rate to the nearest point of `target`'s footprint.
TargetGeometry observe(const Pose2& mount, const Body& ego, const Body& target);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Monostatic radar equation: Pt + 2G + 10 log10(lambda^2 sigma / ((4 pi)^3 R^4)).
/// Returns -inf for sigma <= 0. Ranges below 0.5 m are clamped.
double radar_received_power(const RadarConfig& cfg, double target_range, double rcs);

/// CA-CFAR threshold factor alpha = N (pfa^(-1/N) - 1) with N = 2 * num_train.
double cfar_alpha(const CfarConfig& cfar);

/// Linear received power per range bin, mW.
struct RangeProfile {
  std::vector<double> power;
  double bin_width = 0.0;
};

RangeProfile build_power_profile(const WorldState& world, const RadarConfig& cfg, const Interference& interference,
                                 Rng& rng);

/// Cell-averaging CFAR over a linear power profile; returns detected bin indices.
std::vector<std::size_t> cfar_detect(const std::vector<double>& profile, const CfarConfig& cfar);

std::vector<Detection> radar_sense(const WorldState& world, const RadarConfig& cfg, const Interference& interference,
                                   Rng& rng);

std::vector<Detection> camera_sense(const WorldState& world, const CameraConfig& cfg,
                                    const Interference& interference, Rng& rng);

std::vector<Detection> lidar_sense(const WorldState& world, const LidarConfig& cfg, const Interference& interference);

}  // namespace aebsim
