#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aebsim/sensors.hpp"

namespace aebsim {

struct TrackerConfig {
  int m_confirm = 2;
  int n_window = 3;
  double gate_radius = 2.0;  // m
  int miss_delete = 0;       // consecutive misses before deletion; 0 means n_window
  double smoothing = 0.5;    // exponential smoothing factor, 1 = take the measurement

  bool operator==(const TrackerConfig&) const = default;
  int effective_miss_delete() const { return miss_delete > 0 ? miss_delete : n_window; }
  void validate() const;
};

/// Sliding window of the last `capacity` hit/miss outcomes (capacity <= 32).
class HitWindow {
 public:
  explicit HitWindow(int capacity = 1);

  void push(bool hit);
  int hits() const;
  int size() const { return size_; }
  int capacity() const { return capacity_; }
  std::uint32_t bits() const { return bits_; }  // bit 0 = most recent

 private:
  std::uint32_t bits_ = 0;
  int size_ = 0;
  int capacity_ = 1;
};

enum class TrackStatus { Tentative, Confirmed, Deleted };

std::string_view to_string(TrackStatus status);

struct Track {
  int id = 0;
  double x = 0.0;  // ego frame, m
  double y = 0.0;
  std::optional<double> range_rate;
  HitWindow history;
  TrackStatus status = TrackStatus::Tentative;
  double last_update = 0.0;
  std::optional<ObjectClass> class_label;
  int consecutive_misses = 0;

  double range() const;
  double azimuth() const;
};

struct TrackSet {
  std::vector<Track> tracks;
  int next_id = 1;
};

/// Maps every sensor's detections into the common ego polar frame and
/// concatenates them: radar, camera, LiDAR, each block ordered by range.
/// Detections are already mount-relative, so only the ordering is normalised.
std::vector<Detection> concatenate_detections(std::span<const std::vector<Detection>> per_sensor);

/// One sensing period of M-of-N tracking with nearest-neighbour association.
/// Each detection goes to the nearest live track inside the gate (ties to the
/// lower id); a track absorbing one or more detections scores a hit and moves
/// toward their mean by the smoothing factor. Leftover detections seed new
/// tentative tracks. Tracks deleted in the previous call are purged first.
TrackSet update_tracks(const TrackSet& tracks, std::span<const Detection> detections, const TrackerConfig& cfg,
                       double now);

/// Nearest confirmed in-path track ahead; ties go to the faster-closing, then
/// lower-id track.
std::optional<Track> select_mio(std::span<const Track> tracks, double ego_lane_halfwidth);

}  // namespace aebsim
