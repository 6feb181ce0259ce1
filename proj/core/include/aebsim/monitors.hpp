#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aebsim/aeb.hpp"
#include "aebsim/attacks.hpp"
#include "aebsim/fusion.hpp"
#include "aebsim/world.hpp"

namespace aebsim {

/// "When the nearest object in front is within trigger_distance, a brake stage
/// of at least Partial1 must follow within max_latency."
struct SafetyConstraint {
  std::string id;
  std::string description;
  double trigger_distance = 0.0;  // m
  double max_latency = 0.0;       // s

  bool operator==(const SafetyConstraint&) const = default;
  void validate() const;
};

/// One simulation tick, recorded after sensing and decision, before the plant step.
struct TraceRecord {
  int tick = 0;
  double time = 0.0;
  double ego_x = 0.0;
  double ego_y = 0.0;
  double ego_speed = 0.0;
  std::optional<std::string> true_mio_id;
  std::optional<double> true_mio_range;
  std::vector<Detection> radar;
  std::vector<Detection> camera;
  std::vector<Detection> lidar;
  std::vector<Track> confirmed_tracks;
  std::optional<Track> mio;
  BrakeCommand sensed;
  BrakeCommand oracle;
  AttackTraceRecord attacks;
  double min_separation = 0.0;  // closest ego-to-target gap this tick, m
  bool crash = false;
  std::optional<std::string> crash_with;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  std::optional<Vec2> conflict_point;
  double ego_front_offset = 0.0;  // ego center to front bumper, m
  std::optional<std::string> model_error;
  std::optional<int> model_error_tick;
};

enum class Outcome { Safe, Crash, ConstraintViolated, StoppedTooSoon, ModelError };

std::string_view to_string(Outcome outcome);
Outcome outcome_from_string(std::string_view name);
/// Severity order used for tie-breaks: ModelError > Crash > ConstraintViolated > StoppedTooSoon > Safe.
int severity(Outcome outcome);

struct Verdict {
  Outcome outcome = Outcome::Safe;
  std::optional<std::string> violated_constraint;
  std::optional<double> first_violation_time;
  double min_separation = 0.0;
  std::optional<double> stop_position_margin;
  std::optional<double> first_brake_time;
  std::optional<std::string> error;

  bool operator==(const Verdict&) const = default;
};

struct ConstraintResult {
  bool passed = true;
  std::optional<double> violation_time;
};

/// AEB decision on ground truth: the true nearest in-path body is presented
/// as a confirmed track, ignoring occlusion and sensing.
BrakeCommand oracle_decide(const WorldState& world, const AebConfig& cfg, double lane_halfwidth,
                           const BrakeCommand& prev);

ConstraintResult check_sc1(const RunTrace& trace, const SafetyConstraint& sc);

inline constexpr double kDefaultComfortMargin = 7.0;

Verdict classify_outcome(const RunTrace& trace, const std::vector<SafetyConstraint>& constraints,
                         double comfort_margin = kDefaultComfortMargin);

}  // namespace aebsim
