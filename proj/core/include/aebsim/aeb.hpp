#pragma once

#include <optional>

#include "aebsim/command.hpp"
#include "aebsim/fusion.hpp"

namespace aebsim {

/// Staged TTC-vs-stopping-time controller parameters.
struct AebConfig {
  double fcw_reaction_time = 1.2;  // s
  double partial1_decel = 3.8;     // m/s^2
  double partial2_decel = 5.3;
  double full_decel = 9.8;
  double headway_offset = 3.7;  // m of range kept as standoff before TTC is computed
  double fcw_scale = 1.2;
  double partial1_scale = 1.0;
  double partial2_scale = 0.8;
  double full_scale = 0.6;

  bool operator==(const AebConfig&) const = default;
  void validate() const;
  double decel_for(BrakeStage stage) const;
};

std::optional<double> compute_ttc(double range, double closing_speed);

double stopping_time(double ego_speed, double decel);

/// TTC of a track as the controller sees it: range beyond the headway offset
/// over closing speed. Nullopt when the track is opening or has no rate yet.
std::optional<double> track_ttc(const Track& mio, const AebConfig& cfg);

/// TTC threshold below which `stage` engages at the given ego speed.
double stage_threshold(BrakeStage stage, double ego_speed, const AebConfig& cfg);

/// Stage selection. While an MIO is present stages only escalate; without one
/// the command drops to None, except that Full stays latched until the ego
/// has stopped.
BrakeCommand aeb_decide(const std::optional<Track>& mio, double ego_speed, const AebConfig& cfg,
                        const BrakeCommand& prev);

}  // namespace aebsim
