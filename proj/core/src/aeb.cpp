#include "aebsim/aeb.hpp"

#include <algorithm>
#include <stdexcept>

namespace aebsim {

void AebConfig::validate() const {
  if (!(partial1_decel > 0.0 && partial1_decel <= partial2_decel && partial2_decel <= full_decel))
    throw std::invalid_argument("aeb: require 0 < partial1_decel <= partial2_decel <= full_decel");
  if (!(fcw_scale > partial1_scale && partial1_scale > partial2_scale && partial2_scale > full_scale &&
        full_scale > 0.0))
    throw std::invalid_argument("aeb: stage multipliers must be strictly decreasing and positive");
  if (!(fcw_reaction_time >= 0.0) || !(headway_offset >= 0.0))
    throw std::invalid_argument("aeb: fcw_reaction_time and headway_offset must be >= 0");
}

double AebConfig::decel_for(BrakeStage stage) const {
  switch (stage) {
    case BrakeStage::Partial1: return partial1_decel;
    case BrakeStage::Partial2: return partial2_decel;
    case BrakeStage::Full: return full_decel;
    default: return 0.0;
  }
}

std::optional<double> compute_ttc(double range, double closing_speed) {
  if (!(closing_speed > 0.0)) return std::nullopt;
  return std::max(0.0, range) / closing_speed;
}

double stopping_time(double ego_speed, double decel) {
  if (!(decel > 0.0)) throw std::invalid_argument("stopping_time: decel must be positive");
  return std::max(0.0, ego_speed) / decel;
}

std::optional<double> track_ttc(const Track& mio, const AebConfig& cfg) {
  if (!mio.range_rate) return std::nullopt;
  return compute_ttc(std::max(0.0, mio.range() - cfg.headway_offset), -*mio.range_rate);
}

double stage_threshold(BrakeStage stage, double ego_speed, const AebConfig& cfg) {
  switch (stage) {
    case BrakeStage::FCW:
      // Warning assumes the driver brakes at the first partial level after reacting.
      return cfg.fcw_scale * stopping_time(ego_speed, cfg.partial1_decel) + cfg.fcw_reaction_time;
    case BrakeStage::Partial1: return cfg.partial1_scale * stopping_time(ego_speed, cfg.partial1_decel);
    case BrakeStage::Partial2: return cfg.partial2_scale * stopping_time(ego_speed, cfg.partial2_decel);
    case BrakeStage::Full: return cfg.full_scale * stopping_time(ego_speed, cfg.full_decel);
    case BrakeStage::None: return 0.0;
  }
  return 0.0;
}

BrakeCommand aeb_decide(const std::optional<Track>& mio, double ego_speed, const AebConfig& cfg,
                        const BrakeCommand& prev) {
  if (!(ego_speed > 0.0)) return {};
  if (prev.stage == BrakeStage::Full) return {BrakeStage::Full, cfg.full_decel};
  if (!mio) return {};

  BrakeStage stage = BrakeStage::None;
  if (const auto ttc = track_ttc(*mio, cfg)) {
    for (BrakeStage s : {BrakeStage::Full, BrakeStage::Partial2, BrakeStage::Partial1, BrakeStage::FCW}) {
      if (*ttc < stage_threshold(s, ego_speed, cfg)) {
        stage = s;
        break;
      }
    }
  }
  stage = std::max(stage, prev.stage);
  return {stage, cfg.decel_for(stage)};
}

}  // namespace aebsim
