#include "aebsim/monitors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aebsim {

namespace {

constexpr std::array<std::pair<Outcome, std::string_view>, 5> kOutcomeNames{{
    {Outcome::Safe, "Safe"},
    {Outcome::Crash, "Crash"},
    {Outcome::ConstraintViolated, "ConstraintViolated"},
    {Outcome::StoppedTooSoon, "StoppedTooSoon"},
    {Outcome::ModelError, "ModelError"},
}};

// Tolerance for comparing tick times against latency windows.
constexpr double kTimeEps = 1e-9;

bool brake_satisfied(const TraceRecord& r) { return r.sensed.braking() || !(r.ego_speed > 0.0); }

}  // namespace

std::string_view to_string(Outcome outcome) {
  for (const auto& [o, n] : kOutcomeNames)
    if (o == outcome) return n;
  return "Safe";
}

Outcome outcome_from_string(std::string_view name) {
  for (const auto& [o, n] : kOutcomeNames)
    if (n == name) return o;
  throw std::invalid_argument("unknown outcome '" + std::string(name) + "'");
}

int severity(Outcome outcome) {
  switch (outcome) {
    case Outcome::Safe: return 0;
    case Outcome::StoppedTooSoon: return 1;
    case Outcome::ConstraintViolated: return 2;
    case Outcome::Crash: return 3;
    case Outcome::ModelError: return 4;
  }
  return 0;
}

void SafetyConstraint::validate() const {
  if (id.empty()) throw std::invalid_argument("safety constraint needs an id");
  if (!(trigger_distance > 0.0) || !(max_latency > 0.0))
    throw std::invalid_argument("safety constraint '" + id + "': parameters must be positive");
}

BrakeCommand oracle_decide(const WorldState& world, const AebConfig& cfg, double lane_halfwidth,
                           const BrakeCommand& prev) {
  std::optional<Track> mio;
  if (const auto truth = true_mio(world, lane_halfwidth)) {
    Track t;
    t.id = 0;
    t.x = truth->local.x;
    t.y = truth->local.y;
    t.range_rate = truth->range_rate;
    t.status = TrackStatus::Confirmed;
    t.last_update = world.time;
    t.class_label = class_of(truth->body->kind);
    mio = t;
  }
  return aeb_decide(mio, world.ego().speed(), cfg, prev);
}

ConstraintResult check_sc1(const RunTrace& trace, const SafetyConstraint& sc) {
  const auto& recs = trace.records;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const TraceRecord& r = recs[i];
    if (!r.true_mio_range || !(*r.true_mio_range < sc.trigger_distance) || !(r.ego_speed > 0.0)) continue;
    bool ok = false;
    for (std::size_t j = i; j < recs.size() && recs[j].time <= r.time + sc.max_latency + kTimeEps; ++j) {
      if (brake_satisfied(recs[j])) {
        ok = true;
        break;
      }
    }
    if (!ok) return {false, r.time};
  }
  return {true, std::nullopt};
}

Verdict classify_outcome(const RunTrace& trace, const std::vector<SafetyConstraint>& constraints,
                         double comfort_margin) {
  Verdict v;
  v.min_separation = std::numeric_limits<double>::infinity();
  const TraceRecord* first_brake = nullptr;
  bool crashed = false;
  for (const TraceRecord& r : trace.records) {
    v.min_separation = std::min(v.min_separation, r.min_separation);
    if (!first_brake && r.sensed.braking()) first_brake = &r;
    crashed = crashed || r.crash;
  }
  if (first_brake) v.first_brake_time = first_brake->time;

  const TraceRecord* last = trace.records.empty() ? nullptr : &trace.records.back();
  if (last && trace.conflict_point) {
    v.stop_position_margin = trace.conflict_point->x - (last->ego_x + trace.ego_front_offset);
  }

  if (trace.model_error) {
    v.outcome = Outcome::ModelError;
    v.error = trace.model_error;
    return v;
  }
  if (crashed) {
    v.outcome = Outcome::Crash;
    v.min_separation = 0.0;
    return v;
  }

  for (const SafetyConstraint& sc : constraints) {
    const ConstraintResult res = check_sc1(trace, sc);
    if (!res.passed && (!v.first_violation_time || *res.violation_time < *v.first_violation_time)) {
      v.first_violation_time = res.violation_time;
      v.violated_constraint = sc.id;
    }
  }
  if (v.violated_constraint) {
    v.outcome = Outcome::ConstraintViolated;
    return v;
  }

  if (last && !(last->ego_speed > 0.0) && first_brake) {
    double margin = std::numeric_limits<double>::infinity();
    if (v.stop_position_margin) {
      margin = *v.stop_position_margin;
    } else if (last->true_mio_range) {
      margin = *last->true_mio_range;
    }
    if (margin > comfort_margin && !first_brake->oracle.braking()) {
      v.outcome = Outcome::StoppedTooSoon;
      return v;
    }
  }
  v.outcome = Outcome::Safe;
  return v;
}

}  // namespace aebsim
