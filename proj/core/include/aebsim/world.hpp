#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aebsim/command.hpp"
#include "aebsim/geometry.hpp"

namespace aebsim {

enum class BodyKind { EgoVehicle, Car, Pedestrian, Cyclist, Obstruction };

std::string_view to_string(BodyKind kind);
BodyKind body_kind_from_string(std::string_view name);

/// Timed waypoint of a scripted actor. Positions are linearly interpolated
/// between waypoints and held after the last one.
struct Waypoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Waypoint&) const = default;
};

struct Extent {
  double length = 0.0;
  double width = 0.0;

  bool operator==(const Extent&) const = default;
};

struct Body {
  std::string id;
  BodyKind kind = BodyKind::Car;
  Pose2 pose;
  Vec2 velocity;
  Extent extent;
  double radar_cross_section = 0.0;  // m^2
  std::vector<Waypoint> trajectory;  // empty: body keeps its velocity (ego) or stays put

  Rect footprint() const { return {pose, extent.length, extent.width}; }
  double speed() const { return velocity.norm(); }
};

/// Raised when the world leaves the finite domain; the runner turns it into a
/// model-error outcome.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WorldState {
  double time = 0.0;
  std::vector<Body> bodies;
  std::string ego_id;
  BrakeCommand ego_command;

  const Body& ego() const;
  Body& ego();
  const Body* find(std::string_view id) const;

  /// Throws std::invalid_argument unless exactly one body carries ego_id and
  /// every body satisfies its invariants.
  void validate() const;
};

/// Pose the forward-looking sensors are mounted at: front-bumper center of the
/// ego, facing along its heading.
Pose2 sensor_mount(const Body& ego);

/// Position of a scripted actor at time `t` (start pose when no trajectory).
Vec2 scripted_position(const Body& body, double t);
/// Velocity of a scripted actor at time `t` (segment slope, zero when held).
Vec2 scripted_velocity(const Body& body, double t);

/// Advances the world by dt: ego speed v' = max(0, v - a_cmd * dt) with
/// trapezoidal position update along the heading; scripted actors are placed
/// on their trajectories at the new time.
WorldState step_world(const WorldState& state, double dt);

inline constexpr int kDefaultVisibilitySamples = 5;

/// Fraction of `samples` evenly spaced points across the target's silhouette
/// (as seen from the observer) whose line of sight is not blocked by any
/// occluder rectangle.
double visible_fraction(const Pose2& observer, const Body& target, const std::vector<const Body*>& occluders,
                        int samples = kDefaultVisibilitySamples);

/// visible_fraction against every other non-ego body of the world.
double visible_fraction(const WorldState& world, const Pose2& observer, const Body& target,
                        int samples = kDefaultVisibilitySamples);

bool bodies_overlap(const Body& a, const Body& b);

}  // namespace aebsim
