#include "aebsim/world.hpp"

#include <algorithm>
#include <array>

namespace aebsim {

namespace {

constexpr std::array<std::pair<BodyKind, std::string_view>, 5> kBodyKindNames{{
    {BodyKind::EgoVehicle, "EgoVehicle"},
    {BodyKind::Car, "Car"},
    {BodyKind::Pedestrian, "Pedestrian"},
    {BodyKind::Cyclist, "Cyclist"},
    {BodyKind::Obstruction, "Obstruction"},
}};

constexpr std::array<std::pair<BrakeStage, std::string_view>, 5> kStageNames{{
    {BrakeStage::None, "None"},
    {BrakeStage::FCW, "FCW"},
    {BrakeStage::Partial1, "Partial1"},
    {BrakeStage::Partial2, "Partial2"},
    {BrakeStage::Full, "Full"},
}};

void require_finite(const Body& b, double time) {
  if (!b.pose.finite() || !std::isfinite(b.velocity.x) || !std::isfinite(b.velocity.y)) {
    throw ModelError("non-finite state for body '" + b.id + "' at t=" + std::to_string(time));
  }
}

}  // namespace

std::string_view to_string(BodyKind kind) {
  for (const auto& [k, name] : kBodyKindNames)
    if (k == kind) return name;
  return "Car";
}

BodyKind body_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kBodyKindNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown body kind '" + std::string(name) + "'");
}

std::string_view to_string(BrakeStage stage) {
  for (const auto& [s, name] : kStageNames)
    if (s == stage) return name;
  return "None";
}

BrakeStage brake_stage_from_string(std::string_view name) {
  for (const auto& [s, n] : kStageNames)
    if (n == name) return s;
  throw std::invalid_argument("unknown brake stage '" + std::string(name) + "'");
}

const Body& WorldState::ego() const {
  const Body* b = find(ego_id);
  if (!b) throw std::invalid_argument("world has no ego body '" + ego_id + "'");
  return *b;
}

Body& WorldState::ego() { return const_cast<Body&>(std::as_const(*this).ego()); }

const Body* WorldState::find(std::string_view id) const {
  for (const Body& b : bodies)
    if (b.id == id) return &b;
  return nullptr;
}

void WorldState::validate() const {
  const auto egos = std::count_if(bodies.begin(), bodies.end(), [&](const Body& b) { return b.id == ego_id; });
  if (egos != 1) throw std::invalid_argument("world must contain exactly one body with id '" + ego_id + "'");
  for (const Body& b : bodies) {
    if (!(b.extent.length > 0.0) || !(b.extent.width > 0.0))
      throw std::invalid_argument("body '" + b.id + "' extent must be positive");
    if (!(b.radar_cross_section >= 0.0))
      throw std::invalid_argument("body '" + b.id + "' radar_cross_section must be >= 0");
    if (!b.pose.finite()) throw std::invalid_argument("body '" + b.id + "' pose must be finite");
  }
}

Pose2 sensor_mount(const Body& ego) {
  const Vec2 front = ego.pose.to_world({0.5 * ego.extent.length, 0.0});
  return {front.x, front.y, ego.pose.heading};
}

Vec2 scripted_position(const Body& body, double t) {
  const auto& wp = body.trajectory;
  if (wp.empty()) return body.pose.position();
  if (t <= wp.front().t) return {wp.front().x, wp.front().y};
  if (t >= wp.back().t) return {wp.back().x, wp.back().y};
  const auto it = std::upper_bound(wp.begin(), wp.end(), t, [](double v, const Waypoint& w) { return v < w.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double span = b.t - a.t;
  const double u = span > 0.0 ? (t - a.t) / span : 1.0;
  return {a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u};
}

Vec2 scripted_velocity(const Body& body, double t) {
  const auto& wp = body.trajectory;
  if (wp.size() < 2 || t < wp.front().t || t >= wp.back().t) return {};
  const auto it = std::upper_bound(wp.begin(), wp.end(), t, [](double v, const Waypoint& w) { return v < w.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double span = b.t - a.t;
  if (span <= 0.0) return {};
  return {(b.x - a.x) / span, (b.y - a.y) / span};
}

WorldState step_world(const WorldState& state, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step_world: dt must be positive");
  WorldState next = state;
  next.time = state.time + dt;
  for (Body& b : next.bodies) {
    require_finite(b, state.time);
    if (b.id == state.ego_id) {
      const double v = b.speed();
      const double a = std::max(0.0, state.ego_command.decel);
      const double v_next = std::max(0.0, v - a * dt);
      const double travel = 0.5 * (v + v_next) * dt;
      const Vec2 dir{std::cos(b.pose.heading), std::sin(b.pose.heading)};
      b.pose.x += dir.x * travel;
      b.pose.y += dir.y * travel;
      b.velocity = dir * v_next;
    } else if (!b.trajectory.empty()) {
      const Vec2 p = scripted_position(b, next.time);
      b.pose.x = p.x;
      b.pose.y = p.y;
      b.velocity = scripted_velocity(b, next.time);
    } else {
      b.pose.x += b.velocity.x * dt;
      b.pose.y += b.velocity.y * dt;
    }
    require_finite(b, next.time);
  }
  if (!std::isfinite(next.time)) throw ModelError("non-finite simulation time");
  return next;
}

double visible_fraction(const Pose2& observer, const Body& target, const std::vector<const Body*>& occluders,
                        int samples) {
  const Vec2 eye = observer.position();
  const Vec2 center = target.pose.position();
  std::vector<Vec2> points;
  const Vec2 los = center - eye;
  const double dist = los.norm();
  if (samples <= 1 || dist <= 0.0 || target.extent.length <= 0.0 || target.extent.width <= 0.0) {
    points.push_back(center);
  } else {
    // Silhouette chord: the target's footprint projected onto the axis
    // perpendicular to the line of sight.
    const Vec2 perp{-los.y / dist, los.x / dist};
    double lo = 0.0, hi = 0.0;
    for (const Vec2& c : target.footprint().corners()) {
      const double s = (c - center).dot(perp);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    for (int i = 0; i < samples; ++i) {
      const double s = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
      points.push_back(center + perp * s);
    }
  }
  int clear = 0;
  for (const Vec2& p : points) {
    const bool blocked = std::any_of(occluders.begin(), occluders.end(), [&](const Body* o) {
      return o != &target && o->id != target.id && segment_intersects(o->footprint(), eye, p);
    });
    if (!blocked) ++clear;
  }
  return static_cast<double>(clear) / static_cast<double>(points.size());
}

double visible_fraction(const WorldState& world, const Pose2& observer, const Body& target, int samples) {
  std::vector<const Body*> occluders;
  for (const Body& b : world.bodies)
    if (b.id != world.ego_id && b.id != target.id) occluders.push_back(&b);
  return visible_fraction(observer, target, occluders, samples);
}

bool bodies_overlap(const Body& a, const Body& b) { return rects_overlap(a.footprint(), b.footprint()); }

}  // namespace aebsim
