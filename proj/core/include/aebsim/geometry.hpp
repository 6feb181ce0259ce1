#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace aebsim {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
};

/// Planar pose. Forward (+x) runs along the ego lane, +y is to the left.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  constexpr bool operator==(const Pose2&) const = default;

  Vec2 position() const { return {x, y}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(heading); }

  /// Maps a point expressed in this pose's frame into the world frame.
  Vec2 to_world(Vec2 local) const;
  /// Maps a world point into this pose's frame.
  Vec2 to_local(Vec2 world) const;
};

/// Oriented rectangle: center pose plus full length (along heading) and width.
struct Rect {
  Pose2 center;
  double length = 0.0;
  double width = 0.0;

  std::array<Vec2, 4> corners() const;
};

/// Closed rectangle intersection via the separating-axis test; touching counts.
bool rects_overlap(const Rect& a, const Rect& b);

/// Euclidean gap between two rectangles, 0 when they overlap or touch.
double rect_distance(const Rect& a, const Rect& b);

/// Point of the closed rectangle nearest to `p`.
Vec2 closest_point(const Rect& r, Vec2 p);

/// True when the closed segment [a, b] intersects the closed rectangle.
bool segment_intersects(const Rect& r, Vec2 a, Vec2 b);

/// Distance along the ray (origin, unit direction) to the first rectangle
/// boundary hit, or nullopt when the ray misses. An origin inside the
/// rectangle hits at 0.
std::optional<double> ray_hit(const Rect& r, Vec2 origin, Vec2 direction);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace aebsim
