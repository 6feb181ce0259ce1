#include "aebsim/geometry.hpp"

#include <algorithm>
#include <limits>

namespace aebsim {

Vec2 Pose2::to_world(Vec2 local) const {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {x + c * local.x - s * local.y, y + s * local.x + c * local.y};
}

Vec2 Pose2::to_local(Vec2 world) const {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double dx = world.x - x;
  const double dy = world.y - y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

std::array<Vec2, 4> Rect::corners() const {
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  return {center.to_world({hl, hw}), center.to_world({-hl, hw}), center.to_world({-hl, -hw}),
          center.to_world({hl, -hw})};
}

namespace {

void project(const std::array<Vec2, 4>& pts, Vec2 axis, double& lo, double& hi) {
  lo = hi = pts[0].dot(axis);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double v = pts[i].dot(axis);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

// Liang-Barsky clip of the parametric segment a + t*(b-a), t in [t0, t1],
// against the closed axis-aligned box [-hl, hl] x [-hw, hw].
bool clip(Vec2 a, Vec2 d, double hl, double hw, double& t0, double& t1) {
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x + hl, hl - a.x, a.y + hw, hw - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  return t0 <= t1;
}

}  // namespace

bool rects_overlap(const Rect& a, const Rect& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const Vec2 axes[4] = {
      {std::cos(a.center.heading), std::sin(a.center.heading)},
      {-std::sin(a.center.heading), std::cos(a.center.heading)},
      {std::cos(b.center.heading), std::sin(b.center.heading)},
      {-std::sin(b.center.heading), std::cos(b.center.heading)},
  };
  for (const Vec2& axis : axes) {
    double alo, ahi, blo, bhi;
    project(ca, axis, alo, ahi);
    project(cb, axis, blo, bhi);
    if (ahi < blo || bhi < alo) return false;
  }
  return true;
}

double rect_distance(const Rect& a, const Rect& b) {
  if (rects_overlap(a, b)) return 0.0;
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 a0 = ca[i], a1 = ca[(i + 1) % 4];
    const Vec2 b0 = cb[i], b1 = cb[(i + 1) % 4];
    for (std::size_t j = 0; j < 4; ++j) {
      best = std::min(best, point_segment_distance(cb[j], a0, a1));
      best = std::min(best, point_segment_distance(ca[j], b0, b1));
    }
  }
  return best;
}

Vec2 closest_point(const Rect& r, Vec2 p) {
  const Vec2 local = r.center.to_local(p);
  const Vec2 clamped{std::clamp(local.x, -0.5 * r.length, 0.5 * r.length),
                     std::clamp(local.y, -0.5 * r.width, 0.5 * r.width)};
  return r.center.to_world(clamped);
}

bool segment_intersects(const Rect& r, Vec2 a, Vec2 b) {
  const Vec2 la = r.center.to_local(a);
  const Vec2 lb = r.center.to_local(b);
  double t0 = 0.0, t1 = 1.0;
  return clip(la, lb - la, 0.5 * r.length, 0.5 * r.width, t0, t1);
}

std::optional<double> ray_hit(const Rect& r, Vec2 origin, Vec2 direction) {
  const Vec2 lo = r.center.to_local(origin);
  const Vec2 ld = r.center.to_local(origin + direction) - lo;
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  if (!clip(lo, ld, 0.5 * r.length, 0.5 * r.width, t0, t1)) return std::nullopt;
  return t0 * ld.norm();
}

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

}  // namespace aebsim
