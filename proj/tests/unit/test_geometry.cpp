#include <doctest.h>

#include <cmath>
#include <limits>
#include <optional>

#include "aebsim/geometry.hpp"
#include "aebsim/random.hpp"

using namespace aebsim;

namespace {

// Slab-method ray cast in the rectangle frame.
std::optional<double> slab_ray_oracle(const Rect& r, Vec2 origin, Vec2 dir) {
  const Vec2 o = r.center.to_local(origin);
  const Vec2 tip = r.center.to_local(origin + dir);
  const Vec2 d = tip - o;
  const double hx = r.length / 2, hy = r.width / 2;
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  const double os[2] = {o.x, o.y}, ds[2] = {d.x, d.y}, hs[2] = {hx, hy};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(ds[k]) < 1e-15) {
      if (os[k] < -hs[k] || os[k] > hs[k]) return std::nullopt;
      continue;
    }
    double a = (-hs[k] - os[k]) / ds[k], b = (hs[k] - os[k]) / ds[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    if (t0 > t1) return std::nullopt;
  }
  return t0;
}

bool point_in_rect(const Rect& r, Vec2 p) {
  const Vec2 l = r.center.to_local(p);
  return std::abs(l.x) <= r.length / 2 + 1e-12 && std::abs(l.y) <= r.width / 2 + 1e-12;
}

}  // namespace

TEST_CASE("pose transforms are inverse") {
  const Pose2 p{3.0, -2.0, 0.7};
  const Vec2 w{5.5, 1.25};
  const Vec2 back = p.to_world(p.to_local(w));
  CHECK(back.x == doctest::Approx(w.x));
  CHECK(back.y == doctest::Approx(w.y));
  const Vec2 fwd = Pose2{0, 0, kPi / 2}.to_world({1, 0});
  CHECK(fwd.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fwd.y == doctest::Approx(1.0));
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(0.25) == doctest::Approx(0.25));
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2 * kPi));
}

TEST_CASE("rectangle overlap and distance") {
  const Rect a{{0, 0, 0}, 4, 2};
  CHECK(rects_overlap(a, Rect{{3.9, 0, 0}, 4, 2}));
  CHECK(rects_overlap(a, Rect{{4.0, 0, 0}, 4, 2}));  // touching
  CHECK_FALSE(rects_overlap(a, Rect{{4.1, 0, 0}, 4, 2}));
  CHECK(rect_distance(a, Rect{{7, 0, 0}, 4, 2}) == doctest::Approx(3.0));
  CHECK(rect_distance(a, Rect{{7, 5, 0}, 4, 2}) == doctest::Approx(std::hypot(3.0, 3.0)));
  CHECK(rect_distance(a, Rect{{1, 0, 0.3}, 1, 1}) == 0.0);
  const Rect rotated{{0, 3.0, kPi / 4}, 2, 2};
  CHECK(rects_overlap(a, rotated) == (3.0 - std::sqrt(2.0) <= 1.0));
}

TEST_CASE("closest point and segment intersection") {
  const Rect r{{10, 0, 0}, 4, 2};
  const Vec2 c = closest_point(r, {0, 0});
  CHECK(c.x == doctest::Approx(8.0));
  CHECK(c.y == doctest::Approx(0.0));
  CHECK(segment_intersects(r, {0, 0}, {20, 0}));
  CHECK_FALSE(segment_intersects(r, {0, 0}, {7.9, 0}));
  CHECK(segment_intersects(r, {0, 5}, {20, -5}));
  CHECK_FALSE(segment_intersects(r, {0, 2}, {20, 2}));
  CHECK(segment_intersects(r, {10, 0}, {10.5, 0.2}));  // fully inside
}

TEST_CASE("ray_hit matches a slab-method oracle on random cases") {
  Rng rng(42);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) {
    const Rect r{{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-kPi, kPi)}, rng.uniform(0.2, 5),
                 rng.uniform(0.2, 3)};
    const Vec2 origin{rng.uniform(-15, 15), rng.uniform(-15, 15)};
    const double th = rng.uniform(-kPi, kPi);
    const Vec2 dir{std::cos(th), std::sin(th)};
    const auto got = ray_hit(r, origin, dir);
    const auto want = slab_ray_oracle(r, origin, dir);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      ++hits;
      CHECK(*got == doctest::Approx(*want).epsilon(1e-9));
      CHECK(point_in_rect(r, origin + dir * *got));
    }
  }
  CHECK(hits > 1000);
}

TEST_CASE("ray from inside hits at zero") {
  const Rect r{{0, 0, 0.2}, 4, 2};
  const auto h = ray_hit(r, {0.1, 0.1}, {1, 0});
  REQUIRE(h);
  CHECK(*h == 0.0);
}
