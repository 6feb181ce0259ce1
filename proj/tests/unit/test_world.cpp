#include <doctest.h>

#include <cmath>
#include <limits>

#include "aebsim/world.hpp"

using namespace aebsim;

namespace {

WorldState single_ego(double speed) {
  WorldState w;
  Body ego;
  ego.id = "ego";
  ego.kind = BodyKind::EgoVehicle;
  ego.velocity = {speed, 0};
  ego.extent = {4.5, 1.8};
  w.bodies.push_back(ego);
  w.ego_id = "ego";
  return w;
}

double stopping_distance(double v, double decel, double dt) {
  WorldState w = single_ego(v);
  w.ego_command = {BrakeStage::Full, decel};
  const double x0 = w.ego().pose.x;
  for (int i = 0; i < 100000 && w.ego().speed() > 0.0; ++i) w = step_world(w, dt);
  return w.ego().pose.x - x0;
}

}  // namespace

TEST_CASE("stopping distance within 2% of v^2/(2a) at dt = 0.05 s") {
  for (double decel : {3.8, 5.3, 9.8}) {
    for (int v = 5; v <= 30; ++v) {
      const double expected = v * v / (2.0 * decel);
      const double got = stopping_distance(v, decel, 0.05);
      CHECK(std::abs(got - expected) / expected < 0.02);
    }
  }
}

TEST_CASE("speed never goes negative and constant speed integrates exactly") {
  WorldState w = single_ego(10.0);
  for (int i = 0; i < 20; ++i) w = step_world(w, 0.05);
  CHECK(w.ego().pose.x == doctest::Approx(10.0));
  w.ego_command = {BrakeStage::Full, 1000.0};
  w = step_world(w, 0.05);
  CHECK(w.ego().speed() == 0.0);
  CHECK(w.time == doctest::Approx(1.05));
}

TEST_CASE("scripted trajectories interpolate and hold") {
  Body b;
  b.id = "p";
  b.kind = BodyKind::Pedestrian;
  b.pose = {0, 4, 0};
  b.trajectory = {{0, 0, 4}, {2, 0, 4}, {6, 0, -4}};
  CHECK(scripted_position(b, 1.0).y == doctest::Approx(4.0));
  CHECK(scripted_position(b, 4.0).y == doctest::Approx(0.0));
  CHECK(scripted_position(b, 10.0).y == doctest::Approx(-4.0));
  CHECK(scripted_velocity(b, 1.0).y == doctest::Approx(0.0));
  CHECK(scripted_velocity(b, 3.0).y == doctest::Approx(-2.0));
  CHECK(scripted_velocity(b, 7.0).y == doctest::Approx(0.0));

  WorldState w = single_ego(0.0);
  w.bodies.push_back(b);
  for (int i = 0; i < 80; ++i) w = step_world(w, 0.05);
  const Body* p = w.find("p");
  REQUIRE(p);
  CHECK(p->pose.y == doctest::Approx(0.0));
}

TEST_CASE("non-finite state raises ModelError") {
  WorldState w = single_ego(std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(step_world(w, 0.05), ModelError);
  CHECK_THROWS_AS(step_world(single_ego(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("world validation requires exactly one ego") {
  WorldState w = single_ego(1.0);
  CHECK_NOTHROW(w.validate());
  w.bodies.push_back(w.bodies.front());
  CHECK_THROWS(w.validate());
}

TEST_CASE("sensor mount is the front bumper") {
  Body ego;
  ego.pose = {1, 2, kPi / 2};
  ego.extent = {4, 2};
  const Pose2 m = sensor_mount(ego);
  CHECK(m.x == doctest::Approx(1.0));
  CHECK(m.y == doctest::Approx(4.0));
  CHECK(m.heading == doctest::Approx(kPi / 2));
}

TEST_CASE("visible fraction matches a hand-computed occlusion oracle") {
  Body target;
  target.id = "ped";
  target.kind = BodyKind::Pedestrian;
  target.pose = {10, 0, 0};
  target.extent = {0.5, 0.5};

  // Occluder slab at x = 5 covering y in [0.05, 2.0].
  Body wall;
  wall.id = "wall";
  wall.kind = BodyKind::Obstruction;
  wall.pose = {5, 1.025, 0};
  wall.extent = {0.2, 1.95};

  // Oracle: five chord samples y_i at x = 10; the sight line crosses x = 5 at
  // y_i / 2 (plus the wall thickness, which the ray crosses at y_i * (4.9..5.1) / 10).
  int clear = 0;
  for (int i = 0; i < 5; ++i) {
    const double y = -0.25 + 0.125 * i;
    const double lo = std::min(y * 0.49, y * 0.51), hi = std::max(y * 0.49, y * 0.51);
    const bool blocked = hi >= 0.05 && lo <= 2.0;
    if (!blocked) ++clear;
  }
  const double expected = clear / 5.0;
  CHECK(expected == doctest::Approx(0.6));
  CHECK(visible_fraction(Pose2{0, 0, 0}, target, {&wall}, 5) == doctest::Approx(expected));
  CHECK(visible_fraction(Pose2{0, 0, 0}, target, {}, 5) == 1.0);

  Body big = wall;
  big.pose = {5, 0, 0};
  big.extent = {0.2, 4.0};
  CHECK(visible_fraction(Pose2{0, 0, 0}, target, {&big}, 5) == 0.0);
}
