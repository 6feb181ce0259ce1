#include <doctest.h>

#include <cmath>

#include "aebsim/attacks.hpp"

using namespace aebsim;

namespace {

WorldState scene_with_ped(double ped_range) {
  WorldState w;
  Body ego;
  ego.id = "ego";
  ego.kind = BodyKind::EgoVehicle;
  ego.velocity = {8, 0};
  ego.extent = {4.5, 1.8};
  Body ped;
  ped.id = "ped";
  ped.kind = BodyKind::Pedestrian;
  ped.pose = {2.25 + ped_range + 0.25, 0, 0};
  ped.extent = {0.5, 0.5};
  ped.radar_cross_section = 1.0;
  w.bodies = {ego, ped};
  w.ego_id = "ego";
  return w;
}

SensorSuite full_suite() { return {RadarConfig{}, CameraConfig{}, LidarConfig{}}; }

AttackSpec jammer(double distance, double power) {
  AttackSpec s;
  s.id = "j";
  s.kind = AttackKind::RadarDenialJamming;
  s.attacker_pose = {distance, 0, 0};
  s.anchor = AttackAnchor::Ego;
  s.tx_power = power;
  s.antenna_gain = 25.0;
  return s;
}

}  // namespace

TEST_CASE("jammer one-way link budget") {
  const RadarConfig cfg;
  const AttackSpec s = jammer(30.0, 10.0);
  const Pose2 mount{2.25, 0, 0};
  const double oracle = 10.0 + 25.0 + cfg.antenna_gain + 20 * std::log10(cfg.wavelength) - 20 * std::log10(4 * kPi) -
                        20 * std::log10(30.0);
  CHECK(jammer_power_at_receiver(s, mount, cfg) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(jammer_power_at_receiver(jammer(60.0, 10.0), mount, cfg) ==
        doctest::Approx(oracle - 20 * std::log10(2.0)));
}

TEST_CASE("attacker anchors") {
  AttackSpec s = jammer(30.0, 0.0);
  const Pose2 mount{5, 1, 0};
  const Vec2 ego_anchored = attacker_position(s, mount);
  CHECK(ego_anchored.x == doctest::Approx(35.0));
  CHECK(ego_anchored.y == doctest::Approx(1.0));
  s.anchor = AttackAnchor::World;
  CHECK(attacker_position(s, mount).x == doctest::Approx(30.0));
}

TEST_CASE("two jammers add in linear power") {
  const WorldState w = scene_with_ped(20);
  AttackSpec a = jammer(30.0, 10.0), b = jammer(30.0, 10.0);
  b.id = "k";
  const Interference one = compile_interference({a}, w, full_suite(), 1.75);
  const Interference two = compile_interference({a, b}, w, full_suite(), 1.75);
  CHECK(two.extra_noise == doctest::Approx(one.extra_noise + 10 * std::log10(2.0)));
}

TEST_CASE("inactive attacks and no attacks compile to identity") {
  const WorldState w = scene_with_ped(20);
  CHECK(compile_interference({}, w, full_suite(), 1.75).is_identity());
  AttackSpec late = jammer(30.0, 10.0);
  late.t_start = 5.0;
  CHECK(compile_interference({late}, w, full_suite(), 1.75).is_identity());
}

TEST_CASE("range and velocity deception inject ghosts relative to the true MIO") {
  const WorldState w = scene_with_ped(20);
  AttackSpec range = jammer(30.0, 0.0);
  range.kind = AttackKind::RadarRangeDeception;
  range.spoof_range_offset = -8.0;
  AttackSpec vel = range;
  vel.id = "v";
  vel.kind = AttackKind::RadarVelocityDeception;
  vel.spoof_velocity = -25.0;
  const Interference i = compile_interference({range, vel}, w, full_suite(), 1.75);
  REQUIRE(i.ghost_detections.size() == 2);
  CHECK(i.ghost_detections[0].range == doctest::Approx(12.0));
  CHECK(*i.ghost_detections[0].range_rate == doctest::Approx(-8.0));
  CHECK(i.ghost_detections[1].range == doctest::Approx(20.0));
  CHECK(*i.ghost_detections[1].range_rate == doctest::Approx(-25.0));
}

TEST_CASE("camera patch and lidar blinding") {
  const WorldState w = scene_with_ped(20);
  AttackSpec patch;
  patch.id = "p";
  patch.kind = AttackKind::CameraAdversarialPatch;
  patch.attacker_pose = {20, 0, 0};
  patch.anchor = AttackAnchor::Ego;
  patch.patch_classes = {ObjectClass::Pedestrian};
  AttackSpec blind;
  blind.id = "b";
  blind.kind = AttackKind::LidarBlinding;
  blind.sector = {-3.0, 0.1};
  const Interference i = compile_interference({patch, blind}, w, full_suite(), 1.75);
  CHECK(i.suppressed_classes.count(ObjectClass::Pedestrian) == 1);
  REQUIRE(i.blinded_sectors.size() == 1);
  CHECK(i.blinded_sectors[0].lo == doctest::Approx(-0.5 * LidarConfig{}.fov));
  CHECK(i.blinded_sectors[0].hi == doctest::Approx(0.1));

  patch.attacker_pose = {-5, 0, 0};  // behind the camera
  CHECK(compile_interference({patch}, w, full_suite(), 1.75).suppressed_classes.empty());
}

TEST_CASE("attacks must target installed sensors") {
  SensorSuite radar_only{RadarConfig{}, std::nullopt, std::nullopt};
  AttackSpec blind;
  blind.id = "b";
  blind.kind = AttackKind::LidarBlinding;
  blind.sector = {-0.1, 0.1};
  CHECK_THROWS_AS(check_attack_targets({blind}, radar_only), std::invalid_argument);
  CHECK_NOTHROW(check_attack_targets({jammer(10, 0)}, radar_only));
  CHECK(target_sensor(AttackKind::CameraAdversarialPatch) == SensorKind::Camera);
}

TEST_CASE("true MIO is the nearest in-lane body") {
  WorldState w = scene_with_ped(20);
  Body side;
  side.id = "side";
  side.kind = BodyKind::Car;
  side.pose = {10, 4, 0};
  side.extent = {4.5, 1.8};
  w.bodies.push_back(side);
  const auto m = true_mio(w, 1.75);
  REQUIRE(m);
  CHECK(m->body->id == "ped");
  CHECK(m->range == doctest::Approx(20.0));
}

TEST_CASE("enum names round-trip") {
  for (AttackKind k : {AttackKind::RadarDenialJamming, AttackKind::RadarRangeDeception,
                       AttackKind::RadarVelocityDeception, AttackKind::CameraAdversarialPatch,
                       AttackKind::LidarBlinding})
    CHECK(attack_kind_from_string(to_string(k)) == k);
  CHECK_THROWS(attack_kind_from_string("Laser"));
}
