#include <doctest.h>

#include "aebsim/aeb.hpp"

using namespace aebsim;

namespace {

Track closing(double range, double rate) {
  Track t;
  t.x = range;
  t.range_rate = rate;
  t.status = TrackStatus::Confirmed;
  return t;
}

}  // namespace

TEST_CASE("ttc and stopping time") {
  CHECK(*compute_ttc(20, 10) == doctest::Approx(2.0));
  CHECK_FALSE(compute_ttc(20, 0));
  CHECK_FALSE(compute_ttc(20, -1));
  CHECK(stopping_time(9.8, 9.8) == doctest::Approx(1.0));
  CHECK_THROWS(stopping_time(1, 0));
  const AebConfig cfg;
  CHECK(*track_ttc(closing(3.7 + 20, -10), cfg) == doctest::Approx(2.0));
  CHECK_FALSE(track_ttc(closing(20, 1.0), cfg));
}

TEST_CASE("stage thresholds are ordered at any speed") {
  const AebConfig cfg;
  for (double v : {2.0, 7.0, 14.0, 30.0}) {
    CHECK(stage_threshold(BrakeStage::FCW, v, cfg) > stage_threshold(BrakeStage::Partial1, v, cfg));
    CHECK(stage_threshold(BrakeStage::Partial1, v, cfg) > stage_threshold(BrakeStage::Partial2, v, cfg));
    CHECK(stage_threshold(BrakeStage::Partial2, v, cfg) > stage_threshold(BrakeStage::Full, v, cfg));
  }
  CHECK(stage_threshold(BrakeStage::Full, 9.8, cfg) == doctest::Approx(0.6));
}

TEST_CASE("stage selection by ttc") {
  const AebConfig cfg;
  const double v = 10.0;
  const auto stage_at = [&](double ttc) {
    return aeb_decide(closing(cfg.headway_offset + ttc * v, -v), v, cfg, {}).stage;
  };
  CHECK(stage_at(10.0) == BrakeStage::None);
  CHECK(stage_at(stage_threshold(BrakeStage::FCW, v, cfg) - 0.01) == BrakeStage::FCW);
  CHECK(stage_at(stage_threshold(BrakeStage::Partial1, v, cfg) - 0.01) == BrakeStage::Partial1);
  CHECK(stage_at(stage_threshold(BrakeStage::Partial2, v, cfg) - 0.01) == BrakeStage::Partial2);
  CHECK(stage_at(stage_threshold(BrakeStage::Full, v, cfg) - 0.01) == BrakeStage::Full);
  const BrakeCommand full = aeb_decide(closing(cfg.headway_offset, -v), v, cfg, {});
  CHECK(full.decel == cfg.full_decel);
}

TEST_CASE("stages escalate only, full latches until stop") {
  const AebConfig cfg;
  const BrakeCommand p2{BrakeStage::Partial2, cfg.partial2_decel};
  CHECK(aeb_decide(closing(100, -1), 10, cfg, p2).stage == BrakeStage::Partial2);
  CHECK(aeb_decide(std::nullopt, 10, cfg, p2).stage == BrakeStage::None);
  const BrakeCommand full{BrakeStage::Full, cfg.full_decel};
  CHECK(aeb_decide(std::nullopt, 10, cfg, full).stage == BrakeStage::Full);
  CHECK(aeb_decide(std::nullopt, 0, cfg, full).stage == BrakeStage::None);
  CHECK_FALSE(aeb_decide(closing(5, -10), 10, cfg, {}).decel < 0.0);
}

TEST_CASE("aeb configuration validation") {
  AebConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.partial1_decel = 20;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.full_scale = 0.9;
  CHECK_THROWS(cfg.validate());
}
