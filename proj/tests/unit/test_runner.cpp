#include <doctest.h>

#include <string>

#include "aebsim/emit.hpp"
#include "aebsim/runner.hpp"

using namespace aebsim;

namespace {

const std::string kData = AEBSIM_DATA_DIR;

}  // namespace

TEST_CASE("run_once is deterministic per seed") {
  const Scenario s = load_scenario_file(kData + "/scenarios/cpno.json");
  const RunResult a = run_once(s, 11);
  const RunResult b = run_once(s, 11);
  CHECK(trace_to_csv(a.trace, a.provenance) == trace_to_csv(b.trace, b.provenance));
  CHECK(a.verdict == b.verdict);
  CHECK(a.provenance.scenario_hash == scenario_hash(s));
  CHECK(a.provenance.seed == 11);
}

TEST_CASE("ticks advance by dt and the run stops when the ego stops") {
  const Scenario s = load_scenario_file(kData + "/scenarios/cpno.json");
  const RunResult r = run_once(s, s.seed);
  REQUIRE(r.trace.records.size() > 2);
  for (std::size_t i = 0; i < r.trace.records.size(); ++i) {
    CHECK(r.trace.records[i].tick == static_cast<int>(i));
    CHECK(r.trace.records[i].time == doctest::Approx(s.dt * static_cast<double>(i)));
  }
  CHECK(r.trace.records.back().ego_speed == 0.0);
  CHECK(r.verdict.outcome == Outcome::Safe);
}

TEST_CASE("disabled AEB never brakes and the oracle keeps deciding") {
  Scenario s = load_scenario_file(kData + "/scenarios/cpno.json");
  s.ego.aeb_enabled = false;
  const RunResult r = run_once(s, s.seed);
  bool oracle_braked = false;
  for (const auto& rec : r.trace.records) {
    CHECK(rec.sensed.stage == BrakeStage::None);
    oracle_braked = oracle_braked || rec.oracle.braking();
  }
  CHECK(oracle_braked);
  CHECK(r.verdict.outcome == Outcome::Crash);
}

TEST_CASE("the duration limit ends a run") {
  Scenario s = load_scenario_file(kData + "/scenarios/ccrs.json");
  s.duration_limit = 1.0;
  const RunResult r = run_once(s, 1);
  CHECK(r.trace.records.back().time <= 1.0 + 1e-9);
  CHECK(r.trace.records.size() == 21);
}

TEST_CASE("a world leaving the finite domain is a ModelError outcome") {
  Scenario s = load_scenario_file(kData + "/scenarios/ccrs.json");
  s.actors[0].velocity = {1e308, 0};
  s.termination.on_crash = false;
  const RunResult r = run_once(s, 1);
  CHECK(r.verdict.outcome == Outcome::ModelError);
  CHECK(r.trace.model_error.has_value());
  CHECK(r.verdict.error.has_value());
}

TEST_CASE("sweeps are independent of parallelism") {
  SweepGrid g = load_sweep_file(kData + "/sweeps/jam_grid.json");
  g.axes[0].values = {10.0, 60.0};
  g.axes[1].values = {-10.0, 20.0};
  g.replicates = 2;
  const SweepResult a = run_sweep(g, 1);
  const SweepResult b = run_sweep(g, 4);
  CHECK(a == b);
  CHECK(dump_json(to_json(a)) == dump_json(to_json(b)));
  CHECK(a.shape() == std::vector<std::size_t>{2, 2});
  CHECK(a.at({1, 0}).replicate_outcomes.size() == 2);
  CHECK(a.at({0, 1}).outcome == Outcome::Crash);
  CHECK(a.at({1, 0}).outcome == Outcome::Safe);
  CHECK(a.count(Outcome::Crash) + a.count(Outcome::Safe) + a.count(Outcome::StoppedTooSoon) +
            a.count(Outcome::ConstraintViolated) + a.count(Outcome::ModelError) ==
        4);
}
