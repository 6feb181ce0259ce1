#include "aebsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "aebsim/random.hpp"

#ifndef AEBSIM_VERSION
#define AEBSIM_VERSION "0.0.0"
#endif

namespace aebsim {

namespace {

constexpr std::uint64_t kRadarStream = 0x72616461ULL;
constexpr std::uint64_t kCameraStream = 0x63616d65ULL;

struct Snapshot {
  double min_separation = std::numeric_limits<double>::infinity();
  bool crash = false;
  std::optional<std::string> crash_with;
};

Snapshot contact_state(const WorldState& world) {
  Snapshot s;
  const Body& ego = world.ego();
  const Rect ego_rect = ego.footprint();
  for (const Body& b : world.bodies) {
    if (b.id == world.ego_id) continue;
    if (b.kind != BodyKind::Obstruction) s.min_separation = std::min(s.min_separation, rect_distance(ego_rect, b.footprint()));
    if (!s.crash && bodies_overlap(ego, b)) {
      s.crash = true;
      s.crash_with = b.id;
    }
  }
  return s;
}

}  // namespace

const char* version() { return AEBSIM_VERSION; }

RunResult run_once(const Scenario& scenario, std::uint64_t seed) {
  RunResult result;
  result.provenance = {version(), scenario_hash(scenario), seed};
  RunTrace& trace = result.trace;
  trace.conflict_point = scenario.conflict_point;
  trace.ego_front_offset = 0.5 * scenario.ego.body.extent.length;

  const EgoConfig& ego_cfg = scenario.ego;
  const SensorSuite& sensors = ego_cfg.sensors;
  Rng radar_rng(derive_seed(seed, {kRadarStream}));
  Rng camera_rng(derive_seed(seed, {kCameraStream}));

  WorldState world = scenario.initial_world();
  TrackSet tracks;
  BrakeCommand sensed_prev;
  BrakeCommand oracle_prev;
  const double eps = 1e-9 * scenario.dt;

  for (int tick = 0;; ++tick) {
    try {
      TraceRecord rec;
      rec.tick = tick;
      rec.time = world.time;
      const Body& ego = world.ego();
      rec.ego_x = ego.pose.x;
      rec.ego_y = ego.pose.y;
      rec.ego_speed = ego.speed();
      if (const auto truth = true_mio(world, ego_cfg.lane_halfwidth)) {
        rec.true_mio_id = truth->body->id;
        rec.true_mio_range = truth->range;
      }

      const Interference interference = compile_interference(scenario.attacks, world, sensors, ego_cfg.lane_halfwidth);
      rec.attacks = summarize(scenario.attacks, interference, world.time);
      if (sensors.radar) rec.radar = radar_sense(world, *sensors.radar, interference, radar_rng);
      if (sensors.camera) rec.camera = camera_sense(world, *sensors.camera, interference, camera_rng);
      if (sensors.lidar) rec.lidar = lidar_sense(world, *sensors.lidar, interference);

      std::vector<std::vector<Detection>> inputs;
      if (ego_cfg.fusion_inputs.radar) inputs.push_back(rec.radar);
      if (ego_cfg.fusion_inputs.camera) inputs.push_back(rec.camera);
      if (ego_cfg.fusion_inputs.lidar) inputs.push_back(rec.lidar);
      const std::vector<Detection> detections = concatenate_detections(inputs);
      tracks = update_tracks(tracks, detections, ego_cfg.tracker, world.time);
      for (const Track& t : tracks.tracks)
        if (t.status == TrackStatus::Confirmed) rec.confirmed_tracks.push_back(t);
      rec.mio = select_mio(tracks.tracks, ego_cfg.lane_halfwidth);

      rec.sensed = ego_cfg.aeb_enabled ? aeb_decide(rec.mio, rec.ego_speed, ego_cfg.aeb, sensed_prev) : BrakeCommand{};
      rec.oracle = oracle_decide(world, ego_cfg.aeb, ego_cfg.lane_halfwidth, oracle_prev);
      sensed_prev = rec.sensed;
      oracle_prev = rec.oracle;

      const Snapshot contact = contact_state(world);
      rec.min_separation = contact.min_separation;
      rec.crash = contact.crash;
      rec.crash_with = contact.crash_with;
      trace.records.push_back(std::move(rec));
      const TraceRecord& last = trace.records.back();

      if (last.crash && scenario.termination.on_crash) break;
      if (!(last.ego_speed > 0.0) && scenario.termination.on_ego_stopped) break;
      if (world.time + scenario.dt > scenario.duration_limit + eps) break;

      world.ego_command = last.sensed;
      world = step_world(world, scenario.dt);
    } catch (const ModelError& e) {
      trace.model_error = e.what();
      trace.model_error_tick = tick;
      break;
    }
  }

  result.verdict = classify_outcome(trace, scenario.monitors, scenario.comfort_margin);
  return result;
}

Outcome majority_outcome(const std::vector<Outcome>& outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("majority_outcome: no outcomes");
  std::map<Outcome, int> counts;
  for (Outcome o : outcomes) ++counts[o];
  Outcome best = outcomes.front();
  int best_count = 0;
  for (const auto& [o, n] : counts) {
    if (n > best_count || (n == best_count && severity(o) > severity(best))) {
      best = o;
      best_count = n;
    }
  }
  return best;
}

std::vector<std::size_t> SweepResult::shape() const {
  std::vector<std::size_t> s;
  for (const SweepAxis& a : axes) s.push_back(a.values.size());
  return s;
}

const CellSummary& SweepResult::at(const std::vector<std::size_t>& coords) const {
  const auto sh = shape();
  if (coords.size() != sh.size()) throw std::out_of_range("SweepResult::at: wrong number of coordinates");
  for (std::size_t k = 0; k < sh.size(); ++k)
    if (coords[k] >= sh[k]) throw std::out_of_range("SweepResult::at: coordinate out of range");
  return cells.at(flatten(coords, sh));
}

std::size_t SweepResult::count(Outcome outcome) const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [&](const CellSummary& c) { return c.outcome == outcome; }));
}

SweepResult run_sweep(const SweepGrid& grid, int parallelism) {
  grid.validate();
  const std::vector<SweepCell> cells = expand_sweep(grid);
  const std::size_t reps = static_cast<std::size_t>(grid.replicates);
  const std::size_t jobs = cells.size() * reps;

  std::vector<std::optional<Verdict>> verdicts(jobs);
  std::vector<std::uint64_t> seeds(jobs);
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t r = 0; r < reps; ++r) seeds[i * reps + r] = cell_seed(grid.seed, cells[i].coords, static_cast<int>(r));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) {
      const SweepCell& cell = cells[j / reps];
      try {
        verdicts[j] = run_once(cell.scenario, seeds[j]).verdict;
      } catch (const std::exception& e) {
        Verdict v;
        v.outcome = Outcome::ModelError;
        v.error = e.what();
        verdicts[j] = v;
      }
    }
  };
  const int threads = std::clamp(parallelism, 1, 256);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepResult result;
  result.name = grid.name;
  result.axes = grid.axes;
  result.replicates = grid.replicates;
  result.provenance = {version(), scenario_hash(load_scenario(grid.base)), grid.seed};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CellSummary c;
    c.coords = cells[i].coords;
    for (std::size_t r = 0; r < reps; ++r) {
      c.replicate_outcomes.push_back(verdicts[i * reps + r]->outcome);
      c.replicate_seeds.push_back(seeds[i * reps + r]);
    }
    c.outcome = majority_outcome(c.replicate_outcomes);
    for (std::size_t r = 0; r < reps; ++r) {
      const Verdict& v = *verdicts[i * reps + r];
      if (v.outcome != c.outcome) continue;
      c.min_separation = v.min_separation;
      c.stop_position_margin = v.stop_position_margin;
      c.first_brake_time = v.first_brake_time;
      c.error = v.error;
      break;
    }
    result.cells.push_back(std::move(c));
  }
  return result;
}

}  // namespace aebsim
