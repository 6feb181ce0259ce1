#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "aebsim/runner.hpp"

using namespace aebsim;

namespace {

const std::string kData = AEBSIM_DATA_DIR;

void BM_CfarDetect(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> profile(static_cast<std::size_t>(state.range(0)));
  for (double& p : profile) p = rng.exponential(1.0);
  const CfarConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(cfar_detect(profile, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CfarDetect)->Arg(200)->Arg(2000);

void BM_TrackerUpdate(benchmark::State& state) {
  Rng rng(2);
  std::vector<Detection> dets(static_cast<std::size_t>(state.range(0)));
  for (Detection& d : dets) {
    d.range = rng.uniform(1, 80);
    d.azimuth = rng.uniform(-0.5, 0.5);
    d.range_rate = -8.0;
  }
  const TrackerConfig cfg;
  TrackSet ts = update_tracks({}, dets, cfg, 0.0);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.05;
    ts = update_tracks(ts, dets, cfg, t);
    benchmark::DoNotOptimize(ts);
  }
}
BENCHMARK(BM_TrackerUpdate)->Arg(8)->Arg(64);

void BM_RunOnce(benchmark::State& state, const char* name) {
  const Scenario s = load_scenario_file(kData + "/scenarios/" + name + ".json");
  for (auto _ : state) benchmark::DoNotOptimize(run_once(s, s.seed));
}
BENCHMARK_CAPTURE(BM_RunOnce, cpno, "cpno")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunOnce, cpno_jam_concat, "cpno_jam_concat")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
