#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "aebsim/scenarios.hpp"

using namespace aebsim;
using nlohmann::json;

namespace {

const std::string kData = AEBSIM_DATA_DIR;

json cpno_doc() { return read_json_file(kData + "/scenarios/cpno.json"); }

std::string error_path(const json& doc) {
  try {
    load_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("bundled scenarios load and round-trip losslessly") {
  for (const auto& entry : std::filesystem::directory_iterator(kData + "/scenarios")) {
    CAPTURE(entry.path().string());
    const Scenario s = load_scenario_file(entry.path().string());
    const json once = to_json(s);
    const Scenario again = load_scenario(once);
    CHECK(to_json(again) == once);
    CHECK(scenario_hash(again) == scenario_hash(s));
  }
}

TEST_CASE("unknown keys and type errors carry the JSON path") {
  json d = cpno_doc();
  d["ego"]["aeb"]["full_decl"] = 9.8;
  CHECK(error_path(d) == "/ego/aeb/full_decl");

  d = cpno_doc();
  d["actors"][0]["extent"]["length"] = "long";
  CHECK(error_path(d) == "/actors/0/extent/length");

  d = cpno_doc();
  d.erase("format_version");
  CHECK(error_path(d) == "/format_version");

  d = cpno_doc();
  d["format_version"] = 2;
  CHECK(error_path(d) == "/format_version");

  d = cpno_doc();
  d["ego"]["sensors"]["radar"]["cfar"]["pfa"] = -1;
  CHECK_THROWS(load_scenario(d));
}

TEST_CASE("semantic validation") {
  json d = cpno_doc();
  d["ego"]["sensors"].erase("lidar");
  CHECK_THROWS(load_scenario(d));  // lidar still listed in fusion inputs

  d = cpno_doc();
  d["actors"][1]["id"] = d["actors"][0]["id"];
  CHECK_THROWS(load_scenario(d));

  d = cpno_doc();
  d["dt"] = 0.0;
  CHECK_THROWS(load_scenario(d));
}

TEST_CASE("hash changes with content") {
  const Scenario a = load_scenario(cpno_doc());
  json d = cpno_doc();
  d["seed"] = 99;
  CHECK(scenario_hash(load_scenario(d)) != scenario_hash(a));
  CHECK(scenario_hash(a).size() == 16);
}

TEST_CASE("CPNO generator geometry") {
  CpnoParams p;
  const Scenario s = instantiate_cpno(p);
  const WorldState w = s.initial_world();
  const Body* ped = w.find("pedestrian");
  REQUIRE(ped);
  REQUIRE(s.conflict_point);
  const double front = w.ego().pose.x + 0.5 * w.ego().extent.length;
  CHECK(s.conflict_point->x - front == doctest::Approx(p.conflict_distance));
  // Unbraked ego front reaches the pedestrian's near edge when the pedestrian is on the centerline.
  const double t_meet = (p.conflict_distance - 0.5 * ped->extent.length) / p.ego_speed;
  CHECK(scripted_position(*ped, t_meet).y == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(scripted_position(*ped, 0.0).y == doctest::Approx(p.ped_start_offset));
  // The pedestrian starts hidden behind the parked cars.
  CHECK(visible_fraction(w, sensor_mount(w.ego()), *ped) < 0.5);

  p.conflict_distance = 1.0;
  CHECK_THROWS(instantiate_cpno(p));
}

TEST_CASE("sweep expansion is a row-major bijection") {
  const SweepGrid g = load_sweep_file(kData + "/sweeps/jam_grid.json");
  const auto cells = expand_sweep(g);
  REQUIRE(cells.size() == g.cell_count());
  REQUIRE(cells.size() == 42);
  std::vector<std::size_t> shape;
  for (const auto& a : g.axes) shape.push_back(a.values.size());
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(flatten(cells[i].coords, shape) == i);
    CHECK(unflatten(i, shape) == cells[i].coords);
    const auto& attack = cells[i].scenario.attacks.at(0);
    CHECK(attack.attacker_pose.x == g.axes[0].values[cells[i].coords[0]].get<double>());
    CHECK(attack.tx_power == g.axes[1].values[cells[i].coords[1]].get<double>());
    for (int r = 0; r < g.replicates; ++r) seeds.insert(cell_seed(g.seed, cells[i].coords, r));
  }
  CHECK(seeds.size() == cells.size() * static_cast<std::size_t>(g.replicates));
  CHECK(unflatten(5, {2, 3}) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("sweep axes merge objects and replace scalars") {
  json doc = {{"format_version", 1},
              {"name", "t"},
              {"base", cpno_doc()},
              {"axes",
               {{{"path", "/ego/tracker"}, {"values", {{{"m_confirm", 9}, {"n_window", 12}}}}},
                {{"path", "/ego/speed"}, {"values", {5.0, 6.0}}}}}};
  const SweepGrid g = load_sweep(doc);
  const auto cells = expand_sweep(g);
  REQUIRE(cells.size() == 2);
  CHECK(cells[1].scenario.ego.tracker.m_confirm == 9);
  CHECK(cells[1].scenario.ego.tracker.n_window == 12);
  CHECK(cells[1].scenario.ego.tracker.gate_radius == load_scenario(cpno_doc()).ego.tracker.gate_radius);
  CHECK(cells[1].scenario.ego.body.speed() == doctest::Approx(6.0));
}

TEST_CASE("sweep documents are strict and round-trip") {
  const SweepGrid g = load_sweep_file(kData + "/sweeps/jam_grid.json");
  const json j = to_json(g);
  CHECK(to_json(load_sweep(j)) == j);

  json bad = j;
  bad["axes"][0]["path"] = "/attacks/0/no_such_field";
  CHECK_THROWS(expand_sweep(load_sweep(bad)));
  bad = j;
  bad["replicates"] = 0;
  CHECK_THROWS_AS(load_sweep(bad), ScenarioError);
  bad = j;
  bad["axes"][0]["valus"] = json::array();
  CHECK_THROWS_AS(load_sweep(bad), ScenarioError);
}

TEST_CASE("sweep base_file resolves relative to the sweep file") {
  const auto dir = std::filesystem::temp_directory_path() / "aebsim_sweep_base";
  std::filesystem::create_directories(dir);
  std::filesystem::copy_file(kData + "/scenarios/cpno.json", dir / "base.json",
                             std::filesystem::copy_options::overwrite_existing);
  std::ofstream(dir / "grid.json") << R"({"format_version": 1, "name": "b", "base_file": "base.json",
    "axes": [{"path": "/ego/speed", "values": [4.0, 5.0, 6.0]}]})";
  const SweepGrid g = load_sweep_file((dir / "grid.json").string());
  CHECK(g.cell_count() == 3);
  CHECK(g.base["name"] == cpno_doc()["name"]);
}
