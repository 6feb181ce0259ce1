#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "aebsim/stpa.hpp"

using namespace aebsim;
using namespace aebsim::stpa;
using nlohmann::json;

namespace {

const std::string kData = AEBSIM_DATA_DIR;

StpaModel model() { return load_model(read_json_file(kData + "/stpa/model.json")); }
AttackCatalog catalog() { return load_catalog(read_json_file(kData + "/stpa/catalog.json")); }

const AttackScenarioTemplate& find_template(const AnalysisReport& r, const std::string& hs, const std::string& at) {
  const auto it = std::find_if(r.link.templates.begin(), r.link.templates.end(), [&](const auto& t) {
    return t.hazard_scenario == hs && t.attack_types.front().id == at;
  });
  REQUIRE(it != r.link.templates.end());
  return *it;
}

}  // namespace

TEST_CASE("bundled fixtures give the frozen counts") {
  const AnalysisReport r = analyze(model(), catalog());
  CHECK(r.ucas.size() == 21);
  CHECK(r.aeb_uca_count() == 14);
  CHECK(r.scenarios.size() == 15);
  CHECK(r.link.templates.size() == 102);
  CHECK(r.link.uncovered.empty());
}

TEST_CASE("every template has a complete traceability chain") {
  const StpaModel m = model();
  const AnalysisReport r = analyze(m, catalog());
  std::set<std::string> ids;
  for (const AttackScenarioTemplate& t : r.link.templates) {
    CAPTURE(t.id);
    CHECK(ids.insert(t.id).second);
    CHECK(t.trace.template_id == t.id);
    const auto hs = std::find_if(r.scenarios.begin(), r.scenarios.end(),
                                 [&](const HazardScenario& s) { return s.id == t.trace.hazard_scenario; });
    REQUIRE(hs != r.scenarios.end());
    CHECK(hs->uca == t.trace.uca);
    const auto uca =
        std::find_if(r.ucas.begin(), r.ucas.end(), [&](const UnsafeControlAction& u) { return u.id == t.trace.uca; });
    REQUIRE(uca != r.ucas.end());
    CHECK(uca->action == t.trace.control_action);
    CHECK_NOTHROW(m.structure.action(t.trace.control_action));
    REQUIRE_FALSE(t.trace.hazards.empty());
    CHECK(t.trace.hazards == uca->hazards);
    std::set<std::string> expected_sc;
    for (const std::string& h : t.trace.hazards)
      for (const std::string& sc : m.hazard(h).constraints) expected_sc.insert(sc);
    CHECK(std::set<std::string>(t.target_constraints.begin(), t.target_constraints.end()) == expected_sc);
    REQUIRE(t.attack_types.size() == 1);
    CHECK(t.attack_types[0].caused_event == t.cause_tag);
    CHECK(std::find(hs->cause_tags.begin(), hs->cause_tags.end(), t.cause_tag) != hs->cause_tags.end());
  }
}

TEST_CASE("UCA enumeration applies filters and tags AEB actions") {
  const auto ucas = enumerate_ucas(model());
  const auto has = [&](const std::string& id) {
    return std::any_of(ucas.begin(), ucas.end(), [&](const auto& u) { return u.id == id; });
  };
  CHECK(has("UCA-CA1-P"));
  CHECK_FALSE(has("UCA-CA1-STS"));
  CHECK_FALSE(has("UCA-CA4-P"));
  CHECK_FALSE(has("UCA-CA6-TETL"));
  for (const auto& u : ucas) CHECK(u.aeb_related == (u.action <= "CA4"));
}

TEST_CASE("hazard scenario ids and hint applicability") {
  const auto r = analyze(model(), catalog());
  std::set<std::string> ids;
  for (const auto& s : r.scenarios) ids.insert(s.id);
  CHECK(ids.count("HS-CA1-NP-HW1") == 1);
  CHECK(ids.count("HS-CA5-NP-HW2") == 1);
  CHECK(ids.count("HS-CA1-STS-HW1") == 0);
  CHECK_THROWS(expand_hazard_scenarios(r.ucas, {}));
}

TEST_CASE("missing attack coverage is reported, not dropped") {
  AttackCatalog c = catalog();
  c.attack_types.erase(std::remove_if(c.attack_types.begin(), c.attack_types.end(),
                                      [](const AttackType& t) { return t.caused_event == "detection_delayed"; }),
                       c.attack_types.end());
  const auto r = analyze(model(), c);
  CHECK(r.link.templates.size() < 102);
  CHECK_FALSE(r.link.uncovered.empty());
  for (const auto& u : r.link.uncovered) CHECK(u.cause_tag == "detection_delayed");
}

TEST_CASE("model and catalog validation") {
  json m = read_json_file(kData + "/stpa/model.json");
  m["structure"]["control_actions"][0]["target"] = "Nobody";
  CHECK_THROWS(load_model(m));
  m = read_json_file(kData + "/stpa/model.json");
  m["hazards"][0]["constraints"].push_back("SC99");
  CHECK_THROWS(load_model(m));
  m = read_json_file(kData + "/stpa/model.json");
  m["structure"]["components"].push_back("Island");
  CHECK_THROWS(load_model(m));
  m = read_json_file(kData + "/stpa/model.json");
  m["surprise"] = true;
  CHECK_THROWS_AS(load_model(m), ScenarioError);

  json c = read_json_file(kData + "/stpa/catalog.json");
  c["attack_types"][0]["parameters"].push_back("warp_factor");
  CHECK_THROWS(load_catalog(c));
  c = read_json_file(kData + "/stpa/catalog.json");
  c["attack_types"][0]["sensor"] = "Camera";
  CHECK_THROWS(load_catalog(c));
}

TEST_CASE("model, catalog and templates round-trip") {
  const StpaModel m = model();
  CHECK(to_json(load_model(to_json(m))) == to_json(m));
  const AttackCatalog c = catalog();
  CHECK(to_json(load_catalog(to_json(c))) == to_json(c));
  const auto r = analyze(m, c);
  for (const auto& t : r.link.templates) CHECK(to_json(load_template(to_json(t))) == to_json(t));
  const std::string table = report_table(r, m);
  CHECK(table.find("AS102") != std::string::npos);
}

TEST_CASE("concretizing denial jamming into a slotted CPNO yields the jamming grid") {
  const auto r = analyze(model(), catalog());
  const auto& t = find_template(r, "HS-CA3-NP-HW1", "AT01");
  const Scenario base = load_scenario_file(kData + "/scenarios/cpno_slots.json");
  const Concretized c = concretize(t, base);
  REQUIRE(c.sweep);
  CHECK_FALSE(c.scenario);
  CHECK(c.sweep->cell_count() == 42);
  const auto cells = expand_sweep(*c.sweep);
  const AttackSpec& a = cells.back().scenario.attacks.back();
  CHECK(a.kind == AttackKind::RadarDenialJamming);
  CHECK(a.anchor == AttackAnchor::Ego);
  CHECK(a.attacker_pose.x == 60.0);
  CHECK(a.tx_power == 20.0);
  CHECK(a.t_end == 1e9);
  CHECK(a.antenna_gain == 25.0);
  CHECK(load_sweep(c.to_json()).cell_count() == 42);
}

TEST_CASE("all-value slots give a single scenario") {
  const auto r = analyze(model(), catalog());
  const auto& t = find_template(r, "HS-CA3-NP-HW1", "AT10");
  const Scenario base = load_scenario_file(kData + "/scenarios/cpno_slots.json");
  Scenario with_lidar = base;
  with_lidar.ego.sensors.lidar = LidarConfig{};
  const Concretized c = concretize(t, with_lidar);
  REQUIRE(c.scenario);
  CHECK(c.scenario->attacks.back().kind == AttackKind::LidarBlinding);
  CHECK(c.scenario->attacks.back().sector.lo == -0.5);
}

TEST_CASE("binding errors") {
  const auto r = analyze(model(), catalog());
  Scenario base = load_scenario_file(kData + "/scenarios/cpno_slots.json");

  Scenario no_slots = base;
  no_slots.attack_slots = json::object();
  try {
    concretize(find_template(r, "HS-CA3-NP-HW1", "AT01"), no_slots);
    FAIL("expected BindingError");
  } catch (const BindingError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("attacker_distance") != std::string::npos);
    CHECK(msg.find("tx_power") != std::string::npos);
    CHECK(msg.find("active_window") != std::string::npos);
  }

  Scenario no_lidar = base;
  no_lidar.ego.sensors.lidar.reset();
  no_lidar.ego.fusion_inputs.lidar = false;
  CHECK_THROWS_AS(concretize(find_template(r, "HS-CA3-NP-HW1", "AT10"), no_lidar), BindingError);
  CHECK_THROWS_AS(concretize(find_template(r, "HS-CA1-P-HW1", "AT09"), base), BindingError);
}
