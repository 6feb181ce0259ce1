#include "aebsim/stpa.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "strict_json.hpp"

namespace aebsim::stpa {

using json = nlohmann::json;
using detail::ObjectReader;
using detail::parse_enum;
using detail::require_array;

namespace {

struct CategoryInfo {
  UcaCategory category;
  std::string_view name;
  std::string_view code;
  std::string_view phrase;
};

constexpr std::array<CategoryInfo, 4> kCategories{{
    {UcaCategory::Providing, "Providing", "P", "provided when not needed"},
    {UcaCategory::NotProviding, "NotProviding", "NP", "not provided when needed"},
    {UcaCategory::TooEarlyTooLate, "TooEarlyTooLate", "TETL", "provided too early or too late"},
    {UcaCategory::StoppedTooSoonAppliedTooLong, "StoppedTooSoonAppliedTooLong", "STS",
     "stopped too soon or applied too long"},
}};

const CategoryInfo& info(UcaCategory c) {
  for (const auto& i : kCategories)
    if (i.category == c) return i;
  return kCategories[0];
}

void check_version(ObjectReader& r) {
  const int version = r.integer("format_version", -1);
  if (version != kScenarioFormatVersion)
    throw ScenarioError(r.sub("format_version"), "missing or unsupported format version");
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  require_array(j, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(ObjectReader::as_string(j[i], path + "/" + std::to_string(i)));
  return out;
}

template <class T, class F>
std::vector<T> object_list(ObjectReader& r, const std::string& key, F&& read_one, bool required = true) {
  std::vector<T> out;
  const json* v = required ? &r.require(key) : r.optional(key);
  if (!v) return out;
  require_array(*v, r.sub(key));
  for (std::size_t i = 0; i < v->size(); ++i) out.push_back(read_one((*v)[i], r.sub(key) + "/" + std::to_string(i)));
  return out;
}

UcaCategory read_category(const json& j, const std::string& path) {
  return parse_enum(j, path, uca_category_from_string);
}

std::map<UcaCategory, std::vector<std::string>> read_category_map(const json& j, const std::string& path) {
  if (!j.is_object()) throw ScenarioError(path, "expected an object keyed by UCA category");
  std::map<UcaCategory, std::vector<std::string>> out;
  for (const auto& [key, value] : j.items()) {
    UcaCategory c;
    try {
      c = uca_category_from_string(key);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(path + "/" + key, e.what());
    }
    out[c] = string_list(value, path + "/" + key);
  }
  return out;
}

json write_category_map(const std::map<UcaCategory, std::vector<std::string>>& m) {
  json j = json::object();
  for (const auto& [c, v] : m) j[std::string(to_string(c))] = v;
  return j;
}

std::string pad_id(const char* prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
  return buf;
}

template <class T>
void require_unique(const std::vector<T>& items, const std::string& what) {
  std::set<std::string> seen;
  for (const T& item : items)
    if (!seen.insert(item.id).second) throw std::invalid_argument("duplicate " + what + " id '" + item.id + "'");
}

// Parameter name -> location inside the attack object.
struct SlotTarget {
  std::string pointer;  // relative to the attack object; empty = the object itself (merge)
  bool ego_anchor = false;
};

std::optional<SlotTarget> slot_target(const std::string& param) {
  static const std::map<std::string, SlotTarget> kTargets{
      {"attacker_distance", {"/attacker_pose/x", true}},
      {"attacker_lateral", {"/attacker_pose/y", false}},
      {"tx_power", {"/tx_power", false}},
      {"antenna_gain", {"/antenna_gain", false}},
      {"spoof_range_offset", {"/spoof_range_offset", false}},
      {"spoof_velocity", {"/spoof_velocity", false}},
      {"patch_classes", {"/patch_classes", false}},
      {"sector", {"/sector", false}},
      {"active_window", {"", false}},
  };
  const auto it = kTargets.find(param);
  if (it == kTargets.end()) return std::nullopt;
  return it->second;
}

// active_window values are [t_start, t_end] pairs, bound as a merge patch.
json slot_value(const std::string& param, const json& v) {
  if (param != "active_window") return v;
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw BindingError("active_window expects [t_start, t_end]");
  return {{"t_start", v[0]}, {"t_end", v[1]}};
}

void apply_slot(json& attack, const SlotTarget& target, const json& value) {
  if (target.pointer.empty()) {
    attack.merge_patch(value);
  } else {
    attack[json::json_pointer(target.pointer)] = value;
  }
  if (target.ego_anchor) attack["anchor"] = std::string(to_string(AttackAnchor::Ego));
}

}  // namespace

std::string_view to_string(UcaCategory c) { return info(c).name; }
std::string_view short_code(UcaCategory c) { return info(c).code; }

UcaCategory uca_category_from_string(std::string_view name) {
  for (const auto& i : kCategories)
    if (i.name == name || i.code == name) return i.category;
  throw std::invalid_argument("unknown UCA category '" + std::string(name) + "'");
}

void ControlStructure::validate() const {
  if (components.empty()) throw std::invalid_argument("control structure has no components");
  const std::set<std::string> names(components.begin(), components.end());
  if (names.size() != components.size()) throw std::invalid_argument("duplicate component name");
  require_unique(control_actions, "control action");
  require_unique(feedback_links, "feedback link");
  if (!focus_component.empty() && !names.count(focus_component))
    throw std::invalid_argument("focus component '" + focus_component + "' is not declared");

  std::map<std::string, std::set<std::string>> adj;
  auto edge = [&](const std::string& id, const std::string& a, const std::string& b) {
    for (const std::string& end : {a, b})
      if (!names.count(end)) throw std::invalid_argument("'" + id + "' references undeclared component '" + end + "'");
    adj[a].insert(b);
    adj[b].insert(a);
  };
  for (const ControlAction& a : control_actions) edge(a.id, a.source, a.target);
  for (const FeedbackLink& f : feedback_links) edge(f.id, f.source, f.target);

  std::set<std::string> reached{components.front()};
  std::vector<std::string> stack{components.front()};
  while (!stack.empty()) {
    const std::string n = stack.back();
    stack.pop_back();
    for (const std::string& m : adj[n])
      if (reached.insert(m).second) stack.push_back(m);
  }
  if (reached.size() != names.size()) throw std::invalid_argument("control structure graph is not connected");
}

const ControlAction& ControlStructure::action(std::string_view id) const {
  for (const ControlAction& a : control_actions)
    if (a.id == id) return a;
  throw std::invalid_argument("unknown control action '" + std::string(id) + "'");
}

bool HintWord::applies(const std::string& action, UcaCategory category) const {
  return std::any_of(applies_to.begin(), applies_to.end(), [&](const HintApplicability& h) {
    return h.action == action &&
           std::find(h.categories.begin(), h.categories.end(), category) != h.categories.end();
  });
}

void StpaModel::validate() const {
  structure.validate();
  require_unique(hazards, "hazard");
  require_unique(constraints, "safety constraint");
  require_unique(hint_words, "hint word");
  std::set<std::string> sc_ids;
  for (const ConstraintDef& c : constraints) sc_ids.insert(c.id);
  for (const Hazard& h : hazards)
    for (const std::string& sc : h.constraints)
      if (!sc_ids.count(sc)) throw std::invalid_argument("hazard '" + h.id + "' names unknown constraint '" + sc + "'");
  for (const auto& [c, hs] : category_hazards)
    for (const std::string& h : hs) hazard(h);
  for (const FilterRule& f : filters) structure.action(f.action);
  for (const HintWord& w : hint_words)
    for (const HintApplicability& a : w.applies_to) structure.action(a.action);
}

const Hazard& StpaModel::hazard(std::string_view id) const {
  for (const Hazard& h : hazards)
    if (h.id == id) return h;
  throw std::invalid_argument("unknown hazard '" + std::string(id) + "'");
}

void AttackCatalog::validate() const {
  require_unique(attack_types, "attack type");
  for (const AttackType& t : attack_types) {
    if (t.caused_event.empty()) throw std::invalid_argument("attack type '" + t.id + "' has no caused_event");
    if (t.sim_kind && target_sensor(*t.sim_kind) != t.sensor)
      throw std::invalid_argument("attack type '" + t.id + "': sim_kind targets a different sensor");
    for (const std::string& p : t.parameters)
      if (!slot_target(p)) throw std::invalid_argument("attack type '" + t.id + "': unknown parameter '" + p + "'");
  }
}

std::vector<UnsafeControlAction> enumerate_ucas(const StpaModel& model) {
  const ControlStructure& cs = model.structure;
  if (cs.control_actions.empty()) throw std::invalid_argument("enumerate_ucas: no control actions");
  std::vector<UnsafeControlAction> out;
  for (const ControlAction& a : cs.control_actions) {
    for (UcaCategory c : kAllCategories) {
      const bool filtered = std::any_of(model.filters.begin(), model.filters.end(),
                                        [&](const FilterRule& f) { return f.action == a.id && f.category == c; });
      if (filtered) continue;
      UnsafeControlAction u;
      u.id = "UCA-" + a.id + "-" + std::string(short_code(c));
      u.action = a.id;
      u.category = c;
      if (const auto it = model.category_hazards.find(c); it != model.category_hazards.end()) u.hazards = it->second;
      u.rationale = a.label + " " + std::string(info(c).phrase);
      u.aeb_related = !cs.focus_component.empty() && (a.source == cs.focus_component || a.target == cs.focus_component);
      out.push_back(std::move(u));
    }
  }
  return out;
}

std::vector<HazardScenario> expand_hazard_scenarios(const std::vector<UnsafeControlAction>& ucas,
                                                    const std::vector<HintWord>& hint_words) {
  if (hint_words.empty()) throw std::invalid_argument("expand_hazard_scenarios: no hint words");
  std::vector<HazardScenario> out;
  for (const UnsafeControlAction& u : ucas) {
    for (const HintWord& w : hint_words) {
      if (!w.applies(u.action, u.category)) continue;
      HazardScenario s;
      s.id = "HS-" + u.id.substr(4) + "-" + w.id;
      s.uca = u.id;
      s.hint_word = w.id;
      s.cause = w.text + ", so that: " + u.rationale;
      if (const auto it = w.cause_tags.find(u.category); it != w.cause_tags.end()) s.cause_tags = it->second;
      out.push_back(std::move(s));
    }
  }
  return out;
}

LinkResult link_attacks(const std::vector<HazardScenario>& scenarios, const std::vector<UnsafeControlAction>& ucas,
                        const StpaModel& model, const AttackCatalog& catalog) {
  LinkResult out;
  std::map<std::string, const UnsafeControlAction*> by_id;
  for (const UnsafeControlAction& u : ucas) by_id[u.id] = &u;
  for (const HazardScenario& s : scenarios) {
    const auto it = by_id.find(s.uca);
    if (it == by_id.end()) throw std::invalid_argument("hazard scenario '" + s.id + "' names unknown UCA");
    const UnsafeControlAction& u = *it->second;
    std::vector<std::string> constraints;
    for (const std::string& h : u.hazards)
      for (const std::string& sc : model.hazard(h).constraints)
        if (std::find(constraints.begin(), constraints.end(), sc) == constraints.end()) constraints.push_back(sc);

    if (s.cause_tags.empty()) out.uncovered.push_back({s.id, ""});
    for (const std::string& tag : s.cause_tags) {
      bool matched = false;
      for (const AttackType& t : catalog.attack_types) {
        if (t.caused_event != tag) continue;
        matched = true;
        AttackScenarioTemplate tmpl;
        tmpl.id = pad_id("AS", out.templates.size() + 1, 3);
        tmpl.hazard_scenario = s.id;
        tmpl.cause_tag = tag;
        tmpl.attack_types = {t};
        tmpl.unresolved_parameters = t.parameters;
        tmpl.target_constraints = constraints;
        tmpl.trace = {tmpl.id, s.id, u.id, u.action, u.hazards};
        out.templates.push_back(std::move(tmpl));
      }
      if (!matched) out.uncovered.push_back({s.id, tag});
    }
  }
  return out;
}

std::size_t AnalysisReport::aeb_uca_count() const {
  return static_cast<std::size_t>(
      std::count_if(ucas.begin(), ucas.end(), [](const UnsafeControlAction& u) { return u.aeb_related; }));
}

AnalysisReport analyze(const StpaModel& model, const AttackCatalog& catalog) {
  model.validate();
  catalog.validate();
  AnalysisReport r;
  r.ucas = enumerate_ucas(model);
  r.scenarios = expand_hazard_scenarios(r.ucas, model.hint_words);
  r.link = link_attacks(r.scenarios, r.ucas, model, catalog);
  return r;
}

// ---- JSON ----

StpaModel load_model(const json& document) {
  ObjectReader r(document, "");
  check_version(r);
  StpaModel m;
  {
    ObjectReader s(r.require("structure"), "/structure");
    m.structure.system = s.string("system", "");
    m.structure.focus_component = s.string("focus_component", "");
    m.structure.components = string_list(s.require("components"), s.sub("components"));
    auto read_edge = [](const json& j, const std::string& p) {
      ObjectReader e(j, p);
      ControlAction a{e.string("id"), e.string("source"), e.string("target"), e.string("label")};
      e.finish();
      return a;
    };
    m.structure.control_actions = object_list<ControlAction>(s, "control_actions", read_edge);
    for (const ControlAction& a : object_list<ControlAction>(s, "feedback_links", read_edge, false))
      m.structure.feedback_links.push_back({a.id, a.source, a.target, a.label});
    s.finish();
  }
  m.hazards = object_list<Hazard>(r, "hazards", [](const json& j, const std::string& p) {
    ObjectReader h(j, p);
    Hazard hz{h.string("id"), h.string("description"), string_list(h.require("constraints"), h.sub("constraints"))};
    h.finish();
    return hz;
  });
  m.constraints = object_list<ConstraintDef>(r, "safety_constraints", [](const json& j, const std::string& p) {
    ObjectReader c(j, p);
    ConstraintDef d{c.string("id"), c.string("description")};
    c.finish();
    return d;
  });
  m.category_hazards = read_category_map(r.require("category_hazards"), "/category_hazards");
  m.filters = object_list<FilterRule>(
      r, "filters",
      [](const json& j, const std::string& p) {
        ObjectReader f(j, p);
        FilterRule rule{f.string("action"), read_category(f.require("category"), f.sub("category")),
                        f.string("rationale", "")};
        f.finish();
        return rule;
      },
      false);
  m.hint_words = object_list<HintWord>(r, "hint_words", [](const json& j, const std::string& p) {
    ObjectReader w(j, p);
    HintWord hw;
    hw.id = w.string("id");
    hw.text = w.string("text");
    hw.applies_to = object_list<HintApplicability>(w, "applies_to", [](const json& a, const std::string& ap) {
      ObjectReader ar(a, ap);
      HintApplicability h;
      h.action = ar.string("action");
      const json& cats = require_array(ar.require("categories"), ar.sub("categories"));
      for (std::size_t i = 0; i < cats.size(); ++i)
        h.categories.push_back(read_category(cats[i], ar.sub("categories") + "/" + std::to_string(i)));
      ar.finish();
      return h;
    });
    if (const json* t = w.optional("cause_tags")) hw.cause_tags = read_category_map(*t, w.sub("cause_tags"));
    w.finish();
    return hw;
  });
  r.finish();
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("", e.what());
  }
  return m;
}

json to_json(const StpaModel& m) {
  json actions = json::array();
  for (const ControlAction& a : m.structure.control_actions)
    actions.push_back({{"id", a.id}, {"source", a.source}, {"target", a.target}, {"label", a.label}});
  json feedback = json::array();
  for (const FeedbackLink& f : m.structure.feedback_links)
    feedback.push_back({{"id", f.id}, {"source", f.source}, {"target", f.target}, {"label", f.label}});
  json hazards = json::array();
  for (const Hazard& h : m.hazards)
    hazards.push_back({{"id", h.id}, {"description", h.description}, {"constraints", h.constraints}});
  json constraints = json::array();
  for (const ConstraintDef& c : m.constraints) constraints.push_back({{"id", c.id}, {"description", c.description}});
  json filters = json::array();
  for (const FilterRule& f : m.filters)
    filters.push_back(
        {{"action", f.action}, {"category", std::string(to_string(f.category))}, {"rationale", f.rationale}});
  json hints = json::array();
  for (const HintWord& w : m.hint_words) {
    json applies = json::array();
    for (const HintApplicability& a : w.applies_to) {
      json cats = json::array();
      for (UcaCategory c : a.categories) cats.push_back(std::string(to_string(c)));
      applies.push_back({{"action", a.action}, {"categories", cats}});
    }
    hints.push_back(
        {{"id", w.id}, {"text", w.text}, {"applies_to", applies}, {"cause_tags", write_category_map(w.cause_tags)}});
  }
  return {{"format_version", kScenarioFormatVersion},
          {"structure",
           {{"system", m.structure.system},
            {"focus_component", m.structure.focus_component},
            {"components", m.structure.components},
            {"control_actions", actions},
            {"feedback_links", feedback}}},
          {"hazards", hazards},
          {"safety_constraints", constraints},
          {"category_hazards", write_category_map(m.category_hazards)},
          {"filters", filters},
          {"hint_words", hints}};
}

namespace {

AttackType read_attack_type(const json& j, const std::string& p) {
  ObjectReader a(j, p);
  AttackType t;
  t.id = a.string("id");
  t.name = a.string("name");
  t.caused_event = a.string("caused_event");
  t.sensor = parse_enum(a.require("sensor"), a.sub("sensor"), sensor_kind_from_string);
  t.references = string_list(a.require("references"), a.sub("references"));
  if (const json* k = a.optional("sim_kind"); k && !k->is_null())
    t.sim_kind = parse_enum(*k, a.sub("sim_kind"), attack_kind_from_string);
  if (const json* pr = a.optional("preset")) {
    if (!pr->is_object()) throw ScenarioError(a.sub("preset"), "expected an object");
    t.preset = *pr;
  }
  if (const json* ps = a.optional("parameters")) t.parameters = string_list(*ps, a.sub("parameters"));
  a.finish();
  return t;
}

}  // namespace

AttackCatalog load_catalog(const json& document) {
  ObjectReader r(document, "");
  check_version(r);
  AttackCatalog c;
  c.attack_types = object_list<AttackType>(r, "attack_types", read_attack_type);
  r.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("/attack_types", e.what());
  }
  return c;
}

json to_json(const AttackType& t) {
  return {{"id", t.id},
          {"name", t.name},
          {"caused_event", t.caused_event},
          {"sensor", std::string(to_string(t.sensor))},
          {"references", t.references},
          {"sim_kind", t.sim_kind ? json(std::string(to_string(*t.sim_kind))) : json(nullptr)},
          {"preset", t.preset},
          {"parameters", t.parameters}};
}

json to_json(const AttackCatalog& c) {
  json types = json::array();
  for (const AttackType& t : c.attack_types) types.push_back(to_json(t));
  return {{"format_version", kScenarioFormatVersion}, {"attack_types", types}};
}

json to_json(const AttackScenarioTemplate& t) {
  json types = json::array();
  for (const AttackType& a : t.attack_types) types.push_back(to_json(a));
  return {{"format_version", kScenarioFormatVersion},
          {"id", t.id},
          {"hazard_scenario", t.hazard_scenario},
          {"cause_tag", t.cause_tag},
          {"attack_types", types},
          {"unresolved_parameters", t.unresolved_parameters},
          {"target_constraints", t.target_constraints},
          {"traceability",
           {{"template", t.trace.template_id},
            {"hazard_scenario", t.trace.hazard_scenario},
            {"uca", t.trace.uca},
            {"control_action", t.trace.control_action},
            {"hazards", t.trace.hazards}}}};
}

AttackScenarioTemplate load_template(const json& document) {
  ObjectReader r(document, "");
  check_version(r);
  AttackScenarioTemplate t;
  t.id = r.string("id");
  t.hazard_scenario = r.string("hazard_scenario");
  t.cause_tag = r.string("cause_tag", "");
  t.attack_types = object_list<AttackType>(r, "attack_types", read_attack_type);
  if (t.attack_types.empty()) throw ScenarioError("/attack_types", "a template needs at least one attack type");
  t.unresolved_parameters = string_list(r.require("unresolved_parameters"), "/unresolved_parameters");
  t.target_constraints = string_list(r.require("target_constraints"), "/target_constraints");
  {
    ObjectReader tr(r.require("traceability"), "/traceability");
    t.trace.template_id = tr.string("template");
    t.trace.hazard_scenario = tr.string("hazard_scenario");
    t.trace.uca = tr.string("uca");
    t.trace.control_action = tr.string("control_action");
    t.trace.hazards = string_list(tr.require("hazards"), tr.sub("hazards"));
    tr.finish();
  }
  r.finish();
  return t;
}

json to_json(const AnalysisReport& report) {
  json ucas = json::array();
  for (const UnsafeControlAction& u : report.ucas)
    ucas.push_back({{"id", u.id},
                    {"action", u.action},
                    {"category", std::string(to_string(u.category))},
                    {"hazards", u.hazards},
                    {"rationale", u.rationale},
                    {"aeb_related", u.aeb_related}});
  json scenarios = json::array();
  for (const HazardScenario& s : report.scenarios)
    scenarios.push_back({{"id", s.id},
                         {"uca", s.uca},
                         {"hint_word", s.hint_word},
                         {"cause", s.cause},
                         {"cause_tags", s.cause_tags}});
  json templates = json::array();
  for (const AttackScenarioTemplate& t : report.link.templates) templates.push_back(to_json(t));
  json uncovered = json::array();
  for (const UncoveredEntry& u : report.link.uncovered)
    uncovered.push_back({{"hazard_scenario", u.hazard_scenario}, {"cause_tag", u.cause_tag}});
  return {{"counts",
           {{"ucas", report.ucas.size()},
            {"aeb_ucas", report.aeb_uca_count()},
            {"hazard_scenarios", report.scenarios.size()},
            {"attack_scenarios", report.link.templates.size()},
            {"uncovered", report.link.uncovered.size()}}},
          {"ucas", ucas},
          {"hazard_scenarios", scenarios},
          {"attack_scenarios", templates},
          {"uncovered", uncovered}};
}

std::string report_table(const AnalysisReport& report, const StpaModel& model) {
  std::map<std::string, const HazardScenario*> scenarios;
  for (const HazardScenario& s : report.scenarios) scenarios[s.id] = &s;
  std::map<std::string, std::string> constraint_text;
  for (const ConstraintDef& c : model.constraints) constraint_text[c.id] = c.description;

  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"Template", "Hazard scenario", "Attack", "Target constraint"});
  for (const AttackScenarioTemplate& t : report.link.templates) {
    std::string attack;
    for (const AttackType& a : t.attack_types) attack += (attack.empty() ? "" : "; ") + a.name + " [" + a.id + "]";
    std::string target;
    for (const std::string& sc : t.target_constraints) target += (target.empty() ? "" : ", ") + sc;
    rows.push_back({t.id, t.hazard_scenario + ": " + scenarios.at(t.hazard_scenario)->cause, attack, target});
  }
  std::array<std::size_t, 4> width{};
  for (const auto& row : rows)
    for (std::size_t k = 0; k < 4; ++k) width[k] = std::max(width[k], row[k].size());
  std::ostringstream out;
  auto rule = [&] {
    for (std::size_t k = 0; k < 4; ++k) out << "+" << std::string(width[k] + 2, '-');
    out << "+\n";
  };
  rule();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) out << "| " << rows[i][k] << std::string(width[k] - rows[i][k].size() + 1, ' ');
    out << "|\n";
    if (i == 0) rule();
  }
  rule();
  out << "\nUCAs: " << report.ucas.size() << " (" << report.aeb_uca_count() << " AEB-related), hazard scenarios: "
      << report.scenarios.size() << ", attack scenarios: " << report.link.templates.size()
      << ", uncovered: " << report.link.uncovered.size() << "\n";
  for (const auto& [id, text] : constraint_text) out << id << ": " << text << "\n";
  return out.str();
}

// ---- concretization ----

json Concretized::to_json() const {
  if (scenario) return aebsim::to_json(*scenario);
  if (sweep) return aebsim::to_json(*sweep);
  return nullptr;
}

Concretized concretize(const AttackScenarioTemplate& tmpl, const Scenario& scenario) {
  if (tmpl.attack_types.empty()) throw BindingError("template '" + tmpl.id + "' has no attack types");
  json doc = aebsim::to_json(scenario);
  doc.erase("attack_slots");
  const json& slots = scenario.attack_slots;

  std::vector<std::string> missing;
  std::vector<SweepAxis> axes;
  for (const AttackType& type : tmpl.attack_types) {
    if (!type.sim_kind) throw BindingError("attack type '" + type.id + "' (" + type.name + ") has no simulator model");
    if (!scenario.ego.sensors.has(type.sensor))
      throw BindingError("attack type '" + type.id + "' targets the " + std::string(to_string(type.sensor)) +
                         " sensor, which the ego of '" + scenario.name + "' does not carry");
    const std::size_t k = doc["attacks"].size();
    json attack = type.preset;
    attack["id"] = tmpl.id + "-" + type.id;
    attack["kind"] = std::string(to_string(*type.sim_kind));

    for (const std::string& param : type.parameters) {
      if (std::find(tmpl.unresolved_parameters.begin(), tmpl.unresolved_parameters.end(), param) ==
          tmpl.unresolved_parameters.end())
        continue;
      const auto target = slot_target(param);
      if (!target) throw BindingError("unknown attack parameter '" + param + "'");
      if (!slots.is_object() || !slots.contains(param)) {
        missing.push_back(param);
        continue;
      }
      const json& slot = slots[param];
      if (slot.is_object() && slot.contains("value")) {
        apply_slot(attack, *target, slot_value(param, slot["value"]));
      } else if (slot.is_object() && slot.contains("sweep") && slot["sweep"].is_array() && !slot["sweep"].empty()) {
        SweepAxis axis;
        axis.path = "/attacks/" + std::to_string(k) + target->pointer;
        axis.label = param;
        for (const json& v : slot["sweep"]) axis.values.push_back(slot_value(param, v));
        apply_slot(attack, *target, axis.values.front());
        axes.push_back(std::move(axis));
      } else {
        throw BindingError("slot '" + param + "' must be {\"value\": v} or {\"sweep\": [v, ...]}");
      }
    }
    doc["attacks"].push_back(attack);
  }
  if (!missing.empty()) {
    std::string list;
    for (const std::string& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw BindingError("template '" + tmpl.id + "' has unbound parameters: " + list);
  }
  doc["name"] = scenario.name + "+" + tmpl.id;

  Concretized out;
  try {
    if (axes.empty()) {
      out.scenario = load_scenario(doc);
    } else {
      SweepGrid grid;
      grid.name = doc["name"].get<std::string>();
      grid.base = doc;
      grid.axes = std::move(axes);
      grid.seed = scenario.seed;
      grid.validate();
      out.sweep = std::move(grid);
    }
  } catch (const ScenarioError& e) {
    throw BindingError(std::string("concretized scenario is invalid: ") + e.what());
  }
  return out;
}

}  // namespace aebsim::stpa
