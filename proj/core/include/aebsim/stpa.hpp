#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aebsim/attacks.hpp"
#include "aebsim/scenarios.hpp"

namespace aebsim::stpa {

enum class UcaCategory { Providing, NotProviding, TooEarlyTooLate, StoppedTooSoonAppliedTooLong };

inline constexpr UcaCategory kAllCategories[] = {UcaCategory::Providing, UcaCategory::NotProviding,
                                                 UcaCategory::TooEarlyTooLate,
                                                 UcaCategory::StoppedTooSoonAppliedTooLong};

std::string_view to_string(UcaCategory c);
UcaCategory uca_category_from_string(std::string_view name);
/// Short code used in identifiers: P, NP, TETL, STS.
std::string_view short_code(UcaCategory c);

struct ControlAction {
  std::string id;
  std::string source;
  std::string target;
  std::string label;
};

struct FeedbackLink {
  std::string id;
  std::string source;
  std::string target;
  std::string label;
};

struct ControlStructure {
  std::string system;
  std::string focus_component;  // UCAs of actions touching it are tagged as AEB-related
  std::vector<std::string> components;
  std::vector<ControlAction> control_actions;
  std::vector<FeedbackLink> feedback_links;

  /// Endpoints must be declared components, ids unique, and the graph connected.
  void validate() const;
  const ControlAction& action(std::string_view id) const;
};

struct Hazard {
  std::string id;
  std::string description;
  std::vector<std::string> constraints;  // safety constraint ids
};

struct ConstraintDef {
  std::string id;
  std::string description;
};

/// Drops the (action, category) combination from the UCA cross product.
struct FilterRule {
  std::string action;
  UcaCategory category = UcaCategory::Providing;
  std::string rationale;
};

struct HintApplicability {
  std::string action;
  std::vector<UcaCategory> categories;
};

struct HintWord {
  std::string id;
  std::string text;
  std::vector<HintApplicability> applies_to;
  /// Events that would make the guided cause happen, per UCA category.
  std::map<UcaCategory, std::vector<std::string>> cause_tags;

  bool applies(const std::string& action, UcaCategory category) const;
};

struct StpaModel {
  ControlStructure structure;
  std::vector<Hazard> hazards;
  std::vector<ConstraintDef> constraints;
  std::map<UcaCategory, std::vector<std::string>> category_hazards;
  std::vector<FilterRule> filters;
  std::vector<HintWord> hint_words;

  void validate() const;
  const Hazard& hazard(std::string_view id) const;
};

struct UnsafeControlAction {
  std::string id;
  std::string action;
  UcaCategory category = UcaCategory::Providing;
  std::vector<std::string> hazards;
  std::string rationale;
  bool aeb_related = false;
};

struct HazardScenario {
  std::string id;
  std::string uca;
  std::string hint_word;
  std::string cause;
  std::vector<std::string> cause_tags;
};

struct AttackType {
  std::string id;
  std::string name;
  std::string caused_event;
  SensorKind sensor = SensorKind::Radar;
  std::vector<std::string> references;
  std::optional<AttackKind> sim_kind;  // absent: no simulator model
  nlohmann::json preset = nlohmann::json::object();  // AttackSpec fields applied before slot binding
  std::vector<std::string> parameters;  // left unresolved until embedded in a scenario
};

struct AttackCatalog {
  std::vector<AttackType> attack_types;

  void validate() const;
};

struct Traceability {
  std::string template_id;
  std::string hazard_scenario;
  std::string uca;
  std::string control_action;
  std::vector<std::string> hazards;
};

struct AttackScenarioTemplate {
  std::string id;
  std::string hazard_scenario;
  std::string cause_tag;  // matching rule that produced this template
  std::vector<AttackType> attack_types;
  std::vector<std::string> unresolved_parameters;
  std::vector<std::string> target_constraints;
  Traceability trace;
};

struct UncoveredEntry {
  std::string hazard_scenario;
  std::string cause_tag;
};

struct LinkResult {
  std::vector<AttackScenarioTemplate> templates;
  std::vector<UncoveredEntry> uncovered;
};

/// Cross product actions x categories in declaration order, minus filter rules.
std::vector<UnsafeControlAction> enumerate_ucas(const StpaModel& model);

/// One scenario per (UCA, applicable hint word), UCA order then hint order.
std::vector<HazardScenario> expand_hazard_scenarios(const std::vector<UnsafeControlAction>& ucas,
                                                    const std::vector<HintWord>& hint_words);

/// One template per (scenario, cause tag, matching attack type); cause tags
/// with no matching type are reported as uncovered.
LinkResult link_attacks(const std::vector<HazardScenario>& scenarios, const std::vector<UnsafeControlAction>& ucas,
                        const StpaModel& model, const AttackCatalog& catalog);

struct AnalysisReport {
  std::vector<UnsafeControlAction> ucas;
  std::vector<HazardScenario> scenarios;
  LinkResult link;

  std::size_t aeb_uca_count() const;
};

AnalysisReport analyze(const StpaModel& model, const AttackCatalog& catalog);

StpaModel load_model(const nlohmann::json& document);
AttackCatalog load_catalog(const nlohmann::json& document);
AttackScenarioTemplate load_template(const nlohmann::json& document);

nlohmann::json to_json(const StpaModel& model);
nlohmann::json to_json(const AttackCatalog& catalog);
nlohmann::json to_json(const AttackType& type);
nlohmann::json to_json(const AttackScenarioTemplate& t);
nlohmann::json to_json(const AnalysisReport& report);

/// Plain-text table: Hazard scenario | Attack | Target constraint.
std::string report_table(const AnalysisReport& report, const StpaModel& model);

/// Either a runnable scenario (all slots fixed) or a sweep grid.
struct Concretized {
  std::optional<Scenario> scenario;
  std::optional<SweepGrid> sweep;

  nlohmann::json to_json() const;
};

class BindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Embeds the template's attack into an operational scenario. Unresolved
/// parameters are bound from the scenario's attack_slots, each either
/// {"value": v} or {"sweep": [v...]}. Throws BindingError listing every
/// missing slot, or when the ego lacks the targeted sensor.
Concretized concretize(const AttackScenarioTemplate& tmpl, const Scenario& scenario);

}  // namespace aebsim::stpa
