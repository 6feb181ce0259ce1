#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "aebsim/emit.hpp"
#include "aebsim/runner.hpp"
#include "aebsim/scenarios.hpp"
#include "aebsim/stpa.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kUnsafe = 2, kModelError = 3 };

int exit_code_for(aebsim::Outcome o) {
  switch (o) {
    case aebsim::Outcome::Safe:
    case aebsim::Outcome::StoppedTooSoon: return kOk;
    case aebsim::Outcome::Crash:
    case aebsim::Outcome::ConstraintViolated: return kUnsafe;
    case aebsim::Outcome::ModelError: return kModelError;
  }
  return kOk;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("aebsim");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("AEBSIM_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

json with_provenance(json doc, const std::string& hash, std::uint64_t seed) {
  doc["provenance"] = to_json(aebsim::Provenance{aebsim::version(), hash, seed});
  return doc;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed_opt, const fs::path& out) {
  const aebsim::Scenario sc = aebsim::load_scenario_file(scenario_path);
  const std::uint64_t seed = seed_opt.value_or(sc.seed);
  spdlog::info("running '{}' seed={} hash={}", sc.name, seed, aebsim::scenario_hash(sc));
  const aebsim::RunResult run = aebsim::run_once(sc, seed);
  aebsim::write_text_file(out / "trace.csv", aebsim::trace_to_csv(run.trace, run.provenance));
  aebsim::write_text_file(out / "verdict.json", aebsim::dump_json(aebsim::run_summary_json(sc, run)));
  aebsim::write_text_file(out / "scenario.json",
                          aebsim::dump_json(with_provenance(aebsim::to_json(sc), run.provenance.scenario_hash, seed)));
  const aebsim::Verdict& v = run.verdict;
  std::cout << sc.name << ": " << aebsim::to_string(v.outcome);
  if (v.violated_constraint) std::cout << " (" << *v.violated_constraint << ")";
  std::cout << " min_separation=" << v.min_separation << "\n";
  if (run.trace.model_error) spdlog::error("model error at tick {}: {}", *run.trace.model_error_tick, *run.trace.model_error);
  return exit_code_for(v.outcome);
}

int cmd_sweep(const std::string& grid_path, int parallel, const fs::path& out) {
  const aebsim::SweepGrid grid = aebsim::load_sweep_file(grid_path);
  spdlog::info("sweep '{}': {} cells x {} replicates, parallel={}", grid.name, grid.cell_count(), grid.replicates,
               parallel);
  const aebsim::SweepResult result = aebsim::run_sweep(grid, parallel);
  aebsim::write_text_file(out / "sweep.csv", aebsim::sweep_to_csv(result));
  aebsim::write_text_file(out / "sweep.json", aebsim::dump_json(to_json(result)));
  aebsim::write_text_file(out / "sweep.svg", aebsim::sweep_to_svg(result));
  std::cout << aebsim::sweep_to_csv(result);
  int code = kOk;
  for (const aebsim::CellSummary& c : result.cells) {
    const int cell_code = exit_code_for(c.outcome);
    if (cell_code == kModelError) code = kModelError;
    else if (cell_code == kUnsafe && code == kOk) code = kUnsafe;
  }
  return code;
}

int cmd_stpa_analyze(const std::string& model_path, const std::string& catalog_path, const fs::path& out) {
  const aebsim::stpa::StpaModel model = aebsim::stpa::load_model(aebsim::read_json_file(model_path));
  const aebsim::stpa::AttackCatalog catalog = aebsim::stpa::load_catalog(aebsim::read_json_file(catalog_path));
  const aebsim::stpa::AnalysisReport report = aebsim::stpa::analyze(model, catalog);
  json doc = to_json(report);
  doc["provenance"] = {{"tool_version", aebsim::version()}};
  aebsim::write_text_file(out / "report.json", aebsim::dump_json(doc));
  const std::string table = aebsim::stpa::report_table(report, model);
  aebsim::write_text_file(out / "report.txt", "# aebsim " + std::string(aebsim::version()) + "\n" + table);
  for (const auto& t : report.link.templates) {
    json tj = to_json(t);
    tj["provenance"] = {{"tool_version", aebsim::version()}};
    aebsim::write_text_file(out / "templates" / (t.id + ".json"), aebsim::dump_json(tj));
  }
  std::cout << "UCAs: " << report.ucas.size() << " (" << report.aeb_uca_count()
            << " AEB-related), hazard scenarios: " << report.scenarios.size()
            << ", attack scenarios: " << report.link.templates.size() << ", uncovered: " << report.link.uncovered.size()
            << "\n";
  return kOk;
}

int cmd_stpa_concretize(const std::string& template_path, const std::string& scenario_path, const fs::path& out) {
  json tdoc = aebsim::read_json_file(template_path);
  tdoc.erase("provenance");
  const aebsim::stpa::AttackScenarioTemplate tmpl = aebsim::stpa::load_template(tdoc);
  const aebsim::Scenario sc = aebsim::load_scenario_file(scenario_path);
  const aebsim::stpa::Concretized c = aebsim::stpa::concretize(tmpl, sc);
  std::string hash;
  std::uint64_t seed = 0;
  if (c.scenario) {
    hash = aebsim::scenario_hash(*c.scenario);
    seed = c.scenario->seed;
  } else {
    hash = aebsim::scenario_hash(aebsim::load_scenario(c.sweep->base));
    seed = c.sweep->seed;
  }
  aebsim::write_text_file(out, aebsim::dump_json(with_provenance(c.to_json(), hash, seed)));
  std::cout << (c.scenario ? "scenario" : "sweep grid") << " written to " << out.string() << "\n";
  return kOk;
}

int cmd_validate(const std::string& path) {
  const json doc = aebsim::read_json_file(path);
  if (doc.is_object() && (doc.contains("axes") || doc.contains("base_file"))) {
    const aebsim::SweepGrid g = aebsim::load_sweep_file(path);
    std::cout << "OK sweep '" << g.name << "' cells=" << g.cell_count() << "\n";
  } else {
    const aebsim::Scenario s = aebsim::load_scenario(doc);
    std::cout << "OK scenario '" << s.name << "' hash=" << aebsim::scenario_hash(s) << "\n";
  }
  return kOk;
}

int cmd_cpno(const aebsim::CpnoParams& params, const fs::path& out) {
  const aebsim::Scenario s = aebsim::instantiate_cpno(params);
  aebsim::write_text_file(out, aebsim::dump_json(aebsim::to_json(s)));
  std::cout << "CPNO scenario written to " << out.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"aebsim: closed-loop AEB simulator under sensor attacks"};
  app.set_version_flag("--version", std::string(aebsim::version()));
  app.require_subcommand(1);

  std::string scenario_path, grid_path, model_path, catalog_path, template_path, validate_path;
  std::optional<std::uint64_t> seed;
  int parallel = 1;
  std::string out_dir, out_file;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Seed (defaults to the scenario seed)");
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("--grid", grid_path, "Sweep JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--parallel", parallel, "Worker threads")->check(CLI::Range(1, 256));
  sweep->add_option("--out", out_dir, "Output directory")->required();

  auto* stpa = app.add_subcommand("stpa", "Safety analysis");
  stpa->require_subcommand(1);
  auto* analyze = stpa->add_subcommand("analyze", "Enumerate UCAs, hazard and attack scenarios");
  analyze->add_option("--model", model_path, "Control structure and rules JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--catalog", catalog_path, "Attack catalog JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", out_dir, "Output directory")->required();
  auto* concretize = stpa->add_subcommand("concretize", "Embed an attack template into a scenario");
  concretize->add_option("--template", template_path, "Template JSON")->required()->check(CLI::ExistingFile);
  concretize->add_option("--scenario", scenario_path, "Scenario JSON with attack_slots")
      ->required()
      ->check(CLI::ExistingFile);
  concretize->add_option("--out", out_file, "Output JSON file")->required();

  auto* scenario = app.add_subcommand("scenario", "Scenario utilities");
  scenario->require_subcommand(1);
  auto* validate = scenario->add_subcommand("validate", "Validate a scenario or sweep file");
  validate->add_option("file", validate_path)->required()->check(CLI::ExistingFile);
  aebsim::CpnoParams cpno_params;
  auto* cpno = scenario->add_subcommand("cpno", "Generate a CPNO scenario");
  cpno->add_option("--ego-speed", cpno_params.ego_speed, "m/s");
  cpno->add_option("--ped-speed", cpno_params.ped_speed, "m/s");
  cpno->add_option("--conflict-distance", cpno_params.conflict_distance, "m");
  cpno->add_option("--out", out_file, "Output JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(scenario_path, seed, out_dir);
    if (*sweep) return cmd_sweep(grid_path, parallel, out_dir);
    if (*analyze) return cmd_stpa_analyze(model_path, catalog_path, out_dir);
    if (*concretize) return cmd_stpa_concretize(template_path, scenario_path, out_file);
    if (*validate) return cmd_validate(validate_path);
    if (*cpno) return cmd_cpno(cpno_params, out_file);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  }
  return kUsage;
}
