#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "aebsim/runner.hpp"

namespace aebsim {

nlohmann::json to_json(const Provenance& p);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const SweepResult& result);
SweepResult sweep_result_from_json(const nlohmann::json& j);

/// Verdict plus provenance and the executed scenario.
nlohmann::json run_summary_json(const Scenario& scenario, const RunResult& run);

/// Outcome matrix. Two-axis sweeps render as a grid (rows = first axis);
/// other ranks as one row per cell. The first line is a provenance comment.
std::string sweep_to_csv(const SweepResult& result);

/// Heatmap with one <rect class="cell"> per grid cell.
std::string sweep_to_svg(const SweepResult& result);

/// Per-tick trace: kinematics, detection counts, MIO, sensed and oracle commands.
std::string trace_to_csv(const RunTrace& trace, const Provenance& provenance);

/// Writes `contents` to `path`, creating parent directories. Throws
/// std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace aebsim
