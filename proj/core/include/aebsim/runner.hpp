#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aebsim/monitors.hpp"
#include "aebsim/scenarios.hpp"

namespace aebsim {

/// Library version string, e.g. "0.1.0".
const char* version();

struct Provenance {
  std::string tool_version;
  std::string scenario_hash;
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

struct RunResult {
  RunTrace trace;
  Verdict verdict;
  Provenance provenance;
};

/// Closed-loop simulation of one scenario: attacks, sensing, concatenation,
/// tracking, MIO selection, AEB decision, plant step, until a termination
/// condition or the duration limit. Model errors end the run and are reported
/// in the trace instead of thrown.
RunResult run_once(const Scenario& scenario, std::uint64_t seed);

/// Majority outcome over replicates; ties resolve to the more severe outcome.
Outcome majority_outcome(const std::vector<Outcome>& outcomes);

struct CellSummary {
  std::vector<std::size_t> coords;
  Outcome outcome = Outcome::Safe;
  std::vector<Outcome> replicate_outcomes;
  std::vector<std::uint64_t> replicate_seeds;
  double min_separation = 0.0;  // of the first replicate matching the majority outcome
  std::optional<double> stop_position_margin;
  std::optional<double> first_brake_time;
  std::optional<std::string> error;

  bool operator==(const CellSummary&) const = default;
};

struct SweepResult {
  std::string name;
  std::vector<SweepAxis> axes;
  std::vector<CellSummary> cells;  // row-major, last axis fastest
  int replicates = 1;
  Provenance provenance;  // scenario hash of the base scenario, base seed

  bool operator==(const SweepResult&) const = default;
  std::vector<std::size_t> shape() const;
  const CellSummary& at(const std::vector<std::size_t>& coords) const;
  std::size_t count(Outcome outcome) const;
};

/// Runs every cell and replicate on `parallelism` worker threads. Results are
/// keyed by coordinates, so the output does not depend on scheduling.
SweepResult run_sweep(const SweepGrid& grid, int parallelism = 1);

}  // namespace aebsim
