#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aebsim/emit.hpp"
#include "aebsim/runner.hpp"

using namespace aebsim;

namespace {

const std::string kData = AEBSIM_DATA_DIR;

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = haystack.find(needle); p != std::string::npos; p = haystack.find(needle, p + 1)) ++n;
  return n;
}

SweepResult small_sweep() {
  SweepGrid g = load_sweep_file(kData + "/sweeps/jam_grid.json");
  g.axes[0].values = {10.0, 60.0};
  g.axes[1].values = {-10.0, 5.0, 20.0};
  g.replicates = 1;
  return run_sweep(g, 1);
}

}  // namespace

TEST_CASE("sweep CSV is a labelled outcome matrix with a provenance line") {
  const SweepResult r = small_sweep();
  const auto ls = lines(sweep_to_csv(r));
  REQUIRE(ls.size() == 4);
  CHECK(ls[0].rfind("# aebsim ", 0) == 0);
  CHECK(ls[0].find("scenario_hash=" + r.provenance.scenario_hash) != std::string::npos);
  const auto header = split(ls[1], ',');
  REQUIRE(header.size() == 4);
  CHECK(header[1] == "-10.0");
  CHECK(header[3] == "20.0");
  for (std::size_t row = 0; row < 2; ++row) {
    const auto cells = split(ls[2 + row], ',');
    REQUIRE(cells.size() == 4);
    for (std::size_t col = 0; col < 3; ++col) CHECK(cells[col + 1] == to_string(r.at({row, col}).outcome));
  }
}

TEST_CASE("sweep JSON round-trips") {
  const SweepResult r = small_sweep();
  const nlohmann::json j = to_json(r);
  CHECK(sweep_result_from_json(j) == r);
  CHECK(dump_json(to_json(sweep_result_from_json(nlohmann::json::parse(dump_json(j))))) == dump_json(j));
  CHECK(j.contains("provenance"));
}

TEST_CASE("sweep SVG draws one cell per grid point") {
  const SweepResult r = small_sweep();
  const std::string svg = sweep_to_svg(r);
  CHECK(count_of(svg, "class=\"cell\"") == 6);
  CHECK(svg.find("<!--") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("trace CSV has a provenance line, header and one row per tick") {
  const Scenario s = load_scenario_file(kData + "/scenarios/cpno.json");
  const RunResult run = run_once(s, s.seed);
  const auto ls = lines(trace_to_csv(run.trace, run.provenance));
  REQUIRE(ls.size() == run.trace.records.size() + 2);
  CHECK(ls[0].rfind("# aebsim ", 0) == 0);
  const auto header = split(ls[1], ',');
  CHECK(header[0] == "tick");
  for (std::size_t i = 2; i < ls.size(); ++i) CHECK(split(ls[i], ',').size() == header.size());
  const nlohmann::json summary = run_summary_json(s, run);
  CHECK(summary["verdict"]["outcome"] == "Safe");
  CHECK(summary.contains("provenance"));
}

TEST_CASE("canonical JSON and file writing") {
  CHECK(dump_json({{"b", 1}, {"a", 2}}) == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
  const auto path = std::filesystem::temp_directory_path() / "aebsim_emit" / "nested" / "x.txt";
  write_text_file(path, "hello");
  std::ifstream in(path);
  std::string got;
  std::getline(in, got);
  CHECK(got == "hello");
}
