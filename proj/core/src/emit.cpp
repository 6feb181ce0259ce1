#include "aebsim/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace aebsim {

using json = nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

double number_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>(); }

template <class T>
std::optional<T> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

std::string fmt_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : ""; }

std::string provenance_line(const Provenance& p) {
  return "# aebsim " + p.tool_version + " scenario_hash=" + p.scenario_hash + " seed=" + std::to_string(p.seed);
}

std::string value_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* outcome_color(Outcome o) {
  switch (o) {
    case Outcome::Safe: return "#4caf50";
    case Outcome::Crash: return "#e53935";
    case Outcome::ConstraintViolated: return "#fb8c00";
    case Outcome::StoppedTooSoon: return "#fdd835";
    case Outcome::ModelError: return "#616161";
  }
  return "#ffffff";
}

}  // namespace

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json to_json(const Provenance& p) {
  return {{"tool_version", p.tool_version}, {"scenario_hash", p.scenario_hash}, {"seed", p.seed}};
}

json to_json(const Verdict& v) {
  return {{"outcome", std::string(to_string(v.outcome))},
          {"violated_constraint", opt(v.violated_constraint)},
          {"first_violation_time", opt(v.first_violation_time)},
          {"min_separation", number_or_null(v.min_separation)},
          {"stop_position_margin", opt(v.stop_position_margin)},
          {"first_brake_time", opt(v.first_brake_time)},
          {"error", opt(v.error)}};
}

json to_json(const SweepResult& r) {
  json axes = json::array();
  for (const SweepAxis& a : r.axes) axes.push_back({{"path", a.path}, {"label", a.label}, {"values", a.values}});
  json cells = json::array();
  for (const CellSummary& c : r.cells) {
    json outcomes = json::array();
    for (Outcome o : c.replicate_outcomes) outcomes.push_back(std::string(to_string(o)));
    cells.push_back({{"coords", c.coords},
                     {"outcome", std::string(to_string(c.outcome))},
                     {"replicate_outcomes", outcomes},
                     {"replicate_seeds", c.replicate_seeds},
                     {"min_separation", number_or_null(c.min_separation)},
                     {"stop_position_margin", opt(c.stop_position_margin)},
                     {"first_brake_time", opt(c.first_brake_time)},
                     {"error", opt(c.error)}});
  }
  return {{"name", r.name},
          {"axes", axes},
          {"shape", r.shape()},
          {"replicates", r.replicates},
          {"cells", cells},
          {"provenance", to_json(r.provenance)}};
}

SweepResult sweep_result_from_json(const json& j) {
  SweepResult r;
  r.name = j.at("name").get<std::string>();
  for (const json& a : j.at("axes")) {
    SweepAxis axis;
    axis.path = a.at("path").get<std::string>();
    axis.label = a.at("label").get<std::string>();
    for (const json& v : a.at("values")) axis.values.push_back(v);
    r.axes.push_back(std::move(axis));
  }
  r.replicates = j.at("replicates").get<int>();
  for (const json& c : j.at("cells")) {
    CellSummary cell;
    cell.coords = c.at("coords").get<std::vector<std::size_t>>();
    cell.outcome = outcome_from_string(c.at("outcome").get<std::string>());
    for (const json& o : c.at("replicate_outcomes")) cell.replicate_outcomes.push_back(outcome_from_string(o.get<std::string>()));
    cell.replicate_seeds = c.at("replicate_seeds").get<std::vector<std::uint64_t>>();
    cell.min_separation = number_from(c.at("min_separation"));
    cell.stop_position_margin = opt_from<double>(c.at("stop_position_margin"));
    cell.first_brake_time = opt_from<double>(c.at("first_brake_time"));
    cell.error = opt_from<std::string>(c.at("error"));
    r.cells.push_back(std::move(cell));
  }
  const json& p = j.at("provenance");
  r.provenance = {p.at("tool_version").get<std::string>(), p.at("scenario_hash").get<std::string>(),
                  p.at("seed").get<std::uint64_t>()};
  return r;
}

json run_summary_json(const Scenario& scenario, const RunResult& run) {
  json j{{"scenario", scenario.name},
         {"verdict", to_json(run.verdict)},
         {"ticks", run.trace.records.size()},
         {"model_error_tick", opt(run.trace.model_error_tick)},
         {"provenance", to_json(run.provenance)}};
  return j;
}

std::string sweep_to_csv(const SweepResult& r) {
  std::ostringstream out;
  out << provenance_line(r.provenance) << "\n";
  const auto shape = r.shape();
  if (shape.size() == 2) {
    out << csv_escape(r.axes[0].label + " \\ " + r.axes[1].label);
    for (const json& v : r.axes[1].values) out << "," << csv_escape(value_text(v));
    out << "\n";
    for (std::size_t i = 0; i < shape[0]; ++i) {
      out << csv_escape(value_text(r.axes[0].values[i]));
      for (std::size_t k = 0; k < shape[1]; ++k) out << "," << to_string(r.at({i, k}).outcome);
      out << "\n";
    }
    return out.str();
  }
  for (const SweepAxis& a : r.axes) out << csv_escape(a.label) << ",";
  out << "outcome\n";
  for (const CellSummary& c : r.cells) {
    for (std::size_t k = 0; k < c.coords.size(); ++k) out << csv_escape(value_text(r.axes[k].values[c.coords[k]])) << ",";
    out << to_string(c.outcome) << "\n";
  }
  return out.str();
}

std::string sweep_to_svg(const SweepResult& r) {
  const auto shape = r.shape();
  // Rank-1 grids render as one row; higher ranks flatten trailing axes into columns.
  const std::size_t rows = shape.size() >= 2 ? shape[0] : 1;
  const std::size_t cols = r.cells.size() / std::max<std::size_t>(rows, 1);
  constexpr int cell = 48, left = 90, top = 40, legend = 30;
  const int width = left + static_cast<int>(cols) * cell + 20;
  const int height = top + static_cast<int>(rows) * cell + 40 + legend;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<!-- " << xml_escape(provenance_line(r.provenance).substr(2)) << " -->\n";
  out << "<text x=\"4\" y=\"16\" font-size=\"13\">" << xml_escape(r.name) << "</text>\n";
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const CellSummary& c = r.cells[i];
    const std::size_t row = rows == 1 ? 0 : i / cols;
    const std::size_t col = rows == 1 ? i : i % cols;
    const int x = left + static_cast<int>(col) * cell;
    const int y = top + static_cast<int>(row) * cell;
    out << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
        << "\" fill=\"" << outcome_color(c.outcome) << "\" stroke=\"#ffffff\"><title>" << to_string(c.outcome)
        << "</title></rect>\n";
  }
  if (shape.size() >= 2) {
    for (std::size_t i = 0; i < rows; ++i)
      out << "<text x=\"" << left - 6 << "\" y=\"" << top + static_cast<int>(i) * cell + cell / 2 + 4
          << "\" text-anchor=\"end\">" << xml_escape(value_text(r.axes[0].values[i])) << "</text>\n";
    if (shape.size() == 2) {
      for (std::size_t k = 0; k < cols; ++k)
        out << "<text x=\"" << left + static_cast<int>(k) * cell + cell / 2 << "\" y=\""
            << top + static_cast<int>(rows) * cell + 14 << "\" text-anchor=\"middle\">"
            << xml_escape(value_text(r.axes[1].values[k])) << "</text>\n";
    }
    out << "<text x=\"4\" y=\"" << top - 6 << "\">" << xml_escape(r.axes[0].label) << "</text>\n";
    out << "<text x=\"" << left << "\" y=\"" << top + static_cast<int>(rows) * cell + 30 << "\">"
        << xml_escape(r.axes.back().label) << "</text>\n";
  } else {
    for (std::size_t k = 0; k < cols; ++k)
      out << "<text x=\"" << left + static_cast<int>(k) * cell + cell / 2 << "\" y=\"" << top + cell + 14
          << "\" text-anchor=\"middle\">" << xml_escape(value_text(r.axes[0].values[k])) << "</text>\n";
    out << "<text x=\"" << left << "\" y=\"" << top + cell + 30 << "\">" << xml_escape(r.axes[0].label) << "</text>\n";
  }
  int lx = 4;
  const int ly = height - 14;
  for (Outcome o : {Outcome::Safe, Outcome::StoppedTooSoon, Outcome::ConstraintViolated, Outcome::Crash,
                    Outcome::ModelError}) {
    out << "<rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\"" << outcome_color(o)
        << "\"/><text x=\"" << lx + 14 << "\" y=\"" << ly << "\">" << to_string(o) << "</text>\n";
    lx += 24 + 7 * static_cast<int>(to_string(o).size());
  }
  out << "</svg>\n";
  return out.str();
}

std::string trace_to_csv(const RunTrace& trace, const Provenance& provenance) {
  std::ostringstream out;
  out << provenance_line(provenance) << "\n";
  out << "tick,time,ego_x,ego_y,ego_speed,true_mio,true_mio_range,radar_detections,camera_detections,"
         "lidar_detections,confirmed_tracks,mio_range,mio_range_rate,sensed_stage,sensed_decel,oracle_stage,"
         "active_attacks,extra_noise_dbm,ghosts,min_separation,crash\n";
  for (const TraceRecord& r : trace.records) {
    std::string active;
    for (const std::string& a : r.attacks.active) active += (active.empty() ? "" : ";") + a;
    out << r.tick << "," << fmt_double(r.time) << "," << fmt_double(r.ego_x) << "," << fmt_double(r.ego_y) << ","
        << fmt_double(r.ego_speed) << "," << csv_escape(r.true_mio_id.value_or("")) << ","
        << fmt_opt(r.true_mio_range) << "," << r.radar.size() << "," << r.camera.size() << "," << r.lidar.size()
        << "," << r.confirmed_tracks.size() << "," << (r.mio ? fmt_double(r.mio->range()) : "") << ","
        << (r.mio ? fmt_opt(r.mio->range_rate) : "") << "," << to_string(r.sensed.stage) << ","
        << fmt_double(r.sensed.decel) << "," << to_string(r.oracle.stage) << "," << csv_escape(active) << ","
        << fmt_double(r.attacks.extra_noise) << "," << r.attacks.ghosts << "," << fmt_double(r.min_separation) << ","
        << (r.crash ? 1 : 0) << "\n";
  }
  if (trace.model_error)
    out << "# model_error tick=" << trace.model_error_tick.value_or(-1) << " " << *trace.model_error << "\n";
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace aebsim
