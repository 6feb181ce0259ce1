#include "aebsim/scenarios.hpp"

#include "strict_json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace aebsim {

using json = nlohmann::json;

namespace {

using detail::ObjectReader;
using detail::parse_enum;
using detail::require_array;

Pose2 read_pose(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Pose2 p{r.number("x"), r.number("y"), r.number("heading", 0.0)};
  r.finish();
  return p;
}

json write_pose(const Pose2& p) { return {{"x", p.x}, {"y", p.y}, {"heading", p.heading}}; }

Vec2 read_vec(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Vec2 v{r.number("x"), r.number("y")};
  r.finish();
  return v;
}

json write_vec(const Vec2& v) { return {{"x", v.x}, {"y", v.y}}; }

Extent read_extent(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Extent e{r.number("length"), r.number("width")};
  r.finish();
  if (!(e.length > 0.0) || !(e.width > 0.0)) throw ScenarioError(path, "extent must be positive");
  return e;
}

json write_extent(const Extent& e) { return {{"length", e.length}, {"width", e.width}}; }

std::vector<Waypoint> read_trajectory(const json& j, const std::string& path) {
  require_array(j, path);
  std::vector<Waypoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    ObjectReader r(j[i], p);
    Waypoint w{r.number("t"), r.number("x"), r.number("y")};
    r.finish();
    if (!out.empty() && !(w.t > out.back().t)) throw ScenarioError(p, "waypoint times must increase strictly");
    out.push_back(w);
  }
  return out;
}

json write_trajectory(const std::vector<Waypoint>& wps) {
  json a = json::array();
  for (const Waypoint& w : wps) a.push_back({{"t", w.t}, {"x", w.x}, {"y", w.y}});
  return a;
}

Body read_actor(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Body b;
  b.id = r.string("id");
  b.kind = parse_enum(r.require("kind"), r.sub("kind"), body_kind_from_string);
  if (b.kind == BodyKind::EgoVehicle) throw ScenarioError(r.sub("kind"), "actors cannot be EgoVehicle");
  b.pose = read_pose(r.require("pose"), r.sub("pose"));
  if (const json* v = r.optional("velocity")) b.velocity = read_vec(*v, r.sub("velocity"));
  b.extent = read_extent(r.require("extent"), r.sub("extent"));
  b.radar_cross_section = r.number("radar_cross_section");
  if (const json* t = r.optional("trajectory")) b.trajectory = read_trajectory(*t, r.sub("trajectory"));
  r.finish();
  if (!b.trajectory.empty()) {
    if (r.has("velocity")) throw ScenarioError(r.sub("velocity"), "scripted actors take their velocity from the trajectory");
    b.velocity = scripted_velocity(b, 0.0);
  }
  return b;
}

json write_actor(const Body& b) {
  json j{{"id", b.id},
         {"kind", std::string(to_string(b.kind))},
         {"pose", write_pose(b.pose)},
         {"extent", write_extent(b.extent)},
         {"radar_cross_section", b.radar_cross_section}};
  if (b.trajectory.empty()) j["velocity"] = write_vec(b.velocity);
  else j["trajectory"] = write_trajectory(b.trajectory);
  return j;
}

CfarConfig read_cfar(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  CfarConfig c;
  c.num_train = r.integer("num_train", c.num_train);
  c.num_guard = r.integer("num_guard", c.num_guard);
  c.pfa = r.number("pfa", c.pfa);
  r.finish();
  if (c.num_train < 1 || c.num_guard < 0) throw ScenarioError(path, "num_train >= 1 and num_guard >= 0 required");
  if (!(c.pfa > 0.0 && c.pfa < 1.0)) throw ScenarioError(r.sub("pfa"), "pfa must lie in (0, 1)");
  return c;
}

json write_cfar(const CfarConfig& c) {
  return {{"num_train", c.num_train}, {"num_guard", c.num_guard}, {"pfa", c.pfa}};
}

RadarConfig read_radar(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  RadarConfig c;
  c.tx_power = r.number("tx_power", c.tx_power);
  c.antenna_gain = r.number("antenna_gain", c.antenna_gain);
  c.wavelength = r.number("wavelength", c.wavelength);
  c.max_range = r.number("max_range", c.max_range);
  c.range_bin_width = r.number("range_bin_width", c.range_bin_width);
  c.noise_floor = r.number("noise_floor", c.noise_floor);
  c.fov = r.number("fov", c.fov);
  c.range_rate_sigma = r.number("range_rate_sigma", c.range_rate_sigma);
  if (const json* v = r.optional("cfar")) c.cfar = read_cfar(*v, r.sub("cfar"));
  r.finish();
  if (!(c.wavelength > 0.0) || !(c.max_range > 0.0) || !(c.range_bin_width > 0.0) || !(c.fov > 0.0) ||
      c.range_rate_sigma < 0.0)
    throw ScenarioError(path, "wavelength, max_range, range_bin_width and fov must be positive");
  if (c.bins() < 2 * (c.cfar.num_train + c.cfar.num_guard) + 1)
    throw ScenarioError(path, "range profile is shorter than the CFAR window");
  return c;
}

json write_radar(const RadarConfig& c) {
  return {{"tx_power", c.tx_power},
          {"antenna_gain", c.antenna_gain},
          {"wavelength", c.wavelength},
          {"max_range", c.max_range},
          {"range_bin_width", c.range_bin_width},
          {"noise_floor", c.noise_floor},
          {"fov", c.fov},
          {"range_rate_sigma", c.range_rate_sigma},
          {"cfar", write_cfar(c.cfar)}};
}

DetectionCurve read_curve(const json& j, const std::string& path) {
  require_array(j, path);
  DetectionCurve curve;
  curve.points.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    ObjectReader r(j[i], p);
    const double range = r.number("range");
    const double prob = r.number("p");
    r.finish();
    if (prob < 0.0 || prob > 1.0) throw ScenarioError(p, "probability must lie in [0, 1]");
    if (!curve.points.empty() && !(range > curve.points.back().first))
      throw ScenarioError(p, "ranges must increase strictly");
    curve.points.emplace_back(range, prob);
  }
  if (curve.points.empty()) throw ScenarioError(path, "detection curve needs at least one point");
  return curve;
}

json write_curve(const DetectionCurve& c) {
  json a = json::array();
  for (const auto& [range, p] : c.points) a.push_back({{"range", range}, {"p", p}});
  return a;
}

CameraConfig read_camera(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  CameraConfig c;
  c.fov = r.number("fov", c.fov);
  c.max_range = r.number("max_range", c.max_range);
  if (const json* v = r.optional("p_detect")) c.p_detect = read_curve(*v, r.sub("p_detect"));
  c.min_visible_fraction = r.number("min_visible_fraction", c.min_visible_fraction);
  c.range_sigma = r.number("range_sigma", c.range_sigma);
  c.azimuth_sigma = r.number("azimuth_sigma", c.azimuth_sigma);
  if (const json* v = r.optional("range_rate_sigma"); v && !v->is_null())
    c.range_rate_sigma = ObjectReader::as_number(*v, r.sub("range_rate_sigma"));
  r.finish();
  if (!(c.fov > 0.0) || !(c.max_range > 0.0)) throw ScenarioError(path, "fov and max_range must be positive");
  if (c.range_sigma < 0.0 || c.azimuth_sigma < 0.0 || c.range_rate_sigma.value_or(0.0) < 0.0)
    throw ScenarioError(path, "noise sigmas must be >= 0");
  return c;
}

json write_camera(const CameraConfig& c) {
  json j{{"fov", c.fov},
         {"max_range", c.max_range},
         {"p_detect", write_curve(c.p_detect)},
         {"min_visible_fraction", c.min_visible_fraction},
         {"range_sigma", c.range_sigma},
         {"azimuth_sigma", c.azimuth_sigma}};
  if (c.range_rate_sigma) j["range_rate_sigma"] = *c.range_rate_sigma;
  return j;
}

LidarConfig read_lidar(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  LidarConfig c;
  c.fov = r.number("fov", c.fov);
  c.angular_resolution = r.number("angular_resolution", c.angular_resolution);
  c.max_range = r.number("max_range", c.max_range);
  c.cluster_gap = r.number("cluster_gap", c.cluster_gap);
  r.finish();
  if (!(c.fov > 0.0) || !(c.angular_resolution > 0.0) || !(c.max_range > 0.0) || !(c.cluster_gap > 0.0))
    throw ScenarioError(path, "lidar parameters must be positive");
  return c;
}

json write_lidar(const LidarConfig& c) {
  return {{"fov", c.fov},
          {"angular_resolution", c.angular_resolution},
          {"max_range", c.max_range},
          {"cluster_gap", c.cluster_gap}};
}

SensorSuite read_sensors(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SensorSuite s;
  if (const json* v = r.optional("radar")) s.radar = read_radar(*v, r.sub("radar"));
  if (const json* v = r.optional("camera")) s.camera = read_camera(*v, r.sub("camera"));
  if (const json* v = r.optional("lidar")) s.lidar = read_lidar(*v, r.sub("lidar"));
  r.finish();
  return s;
}

json write_sensors(const SensorSuite& s) {
  json j = json::object();
  if (s.radar) j["radar"] = write_radar(*s.radar);
  if (s.camera) j["camera"] = write_camera(*s.camera);
  if (s.lidar) j["lidar"] = write_lidar(*s.lidar);
  return j;
}

TrackerConfig read_tracker(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  TrackerConfig c;
  c.m_confirm = r.integer("m_confirm", c.m_confirm);
  c.n_window = r.integer("n_window", c.n_window);
  c.gate_radius = r.number("gate_radius", c.gate_radius);
  c.miss_delete = r.integer("miss_delete", c.miss_delete);
  c.smoothing = r.number("smoothing", c.smoothing);
  r.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(path, e.what());
  }
  return c;
}

json write_tracker(const TrackerConfig& c) {
  return {{"m_confirm", c.m_confirm},
          {"n_window", c.n_window},
          {"gate_radius", c.gate_radius},
          {"miss_delete", c.miss_delete},
          {"smoothing", c.smoothing}};
}

AebConfig read_aeb(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  AebConfig c;
  c.fcw_reaction_time = r.number("fcw_reaction_time", c.fcw_reaction_time);
  c.partial1_decel = r.number("partial1_decel", c.partial1_decel);
  c.partial2_decel = r.number("partial2_decel", c.partial2_decel);
  c.full_decel = r.number("full_decel", c.full_decel);
  c.headway_offset = r.number("headway_offset", c.headway_offset);
  c.fcw_scale = r.number("fcw_scale", c.fcw_scale);
  c.partial1_scale = r.number("partial1_scale", c.partial1_scale);
  c.partial2_scale = r.number("partial2_scale", c.partial2_scale);
  c.full_scale = r.number("full_scale", c.full_scale);
  r.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(path, e.what());
  }
  return c;
}

json write_aeb(const AebConfig& c) {
  return {{"fcw_reaction_time", c.fcw_reaction_time},
          {"partial1_decel", c.partial1_decel},
          {"partial2_decel", c.partial2_decel},
          {"full_decel", c.full_decel},
          {"headway_offset", c.headway_offset},
          {"fcw_scale", c.fcw_scale},
          {"partial1_scale", c.partial1_scale},
          {"partial2_scale", c.partial2_scale},
          {"full_scale", c.full_scale}};
}

FusionInputs read_fusion_inputs(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  FusionInputs f;
  f.radar = r.boolean("radar", f.radar);
  f.camera = r.boolean("camera", f.camera);
  f.lidar = r.boolean("lidar", f.lidar);
  r.finish();
  return f;
}

json write_fusion_inputs(const FusionInputs& f) {
  return {{"radar", f.radar}, {"camera", f.camera}, {"lidar", f.lidar}};
}

EgoConfig read_ego(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  EgoConfig e;
  e.body.id = r.string("id", "ego");
  e.body.kind = BodyKind::EgoVehicle;
  e.body.pose = read_pose(r.require("pose"), r.sub("pose"));
  const double speed = r.number("speed");
  if (speed < 0.0) throw ScenarioError(r.sub("speed"), "speed must be >= 0");
  e.body.velocity = Vec2{std::cos(e.body.pose.heading), std::sin(e.body.pose.heading)} * speed;
  e.body.extent = read_extent(r.require("extent"), r.sub("extent"));
  e.body.radar_cross_section = r.number("radar_cross_section", 10.0);
  e.aeb_enabled = r.boolean("aeb_enabled", e.aeb_enabled);
  e.lane_halfwidth = r.number("lane_halfwidth", e.lane_halfwidth);
  if (!(e.lane_halfwidth > 0.0)) throw ScenarioError(r.sub("lane_halfwidth"), "must be positive");
  e.sensors = read_sensors(r.require("sensors"), r.sub("sensors"));
  if (const json* v = r.optional("fusion_inputs")) e.fusion_inputs = read_fusion_inputs(*v, r.sub("fusion_inputs"));
  if (const json* v = r.optional("tracker")) e.tracker = read_tracker(*v, r.sub("tracker"));
  if (const json* v = r.optional("aeb")) e.aeb = read_aeb(*v, r.sub("aeb"));
  r.finish();
  return e;
}

json write_ego(const EgoConfig& e) {
  return {{"id", e.body.id},
          {"pose", write_pose(e.body.pose)},
          {"speed", e.body.speed()},
          {"extent", write_extent(e.body.extent)},
          {"radar_cross_section", e.body.radar_cross_section},
          {"aeb_enabled", e.aeb_enabled},
          {"lane_halfwidth", e.lane_halfwidth},
          {"sensors", write_sensors(e.sensors)},
          {"fusion_inputs", write_fusion_inputs(e.fusion_inputs)},
          {"tracker", write_tracker(e.tracker)},
          {"aeb", write_aeb(e.aeb)}};
}

AttackSpec read_attack(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  AttackSpec a;
  a.id = r.string("id");
  a.kind = parse_enum(r.require("kind"), r.sub("kind"), attack_kind_from_string);
  if (const json* v = r.optional("attacker_pose")) a.attacker_pose = read_pose(*v, r.sub("attacker_pose"));
  if (const json* v = r.optional("anchor")) a.anchor = parse_enum(*v, r.sub("anchor"), attack_anchor_from_string);
  a.tx_power = r.number("tx_power", a.tx_power);
  a.antenna_gain = r.number("antenna_gain", a.antenna_gain);
  a.spoof_range_offset = r.number("spoof_range_offset", a.spoof_range_offset);
  a.spoof_velocity = r.number("spoof_velocity", a.spoof_velocity);
  if (const json* v = r.optional("patch_classes")) {
    require_array(*v, r.sub("patch_classes"));
    for (std::size_t i = 0; i < v->size(); ++i)
      a.patch_classes.insert(
          parse_enum((*v)[i], r.sub("patch_classes") + "/" + std::to_string(i), object_class_from_string));
  }
  if (const json* v = r.optional("sector")) {
    ObjectReader s(*v, r.sub("sector"));
    a.sector = {s.number("lo"), s.number("hi")};
    s.finish();
  }
  a.t_start = r.number("t_start", a.t_start);
  a.t_end = r.number("t_end", a.t_end);
  r.finish();
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(path, e.what());
  }
  return a;
}

json write_attack(const AttackSpec& a) {
  json classes = json::array();
  for (ObjectClass c : a.patch_classes) classes.push_back(std::string(to_string(c)));
  return {{"id", a.id},
          {"kind", std::string(to_string(a.kind))},
          {"attacker_pose", write_pose(a.attacker_pose)},
          {"anchor", std::string(to_string(a.anchor))},
          {"tx_power", a.tx_power},
          {"antenna_gain", a.antenna_gain},
          {"spoof_range_offset", a.spoof_range_offset},
          {"spoof_velocity", a.spoof_velocity},
          {"patch_classes", classes},
          {"sector", {{"lo", a.sector.lo}, {"hi", a.sector.hi}}},
          {"t_start", a.t_start},
          {"t_end", a.t_end}};
}

SafetyConstraint read_monitor(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SafetyConstraint sc;
  sc.id = r.string("id");
  sc.description = r.string("description", "");
  sc.trigger_distance = r.number("trigger_distance");
  sc.max_latency = r.number("max_latency");
  r.finish();
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(path, e.what());
  }
  return sc;
}

json write_monitor(const SafetyConstraint& sc) {
  return {{"id", sc.id},
          {"description", sc.description},
          {"trigger_distance", sc.trigger_distance},
          {"max_latency", sc.max_latency}};
}

template <class T, class F>
std::vector<T> read_list(ObjectReader& r, const std::string& key, F&& read_one) {
  std::vector<T> out;
  const json* v = r.optional(key);
  if (!v) return out;
  require_array(*v, r.sub(key));
  for (std::size_t i = 0; i < v->size(); ++i) out.push_back(read_one((*v)[i], r.sub(key) + "/" + std::to_string(i)));
  return out;
}

void check_version(ObjectReader& r) {
  const int version = r.integer("format_version", -1);
  if (version == -1) throw ScenarioError(r.sub("format_version"), "missing required key 'format_version'");
  if (version != kScenarioFormatVersion)
    throw ScenarioError(r.sub("format_version"), "unsupported format version " + std::to_string(version));
}


}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

bool FusionInputs::uses(SensorKind kind) const {
  switch (kind) {
    case SensorKind::Radar: return radar;
    case SensorKind::Camera: return camera;
    case SensorKind::Lidar: return lidar;
  }
  return false;
}

WorldState Scenario::initial_world() const {
  WorldState w;
  w.ego_id = ego.body.id;
  w.bodies.push_back(ego.body);
  for (const Body& b : actors) w.bodies.push_back(b);
  return w;
}

void Scenario::validate() const {
  if (!(duration_limit > 0.0)) throw ScenarioError("/duration_limit", "must be positive");
  if (!(dt > 0.0)) throw ScenarioError("/dt", "must be positive");
  std::set<std::string> ids{ego.body.id};
  for (std::size_t i = 0; i < actors.size(); ++i) {
    if (!ids.insert(actors[i].id).second)
      throw ScenarioError("/actors/" + std::to_string(i) + "/id", "duplicate body id '" + actors[i].id + "'");
  }
  for (SensorKind k : {SensorKind::Radar, SensorKind::Camera, SensorKind::Lidar}) {
    if (ego.fusion_inputs.uses(k) && !ego.sensors.has(k))
      throw ScenarioError("/ego/fusion_inputs/" + std::string(k == SensorKind::Radar    ? "radar"
                                                                 : k == SensorKind::Camera ? "camera"
                                                                                           : "lidar"),
                          "fusion input references a sensor the ego does not carry");
  }
  std::set<std::string> attack_ids;
  for (std::size_t i = 0; i < attacks.size(); ++i) {
    if (!attack_ids.insert(attacks[i].id).second)
      throw ScenarioError("/attacks/" + std::to_string(i) + "/id", "duplicate attack id '" + attacks[i].id + "'");
  }
  try {
    check_attack_targets(attacks, ego.sensors);
    initial_world().validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("", e.what());
  }
  std::set<std::string> monitor_ids;
  for (std::size_t i = 0; i < monitors.size(); ++i) {
    if (!monitor_ids.insert(monitors[i].id).second)
      throw ScenarioError("/monitors/" + std::to_string(i) + "/id", "duplicate monitor id");
  }
}

Scenario load_scenario(const json& document) {
  ObjectReader r(document, "");
  Scenario s;
  check_version(r);
  s.name = r.string("name");
  s.duration_limit = r.number("duration_limit");
  s.dt = r.number("dt", s.dt);
  s.seed = r.unsigned64("seed", s.seed);
  s.ego = read_ego(r.require("ego"), "/ego");
  s.actors = read_list<Body>(r, "actors", read_actor);
  s.attacks = read_list<AttackSpec>(r, "attacks", read_attack);
  s.monitors = read_list<SafetyConstraint>(r, "monitors", read_monitor);
  if (const json* v = r.optional("conflict_point"); v && !v->is_null())
    s.conflict_point = read_vec(*v, "/conflict_point");
  s.comfort_margin = r.number("comfort_margin", s.comfort_margin);
  if (const json* v = r.optional("termination")) {
    ObjectReader t(*v, "/termination");
    s.termination.on_crash = t.boolean("on_crash", s.termination.on_crash);
    s.termination.on_ego_stopped = t.boolean("on_ego_stopped", s.termination.on_ego_stopped);
    t.finish();
  }
  if (const json* v = r.optional("provenance"); v && !v->is_object())
    throw ScenarioError("/provenance", "expected an object");  // informational, not retained
  if (const json* v = r.optional("attack_slots")) {
    if (!v->is_object()) throw ScenarioError("/attack_slots", "expected an object");
    s.attack_slots = *v;
  }
  r.finish();
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) { return load_scenario(read_json_file(path)); }

json to_json(const Scenario& s) {
  json actors = json::array();
  for (const Body& b : s.actors) actors.push_back(write_actor(b));
  json attacks = json::array();
  for (const AttackSpec& a : s.attacks) attacks.push_back(write_attack(a));
  json monitors = json::array();
  for (const SafetyConstraint& m : s.monitors) monitors.push_back(write_monitor(m));
  json j{{"format_version", s.format_version},
         {"name", s.name},
         {"duration_limit", s.duration_limit},
         {"dt", s.dt},
         {"seed", s.seed},
         {"ego", write_ego(s.ego)},
         {"actors", actors},
         {"attacks", attacks},
         {"monitors", monitors},
         {"comfort_margin", s.comfort_margin},
         {"termination", {{"on_crash", s.termination.on_crash}, {"on_ego_stopped", s.termination.on_ego_stopped}}}};
  if (s.conflict_point) j["conflict_point"] = write_vec(*s.conflict_point);
  if (s.attack_slots.is_object() && !s.attack_slots.empty()) j["attack_slots"] = s.attack_slots;
  return j;
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string bytes = to_json(scenario).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario instantiate_cpno(const CpnoParams& p) {
  if (!(p.ego_speed > 0.0)) throw std::invalid_argument("cpno: ego_speed must be positive");
  if (!(p.ped_speed > 0.0)) throw std::invalid_argument("cpno: ped_speed must be positive (no crossing otherwise)");
  if (!(p.conflict_distance > 0.0) || !(p.ped_start_offset > 0.0) || !(p.occluder_gap > 0.0))
    throw std::invalid_argument("cpno: distances must be positive");

  Scenario s;
  s.name = "CPNO";
  s.duration_limit = 10.0;
  s.seed = 1;

  s.ego.body.id = "ego";
  s.ego.body.kind = BodyKind::EgoVehicle;
  s.ego.body.extent = {4.5, 1.8};
  s.ego.body.radar_cross_section = 10.0;
  s.ego.body.velocity = {p.ego_speed, 0.0};
  s.ego.sensors.radar = RadarConfig{};
  s.ego.sensors.camera = CameraConfig{};
  s.ego.sensors.lidar = LidarConfig{};

  const double front = 0.5 * s.ego.body.extent.length;
  const double xc = front + p.conflict_distance;
  constexpr double kPed = 0.5;

  // Unbraked ego front reaches the pedestrian's near face when its center hits y = 0.
  const double t_meet = (p.conflict_distance - 0.5 * kPed) / p.ego_speed;
  const double t_walk = t_meet - p.ped_start_offset / p.ped_speed;
  if (t_walk < 0.0)
    throw std::invalid_argument("cpno: pedestrian cannot reach the conflict point in time (start offset too large)");
  const double y_end = -p.ped_start_offset - 2.0;

  Body ped;
  ped.id = "pedestrian";
  ped.kind = BodyKind::Pedestrian;
  ped.extent = {kPed, kPed};
  ped.radar_cross_section = 1.0;
  ped.pose = {xc, p.ped_start_offset, 0.0};
  ped.trajectory = {{0.0, xc, p.ped_start_offset},
                    {t_walk, xc, p.ped_start_offset},
                    {t_walk + (p.ped_start_offset - y_end) / p.ped_speed, xc, y_end}};
  if (t_walk == 0.0) ped.trajectory.erase(ped.trajectory.begin());
  ped.velocity = scripted_velocity(ped, 0.0);

  const double half_gap = 0.5 * p.occluder_gap;
  const double half_len = 0.5 * p.occluder_length;
  auto parked = [&](const std::string& id, double x) {
    Body b;
    b.id = id;
    b.kind = BodyKind::Obstruction;
    b.extent = {p.occluder_length, p.occluder_width};
    b.radar_cross_section = 10.0;
    b.pose = {x, p.occluder_lateral, 0.0};
    return b;
  };
  s.actors.push_back(ped);
  s.actors.push_back(parked("parked_near", xc - half_gap - half_len));
  s.actors.push_back(parked("parked_far", xc + half_gap + half_len));

  s.monitors.push_back({"SC1", "Brake at Partial1 or stronger within 0.5 s once an object is within 10 m ahead",
                        10.0, 0.5});
  s.conflict_point = Vec2{xc, 0.0};
  s.validate();
  return s;
}

std::size_t SweepGrid::cell_count() const {
  std::size_t n = 1;
  for (const SweepAxis& a : axes) n *= a.values.size();
  return n;
}

void SweepGrid::validate() const {
  if (axes.empty()) throw ScenarioError("/axes", "a sweep needs at least one axis");
  if (replicates < 1) throw ScenarioError("/replicates", "must be >= 1");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string p = "/axes/" + std::to_string(i);
    if (axes[i].values.empty()) throw ScenarioError(p + "/values", "axis has no values");
    json::json_pointer ptr;
    try {
      ptr = json::json_pointer(axes[i].path);
    } catch (const json::exception& e) {
      throw ScenarioError(p + "/path", e.what());
    }
    if (!base.contains(ptr))
      throw ScenarioError(p + "/path", "'" + axes[i].path + "' does not resolve in the base scenario");
  }
  try {
    load_scenario(base);
  } catch (const ScenarioError& e) {
    throw ScenarioError("/base" + e.path(), e.message());
  }
}

SweepGrid load_sweep(const json& document) {
  ObjectReader r(document, "");
  SweepGrid g;
  check_version(r);
  g.name = r.string("name", "");
  g.base = r.require("base");
  if (!g.base.is_object()) throw ScenarioError("/base", "expected a scenario object");
  const json& axes = require_array(r.require("axes"), "/axes");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string p = "/axes/" + std::to_string(i);
    ObjectReader a(axes[i], p);
    SweepAxis axis;
    axis.path = a.string("path");
    const json& values = require_array(a.require("values"), p + "/values");
    axis.values.assign(values.begin(), values.end());
    axis.label = a.string("label", axis.path);
    a.finish();
    g.axes.push_back(std::move(axis));
  }
  if (const json* v = r.optional("provenance"); v && !v->is_object())
    throw ScenarioError("/provenance", "expected an object");
  g.replicates = r.integer("replicates", g.replicates);
  g.seed = r.unsigned64("seed", g.seed);
  r.finish();
  g.validate();
  return g;
}

SweepGrid load_sweep_file(const std::string& path, const std::string& base_dir) {
  json doc = read_json_file(path);
  // "base_file" names a scenario document relative to the sweep file (or base_dir).
  if (doc.is_object() && doc.contains("base_file") && !doc.contains("base")) {
    if (!doc["base_file"].is_string()) throw ScenarioError("/base_file", "expected a string");
    std::filesystem::path dir = base_dir.empty() ? std::filesystem::path(path).parent_path()
                                                 : std::filesystem::path(base_dir);
    doc["base"] = read_json_file((dir / doc["base_file"].get<std::string>()).string());
    doc.erase("base_file");
  }
  return load_sweep(doc);
}

json to_json(const SweepGrid& g) {
  json axes = json::array();
  for (const SweepAxis& a : g.axes) axes.push_back({{"path", a.path}, {"values", a.values}, {"label", a.label}});
  return {{"format_version", g.format_version},
          {"name", g.name},
          {"base", g.base},
          {"axes", axes},
          {"replicates", g.replicates},
          {"seed", g.seed}};
}

std::uint64_t cell_seed(std::uint64_t base_seed, const std::vector<std::size_t>& coords, int replicate) {
  std::uint64_t h = mix64(base_seed);
  for (std::size_t c : coords) h = mix64(h ^ mix64(static_cast<std::uint64_t>(c)));
  return mix64(h ^ mix64(0x5eedULL + static_cast<std::uint64_t>(replicate)));
}

std::vector<std::size_t> unflatten(std::size_t index, const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> coords(shape.size());
  for (std::size_t k = shape.size(); k-- > 0;) {
    coords[k] = index % shape[k];
    index /= shape[k];
  }
  return coords;
}

std::size_t flatten(const std::vector<std::size_t>& coords, const std::vector<std::size_t>& shape) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) index = index * shape[k] + coords[k];
  return index;
}

std::vector<SweepCell> expand_sweep(const SweepGrid& grid) {
  std::vector<std::size_t> shape;
  for (const SweepAxis& a : grid.axes) shape.push_back(a.values.size());
  const std::size_t n = grid.cell_count();
  std::vector<SweepCell> cells;
  cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SweepCell cell;
    cell.coords = unflatten(i, shape);
    json doc = grid.base;
    for (std::size_t k = 0; k < grid.axes.size(); ++k) {
      const json::json_pointer ptr(grid.axes[k].path);
      const json& value = grid.axes[k].values[cell.coords[k]];
      json& node = doc[ptr];
      if (value.is_object() && node.is_object()) node.merge_patch(value);
      else node = value;
    }
    try {
      cell.scenario = load_scenario(doc);
    } catch (const ScenarioError& e) {
      std::ostringstream where;
      where << "/cells/" << i;
      throw ScenarioError(where.str() + e.path(), e.message());
    }
    cell.scenario.seed = cell_seed(grid.seed, cell.coords, 0);
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace aebsim
