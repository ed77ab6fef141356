#include "vtt/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace vtt {

using json = nlohmann::ordered_json;

namespace {

struct RealField {
  const char* key;
  double PlannerConfig::*ptr;
};
struct IntField {
  const char* key;
  int PlannerConfig::*ptr;
};

constexpr RealField kReal[] = {
    {"len_min", &PlannerConfig::len_min},
    {"len_max", &PlannerConfig::len_max},
    {"clearance", &PlannerConfig::clearance},
    {"angle_min", &PlannerConfig::angle_min},
    {"manip_min", &PlannerConfig::manip_min},
    {"inflate", &PlannerConfig::inflate},
    {"rrt_step", &PlannerConfig::rrt_step},
    {"check_resolution", &PlannerConfig::check_resolution},
    {"sample_min_dist", &PlannerConfig::sample_min_dist},
    {"split_step", &PlannerConfig::split_step},
    {"split_max", &PlannerConfig::split_max},
    {"ground_tol", &PlannerConfig::ground_tol},
    {"stability_margin", &PlannerConfig::stability_margin},
    {"pinv_rcond", &PlannerConfig::pinv_rcond},
    {"goal_bias", &PlannerConfig::goal_bias},
};

constexpr IntField kInt[] = {
    {"rrt_iter_factor", &PlannerConfig::rrt_iter_factor},
    {"grouping_retries", &PlannerConfig::grouping_retries},
    {"sample_iter_factor", &PlannerConfig::sample_iter_factor},
    {"sample_min_count", &PlannerConfig::sample_min_count},
    {"topology_replans", &PlannerConfig::topology_replans},
};

Vec3 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw InputError(where + ": expected [x, y, z]");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw InputError(where + ": coordinate " + std::to_string(k) + " is not a number");
    v[k] = j[k].get<double>();
  }
  return v;
}

json vec_to(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

void read_config(const json& c, PlannerConfig& cfg) {
  if (!c.is_object()) throw InputError("config: expected an object");
  for (auto it = c.begin(); it != c.end(); ++it) {
    const std::string& key = it.key();
    bool known = false;
    for (const RealField& f : kReal) {
      if (key != f.key) continue;
      if (!it->is_number()) throw InputError("config." + key + ": expected a number");
      cfg.*f.ptr = it->get<double>();
      known = true;
    }
    for (const IntField& f : kInt) {
      if (key != f.key) continue;
      if (!it->is_number_integer()) throw InputError("config." + key + ": expected an integer");
      cfg.*f.ptr = it->get<int>();
      known = true;
    }
    if (key == "workspace") {
      if (!it->is_object() || !it->contains("min") || !it->contains("max")) {
        throw InputError("config.workspace: expected {min: [..], max: [..]}");
      }
      cfg.workspace.min = vec_from((*it)["min"], "config.workspace.min");
      cfg.workspace.max = vec_from((*it)["max"], "config.workspace.max");
      known = true;
    }
    if (!known) throw InputError("config: unknown field '" + key + "'");
  }
}

json config_json(const PlannerConfig& cfg) {
  json c;
  for (const RealField& f : kReal) c[f.key] = cfg.*f.ptr;
  for (const IntField& f : kInt) c[f.key] = cfg.*f.ptr;
  c["workspace"] = {{"min", vec_to(cfg.workspace.min)}, {"max", vec_to(cfg.workspace.max)}};
  return c;
}

json graph_json(const TrussGraph& g) {
  json nodes = json::object();
  for (const auto& [v, p] : g.nodes) nodes[std::to_string(v)] = vec_to(p);
  json members = json::array();
  for (const Member& m : g.members) members.push_back({m.a, m.b});
  json out;
  out["ground_height"] = g.ground_height;
  out["nodes"] = nodes;
  out["members"] = members;
  if (!g.node_mass.empty()) {
    json masses = json::object();
    for (const auto& [v, w] : g.node_mass) masses[std::to_string(v)] = w;
    out["node_mass"] = masses;
  }
  return out;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

NodeId parse_node_id(const std::string& text) {
  std::string s = text;
  if (!s.empty() && (s[0] == 'v' || s[0] == 'V')) s = s.substr(1);
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw InputError("bad node id '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw InputError("bad node id '" + text + "'");
  }
}

Vec3 parse_vec3(const std::string& text) {
  std::string s = text;
  if (s.find('[') == std::string::npos) s = "[" + s + "]";
  return vec_from(parse_json(s, "vector '" + text + "'"), "vector '" + text + "'");
}

Scene parse_scene(const std::string& text, const PlannerConfig& base) {
  const json j = parse_json(text, "scene");
  if (!j.is_object()) throw InputError("scene: expected an object");
  if (j.value("format", 0) != 1) throw InputError("scene: unsupported or missing format (expected 1)");
  Scene s;
  s.name = j.value("name", std::string());
  if (j.contains("notes")) {
    for (const json& n : j["notes"]) s.notes.push_back(n.get<std::string>());
  }
  s.graph.ground_height = j.value("ground_height", 0.0);
  if (!j.contains("nodes") || !j["nodes"].is_object()) throw InputError("scene.nodes: expected an object");
  for (auto it = j["nodes"].begin(); it != j["nodes"].end(); ++it) {
    const NodeId v = parse_node_id(it.key());
    s.graph.nodes[v] = vec_from(*it, "scene.nodes." + it.key());
  }
  if (!j.contains("members") || !j["members"].is_array()) throw InputError("scene.members: expected an array");
  for (size_t i = 0; i < j["members"].size(); ++i) {
    const json& m = j["members"][i];
    const std::string where = "scene.members[" + std::to_string(i) + "]";
    if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() || !m[1].is_number_integer()) {
      throw InputError(where + ": expected [id, id]");
    }
    const NodeId a = m[0].get<int>();
    const NodeId b = m[1].get<int>();
    if (a == b) throw InputError(where + ": self loop");
    if (!s.graph.has_node(a) || !s.graph.has_node(b)) throw InputError(where + ": unknown node");
    if (!s.graph.members.insert(Member(a, b)).second) throw InputError(where + ": duplicate member");
  }
  if (j.contains("node_mass")) {
    for (auto it = j["node_mass"].begin(); it != j["node_mass"].end(); ++it) {
      s.graph.node_mass[parse_node_id(it.key())] = it->get<double>();
    }
  }
  s.config = base;
  if (j.contains("config")) read_config(j["config"], s.config);
  s.config.check();
  for (const auto& [v, p] : s.graph.nodes) {
    if (!s.config.workspace.contains(p)) {
      throw InputError("scene: node " + std::to_string(v) + " lies outside the workspace");
    }
  }
  return s;
}

Scene load_scene(const std::string& path, const PlannerConfig& base) {
  try {
    return parse_scene(read_file(path), base);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string scene_to_json(const Scene& s) {
  json j;
  j["format"] = 1;
  j["name"] = s.name;
  if (!s.notes.empty()) j["notes"] = s.notes;
  const json g = graph_json(s.graph);
  for (auto it = g.begin(); it != g.end(); ++it) j[it.key()] = *it;
  j["config"] = config_json(s.config);
  return j.dump(2);
}

std::string scene_hash(const Scene& s) {
  json j;
  j["graph"] = graph_json(s.graph);
  j["config"] = config_json(s.config);
  // 64-bit FNV-1a over the canonical dump.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return hex64(h);
}

void apply_override(PlannerConfig& cfg, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos) throw InputError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string val = assignment.substr(eq + 1);
  json c = json::object();
  if (key == "workspace.min" || key == "workspace.max") {
    const Vec3 v = parse_vec3(val);
    (key == "workspace.min" ? cfg.workspace.min : cfg.workspace.max) = v;
    return;
  }
  c[key] = parse_json(val, "override " + key);
  read_config(c, cfg);
}

PlannerConfig load_config(const std::string& path, const PlannerConfig& base) {
  PlannerConfig cfg = base;
  try {
    read_config(parse_json(read_file(path), "config file"), cfg);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
  return cfg;
}

std::string config_to_json(const PlannerConfig& cfg) { return config_json(cfg).dump(2); }

std::vector<NodeTask> parse_tasks(const std::string& text) {
  const json j = parse_json(text, "task");
  if (!j.is_object() || j.value("format", 0) != 1) throw InputError("task: unsupported or missing format (expected 1)");
  if (!j.contains("goals") || !j["goals"].is_object()) throw InputError("task.goals: expected an object");
  std::vector<NodeTask> out;
  for (auto it = j["goals"].begin(); it != j["goals"].end(); ++it) {
    out.push_back({parse_node_id(it.key()), vec_from(*it, "task.goals." + it.key())});
  }
  return out;
}

std::vector<NodeTask> load_tasks(const std::string& path) {
  try {
    return parse_tasks(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<TelemetryRow> collect_telemetry(const TrussGraph& g, const Trajectory& t, const PlannerConfig& cfg) {
  std::vector<TelemetryRow> rows;
  for_each_substate(g, t, cfg.check_resolution, [&](int i, const TrussGraph& h) {
    rows.push_back({i, measure(h, cfg, t.records[i].group)});
    return true;
  });
  return rows;
}

std::string trajectory_to_json(const TrajectoryHeader& h, const Trajectory& t,
                               const std::vector<TelemetryRow>* telemetry) {
  json j;
  j["format"] = 1;
  j["scene_hash"] = h.scene_hash;
  j["seed"] = h.seed;
  j["config"] = config_json(h.config);
  json recs = json::array();
  for (size_t i = 0; i < t.records.size(); ++i) {
    const Record& r = t.records[i];
    json o;
    o["step"] = i;
    o["type"] = to_string(r.kind);
    o["node"] = r.node;
    if (r.kind != RecordKind::Move) o["other"] = r.other;
    o["from"] = vec_to(r.from);
    o["to"] = vec_to(r.to);
    o["group"] = r.group;
    if (r.kind == RecordKind::Split) o["partition"] = r.partition;
    recs.push_back(o);
  }
  j["records"] = recs;
  if (telemetry) {
    json rows = json::array();
    for (const TelemetryRow& row : *telemetry) {
      rows.push_back({{"step", row.record},
                      {"len_min", row.t.len_min},
                      {"len_max", row.t.len_max},
                      {"angle_min", row.t.angle_min},
                      {"manip", row.t.manip},
                      {"com_x", row.t.com_x},
                      {"com_y", row.t.com_y},
                      {"support", row.t.support}});
    }
    j["telemetry"] = rows;
  }
  return j.dump(1);
}

Trajectory parse_trajectory(const std::string& text, TrajectoryHeader* header) {
  const json j = parse_json(text, "trajectory");
  if (!j.is_object() || j.value("format", 0) != 1) {
    throw InputError("trajectory: unsupported or missing format (expected 1)");
  }
  if (header) {
    header->scene_hash = j.value("scene_hash", std::string());
    header->seed = j.value("seed", std::uint64_t{0});
    header->config = PlannerConfig{};
    if (j.contains("config")) read_config(j["config"], header->config);
  }
  Trajectory t;
  if (!j.contains("records") || !j["records"].is_array()) throw InputError("trajectory.records: expected an array");
  for (size_t i = 0; i < j["records"].size(); ++i) {
    const json& o = j["records"][i];
    const std::string where = "trajectory.records[" + std::to_string(i) + "]";
    Record r;
    const std::string type = o.value("type", std::string());
    if (type == "move") {
      r.kind = RecordKind::Move;
    } else if (type == "split") {
      r.kind = RecordKind::Split;
    } else if (type == "merge") {
      r.kind = RecordKind::Merge;
    } else {
      throw InputError(where + ": unknown type '" + type + "'");
    }
    if (!o.contains("node") || !o["node"].is_number_integer()) throw InputError(where + ": missing node");
    r.node = o["node"].get<int>();
    r.other = o.value("other", -1);
    r.from = vec_from(o.value("from", json()), where + ".from");
    r.to = vec_from(o.value("to", json()), where + ".to");
    if (o.contains("group")) r.group = o["group"].get<std::vector<NodeId>>();
    if (o.contains("partition")) r.partition = o["partition"].get<std::vector<NodeId>>();
    if (r.kind != RecordKind::Move && r.other < 0) throw InputError(where + ": event needs 'other'");
    t.records.push_back(std::move(r));
  }
  return t;
}

}  // namespace vtt
