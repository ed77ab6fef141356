// Scene, task and trajectory files (JSON, `format: 1`).
#pragma once

#include "vtt/geometry_planner.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace vtt {

struct Scene {
  std::string name;
  TrussGraph graph;
  PlannerConfig config;
  std::vector<std::string> notes;
};

// Fields missing from the scene's config keep the values of `base`.
Scene parse_scene(const std::string& text, const PlannerConfig& base = {});
Scene load_scene(const std::string& path, const PlannerConfig& base = {});
std::string scene_to_json(const Scene& s);

// Canonical hash of the graph and config, hex encoded.
std::string scene_hash(const Scene& s);

// Applies one `key=value` override; throws InputError on unknown keys or
// malformed values. Workspace corners take "[x,y,z]".
void apply_override(PlannerConfig& cfg, const std::string& assignment);

// Reads config fields from a JSON object file on top of `base`.
PlannerConfig load_config(const std::string& path, const PlannerConfig& base = {});

std::string config_to_json(const PlannerConfig& cfg);

// Geometry task file: {"format": 1, "goals": {"<id>": [x, y, z], ...}}.
std::vector<NodeTask> load_tasks(const std::string& path);
std::vector<NodeTask> parse_tasks(const std::string& text);

// Parses "[x,y,z]" or "x,y,z".
Vec3 parse_vec3(const std::string& text);

// Node ids may be written as "5" or "v5".
NodeId parse_node_id(const std::string& text);

struct TrajectoryHeader {
  std::string scene_hash;
  PlannerConfig config;
  std::uint64_t seed = 0;
};

struct TelemetryRow {
  int record = 0;
  Telemetry t;
};

// Telemetry of every sub-state, with the record's group as the moving set.
std::vector<TelemetryRow> collect_telemetry(const TrussGraph& g, const Trajectory& t, const PlannerConfig& cfg);

std::string trajectory_to_json(const TrajectoryHeader& h, const Trajectory& t,
                               const std::vector<TelemetryRow>* telemetry = nullptr);
Trajectory parse_trajectory(const std::string& text, TrajectoryHeader* header = nullptr);

std::string read_file(const std::string& path);

}  // namespace vtt
