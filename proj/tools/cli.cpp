#include "cli.hpp"

#include "vtt/bench.hpp"
#include "vtt/freespace.hpp"
#include "vtt/io.hpp"
#include "vtt/locomotion.hpp"
#include "vtt/replay.hpp"
#include "vtt/topology_planner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace vtt::cli {
namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::uint64_t seed = 1;
  std::vector<std::string> overrides;
  std::string export_mesh;
  std::string out;
  bool telemetry = false;
  bool json_out = false;

  std::string scene;
  std::string node;
  std::string goal;
  std::string task;
  std::string traj;
  std::string edge_a;
  std::string edge_b;
  std::string mode;
  int trials = 10;
};

// A bare name is also looked up among the bundled scenes.
std::string resolve_scene(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::exists(name)) return name;
  for (const std::string& cand : {name, name + ".json"}) {
    const fs::path p = fs::path(VTT_SCENE_DIR) / cand;
    if (fs::exists(p)) return p.string();
  }
  return name;
}

Scene load(const Options& o) {
  PlannerConfig base;
  if (const char* path = std::getenv(kConfigEnv); path && *path) base = load_config(path, base);
  Scene s = load_scene(resolve_scene(o.scene), base);
  for (const std::string& kv : o.overrides) apply_override(s.config, kv);
  s.config.check();
  return s;
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw InputError("cannot write " + o.out);
  f << text << "\n";
}

int report_failure(const PlanResult& r, std::ostream& err) {
  err << "planning failed (" << to_string(r.failure) << "): " << r.reason << "\n";
  return kFailure;
}

std::string trajectory_text(const Scene& s, const Options& o, const Trajectory& t) {
  TrajectoryHeader h{scene_hash(s), s.config, o.seed};
  std::vector<TelemetryRow> rows;
  if (o.telemetry) rows = collect_telemetry(s.graph, t, s.config);
  return trajectory_to_json(h, t, o.telemetry ? &rows : nullptr);
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Scene s = load(o);
  const ValidationReport rep = validate_truss(s.graph, s.config);
  if (o.json_out) {
    json j;
    j["scene"] = s.name;
    j["ok"] = rep.ok();
    j["violations"] = json::array();
    for (const Violation& v : rep.violations) {
      j["violations"].push_back({{"kind", to_string(v.kind)}, {"detail", v.detail}, {"nodes", v.nodes}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << s.name << ": " << (rep.ok() ? "valid" : rep.summary()) << "\n";
  }
  return rep.ok() ? kOk : kFailure;
}

int cmd_free_space(const Options& o, std::ostream& out) {
  const Scene s = load(o);
  const NodeId v = parse_node_id(o.node);
  if (!s.graph.has_node(v)) throw InputError("unknown node " + o.node);
  const NodeFreeSpace fs = compute_free_space(s.graph, v, s.config);
  if (!o.export_mesh.empty()) {
    std::ofstream f(o.export_mesh);
    if (!f) throw InputError("cannot write " + o.export_mesh);
    write_obj(f, fs.regions);
  }
  if (o.json_out) {
    json j;
    j["node"] = v;
    j["count"] = fs.regions.size();
    j["current"] = fs.current;
    j["subspaces"] = json::array();
    for (const EnclosedSubspace& r : fs.regions) {
      j["subspaces"].push_back({{"min", {r.extent.min.x(), r.extent.min.y(), r.extent.min.z()}},
                                {"max", {r.extent.max.x(), r.extent.max.y(), r.extent.max.z()}},
                                {"volume", r.volume},
                                {"faces", r.boundary.size()}});
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "node " << v << ": " << fs.regions.size() << " enclosed subspaces, current " << fs.current << "\n";
  for (size_t i = 0; i < fs.regions.size(); ++i) {
    const EnclosedSubspace& r = fs.regions[i];
    out << "  [" << i << "] min (" << r.extent.min.transpose() << ") max (" << r.extent.max.transpose()
        << ") volume " << r.volume << "\n";
  }
  return kOk;
}

int cmd_plan_geometry(const Options& o, std::ostream& out, std::ostream& err) {
  const Scene s = load(o);
  const std::vector<NodeTask> tasks = load_tasks(o.task);
  for (const NodeTask& t : tasks) {
    if (!s.graph.has_node(t.node)) throw InputError("task names unknown node " + std::to_string(t.node));
  }
  Rng rng(o.seed);
  const PlanResult r = plan_multi(s.graph, tasks, s.config, rng);
  if (!r.ok()) return report_failure(r, err);
  write_output(o, trajectory_text(s, o, r.traj), out);
  return kOk;
}

int cmd_plan_topology(const Options& o, std::ostream& out, std::ostream& err) {
  const Scene s = load(o);
  const NodeId v = parse_node_id(o.node);
  if (!s.graph.has_node(v)) throw InputError("unknown node " + o.node);
  const Vec3 goal = parse_vec3(o.goal);
  Rng rng(o.seed);
  TopologyStats stats;
  const PlanResult r = plan_topology(s.graph, v, goal, s.config, rng, &stats);
  if (!r.ok()) return report_failure(r, err);
  err << "subspaces " << stats.subspaces << ", samples " << stats.samples << ", splits "
      << r.traj.count(RecordKind::Split) << ", merges " << r.traj.count(RecordKind::Merge) << "\n";
  write_output(o, trajectory_text(s, o, r.traj), out);
  return kOk;
}

json frame_json(int step, const SupportFrame& f) {
  return {{"step", step}, {"support_polygon", f.polygon}, {"com", {f.com.x(), f.com.y()}}};
}

int cmd_plan_locomotion(const Options& o, std::ostream& out, std::ostream& err) {
  const Scene s = load(o);
  const RollCommand cmd{parse_node_id(o.edge_a), parse_node_id(o.edge_b)};
  if (!s.graph.has_node(cmd.a) || !s.graph.has_node(cmd.b)) throw InputError("unknown edge node");
  Rng rng(o.seed);
  const PlanResult r = plan_roll(s.graph, cmd, s.config, rng);
  if (!r.ok()) return report_failure(r, err);

  json j = json::parse(trajectory_text(s, o, r.traj));
  json frames = json::array();
  TrussGraph h = s.graph;
  frames.push_back(frame_json(-1, support_frame(h, s.config)));
  for (size_t i = 0; i < r.traj.records.size(); ++i) {
    apply_record(h, r.traj.records[i]);
    frames.push_back(frame_json(static_cast<int>(i), support_frame(h, s.config)));
  }
  j["frames"] = frames;
  write_output(o, j.dump(2), out);
  return kOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const Scene s = load(o);
  TrialFn fn;
  std::string mode = o.mode;
  if (mode.empty()) mode = o.task.empty() ? "locomotion" : "geometry";
  if (mode == "geometry" || mode == "topology") {
    if (o.task.empty()) throw InputError("bench " + mode + " needs a task file");
    const std::vector<NodeTask> tasks = load_tasks(o.task);
    if (mode == "geometry") {
      fn = [&s, tasks](Rng& rng) { return plan_multi(s.graph, tasks, s.config, rng); };
    } else {
      if (tasks.size() != 1) throw InputError("a topology task has exactly one goal");
      fn = [&s, t = tasks[0]](Rng& rng) { return plan_topology(s.graph, t.node, t.goal, s.config, rng); };
    }
  } else if (mode == "locomotion") {
    const TrussPolyhedron poly = build_polyhedron(s.graph, s.config);
    if (!poly.support) throw InputError("the truss has no support facet");
    const std::vector<NodeId> cycle = poly.facets[*poly.support].cycle;
    // Each trial rolls over a random edge of the support facet.
    fn = [&s, cycle](Rng& rng) {
      const size_t k = std::uniform_int_distribution<size_t>(0, cycle.size() - 1)(rng);
      return plan_roll(s.graph, {cycle[k], cycle[(k + 1) % cycle.size()]}, s.config, rng);
    };
  } else {
    throw InputError("unknown bench mode '" + mode + "'");
  }
  const BenchReport rep = run_bench(o.trials, o.seed, fn);
  out << (o.json_out ? bench_to_json(rep) : bench_to_text(rep)) << "\n";
  return rep.success_rate == 1.0 ? kOk : kFailure;
}

int cmd_replay(const Options& o, std::ostream& out) {
  const Scene s = load(o);
  TrajectoryHeader h;
  const Trajectory t = parse_trajectory(read_file(o.traj), &h);
  if (h.scene_hash != scene_hash(s)) {
    throw InputError("trajectory was planned for scene hash " + h.scene_hash + ", scene has " + scene_hash(s));
  }
  const ReplayReport rep = replay(s.graph, s.config, t);
  if (o.json_out) {
    json j;
    j["ok"] = rep.ok();
    j["substates"] = rep.substates;
    j["issues"] = json::array();
    for (const ReplayIssue& i : rep.issues) {
      j["issues"].push_back({{"record", i.record},
                             {"substate", i.substate},
                             {"kind", i.kind ? to_string(*i.kind) : "malformed"},
                             {"detail", i.detail},
                             {"nodes", i.nodes}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << rep.summary() << "\n";
  }
  return rep.ok() ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable topology truss planner"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--config-override", o.overrides, "Config assignment key=value (repeatable)");
  app.add_option("--export-mesh", o.export_mesh, "Write free-space boundaries as OBJ");
  app.add_option("--out,-o", o.out, "Write the trajectory here instead of stdout");
  app.add_flag("--telemetry", o.telemetry, "Attach per-sub-state telemetry rows");
  app.add_flag("--json", o.json_out, "Machine-readable output");

  auto* validate = app.add_subcommand("validate", "Check every constraint on a scene");
  validate->add_option("scene", o.scene)->required();

  auto* free_space = app.add_subcommand("free-space", "Enumerate a node's enclosed subspaces");
  free_space->add_option("scene", o.scene)->required();
  free_space->add_option("node", o.node)->required();

  auto* geometry = app.add_subcommand("plan-geometry", "Move nodes to goals without topology changes");
  geometry->add_option("scene", o.scene)->required();
  geometry->add_option("task", o.task)->required();

  auto* topology = app.add_subcommand("plan-topology", "Move one node using split and merge actions");
  topology->add_option("scene", o.scene)->required();
  topology->add_option("node", o.node)->required();
  topology->add_option("goal", o.goal)->required();

  auto* locomotion = app.add_subcommand("plan-locomotion", "Roll over an edge of the support polygon");
  locomotion->add_option("scene", o.scene)->required();
  locomotion->add_option("a", o.edge_a)->required();
  locomotion->add_option("b", o.edge_b)->required();

  auto* bench = app.add_subcommand("bench", "Repeat seeded planning trials");
  bench->add_option("scene", o.scene)->required();
  bench->add_option("task", o.task);
  bench->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  bench->add_option("--mode", o.mode, "geometry, topology or locomotion");

  auto* replay_cmd = app.add_subcommand("replay", "Re-validate a trajectory sub-state by sub-state");
  replay_cmd->add_option("scene", o.scene)->required();
  replay_cmd->add_option("trajectory", o.traj)->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (free_space->parsed()) return cmd_free_space(o, out);
    if (geometry->parsed()) return cmd_plan_geometry(o, out, err);
    if (topology->parsed()) return cmd_plan_topology(o, out, err);
    if (locomotion->parsed()) return cmd_plan_locomotion(o, out, err);
    if (bench->parsed()) return cmd_bench(o, out);
    if (replay_cmd->parsed()) return cmd_replay(o, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kFailure;
  }
  return kInputError;
}

}  // namespace vtt::cli
