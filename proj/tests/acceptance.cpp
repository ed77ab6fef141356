// Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails.
#include "support.hpp"
#include "vtt/bench.hpp"
#include "vtt/geometry.hpp"
#include "vtt/kinematics.hpp"
#include "vtt/locomotion.hpp"
#include "vtt/topology_planner.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace vtt;
using namespace vtt::test;

namespace {

constexpr std::uint64_t kSeed = 20240601;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Gate {
 public:
  void line(const std::string& id, const std::string& what, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << what << ": " << detail << std::endl;
    failed_ += !pass;
  }
  int failed() const { return failed_; }

 private:
  int failed_ = 0;
};

// Every trajectory produced here goes through the independent replay.
struct ReplayLedger {
  int trajectories = 0;
  int violations = 0;

  bool check(const TrussGraph& g, const PlannerConfig& cfg, const Trajectory& t) {
    const ReplayReport r = replay(g, cfg, t);
    ++trajectories;
    violations += static_cast<int>(r.issues.size());
    return r.ok();
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Support facet edges of a state as ordered pairs.
std::vector<RollCommand> support_edges(const TrussGraph& g, const PlannerConfig& cfg) {
  const TrussPolyhedron poly = build_polyhedron(g, cfg);
  std::vector<RollCommand> out;
  if (!poly.support) return out;
  const auto& cyc = poly.facets[*poly.support].cycle;
  for (size_t i = 0; i < cyc.size(); ++i) out.push_back({cyc[i], cyc[(i + 1) % cyc.size()]});
  return out;
}

bool stable_everywhere(const TrussGraph& g, const PlannerConfig& cfg, const Trajectory& t) {
  bool ok = stability_check(g, cfg);
  for_each_substate(g, t, cfg.check_resolution, [&](int, const TrussGraph& h) {
    ok = ok && stability_check(h, cfg);
    return ok;
  });
  return ok;
}

void subspace_counts(Gate& gate) {
  struct Case {
    const char* scene;
    NodeId node;
    int expected;
  };
  for (const Case c : {Case{"split_cube", 0, 33}, Case{"topology1", 5, 53}}) {
    const Scene s = scene(c.scene);
    const auto t0 = Clock::now();
    const int n = static_cast<int>(enumerate_subspaces(s.graph, c.node, s.config).size());
    const double dt = seconds_since(t0);
    std::ostringstream d;
    d << n << " subspaces (expected " << c.expected << ") in " << fmt("%.2f", dt) << " s";
    gate.line("1", std::string("subspace count ") + c.scene + " node " + std::to_string(c.node),
              n == c.expected && dt < 60.0, d.str());
  }
}

void cube_to_tower(Gate& gate, ReplayLedger& ledger) {
  const Scene s = scene("cube_tower");
  const auto tasks = load_tasks(task_file("cube_tower"));
  int ok = 0;
  double total = 0;
  double lmin = 1e9, lmax = 0, amin = 1e9, mumin = 1e9;
  for (int i = 0; i < 100; ++i) {
    Rng rng(trial_seed(kSeed, i));
    const auto t0 = Clock::now();
    const PlanResult r = plan_multi(s.graph, tasks, s.config, rng);
    total += seconds_since(t0);
    if (!r.ok()) continue;
    const bool clean = ledger.check(s.graph, s.config, r.traj);
    for (const TelemetryRow& row : collect_telemetry(s.graph, r.traj, s.config)) {
      lmin = std::min(lmin, row.t.len_min);
      lmax = std::max(lmax, row.t.len_max);
      amin = std::min(amin, row.t.angle_min);
      mumin = std::min(mumin, row.t.manip);
    }
    ok += clean;
  }
  const double mean = total / 100.0;
  gate.line("2", "cube to tower success rate", ok >= 95, std::to_string(ok) + "/100 (floor 95)");
  gate.line("2", "cube to tower mean plan time", mean < 60.0, fmt("%.3f s (limit 60 s)", mean));
  const bool floors = lmin >= 1.0 - 1e-9 && lmax <= 3.5 + 1e-9 && amin >= 0.3 - 1e-9 && mumin >= 0.1 - 1e-9;
  std::ostringstream d;
  d << "L_min " << fmt("%.4f", lmin) << " >= 1.0, L_max " << fmt("%.4f", lmax) << " <= 3.5, theta_min "
    << fmt("%.4f", amin) << " >= 0.3, mu_min " << fmt("%.4f", mumin) << " >= 0.1";
  gate.line("2", "cube to tower telemetry floors at every sub-state", floors && ok > 0, d.str());
}

// Successful topology plans with exactly `pairs` split/merge pairs.
void topology_scenario(Gate& gate, ReplayLedger& ledger, const std::string& id, const std::string& name, int pairs,
                       int trials, int floor) {
  const Scene s = scene(name);
  const auto tasks = load_tasks(task_file(name));
  int ok = 0, other = 0, failed = 0;
  double total = 0;
  for (int i = 0; i < trials; ++i) {
    Rng rng(trial_seed(kSeed, i));
    TopologyStats st;
    const auto t0 = Clock::now();
    const PlanResult r = plan_topology(s.graph, tasks[0].node, tasks[0].goal, s.config, rng, &st);
    total += seconds_since(t0);
    if (!r.ok()) {
      ++failed;
      continue;
    }
    const bool clean = ledger.check(s.graph, s.config, r.traj);
    const bool reached = (final_state(s.graph, r.traj).pos(tasks[0].node) - tasks[0].goal).norm() < 1e-9;
    const bool shape = r.traj.count(RecordKind::Split) == pairs && r.traj.count(RecordKind::Merge) == pairs &&
                       static_cast<int>(st.path.size()) == pairs + 1;
    if (clean && reached && shape) {
      ++ok;
    } else {
      ++other;
    }
  }
  std::ostringstream d;
  d << ok << "/" << trials << " with exactly " << pairs << " pair(s) across " << pairs + 1 << " subspaces (floor "
    << floor << "); " << other << " solved otherwise, " << failed << " failed; mean " << fmt("%.1f", total / trials)
    << " s";
  gate.line(id, name + " split/merge plan", ok >= floor, d.str());
}

void locomotion(Gate& gate, ReplayLedger& ledger) {
  for (const std::string name : {"locomotion7", "octahedron"}) {
    const Scene s = scene(name);
    const auto edges = support_edges(s.graph, s.config);
    Rng pick(kSeed);
    int ok = 0;
    double total = 0;
    for (int i = 0; i < 100; ++i) {
      RollCommand cmd = edges[std::uniform_int_distribution<size_t>(0, edges.size() - 1)(pick)];
      if (std::uniform_int_distribution<int>(0, 1)(pick)) std::swap(cmd.a, cmd.b);
      Rng rng(trial_seed(kSeed, i));
      const auto t0 = Clock::now();
      const PlanResult r = plan_roll(s.graph, cmd, s.config, rng);
      total += seconds_since(t0);
      if (!r.ok()) continue;
      const bool clean = ledger.check(s.graph, s.config, r.traj);
      ok += clean && stable_everywhere(s.graph, s.config, r.traj);
    }
    const double mean = total / 100.0;
    gate.line("5", name + " roll success with stability at every sub-state", ok == 100,
              std::to_string(ok) + "/100, mean " + fmt("%.3f s", mean));
    if (name == "octahedron") gate.line("5", "octahedron roll mean plan time", mean < 30.0, fmt("%.3f s (limit 30 s)", mean));
  }
}

void freespace_soundness(Gate& gate) {
  int worst = 0;
  long long points = 0;
  std::ostringstream notes;
  for (const std::string& name : bundled_scenes()) {
    const Scene s = scene(name);
    for (const auto& [v, q0] : s.graph.nodes) {
      const NodeFreeSpace fs = compute_free_space(s.graph, v, s.config);
      Rng rng(trial_seed(kSeed, v));
      int contained = 0, bad = 0;
      for (int tries = 0; contained < 10000 && tries < 400000; ++tries) {
        const Vec3 q = random_in(rng, s.config.workspace);
        if (fs.locate(q) < 0) continue;
        ++contained;
        if (brute_clearance(s.graph, v, q) < s.config.clearance) ++bad;
      }
      points += contained;
      worst += bad;
      if (contained < 10000 || bad > 0 || !fs.skipped.empty()) {
        notes << " " << name << ":" << v << " contained " << contained << " violations " << bad << " skipped "
              << fs.skipped.size() << ";";
      }
    }
  }
  std::ostringstream d;
  d << points << " contained points, " << worst << " clearance violations" << notes.str();
  gate.line("6", "free-space soundness on every bundled scene and node", worst == 0, d.str());
}

void kinematic_identity(Gate& gate) {
  Rng rng(kSeed);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Scene s = scene(bundled_scenes()[i % bundled_scenes().size()]);
    TrussGraph g = s.graph;
    for (auto& [v, q] : g.nodes) q += random_vec(rng, -0.1, 0.1);
    std::vector<NodeId> ids;
    for (const auto& [v, q] : g.nodes) ids.push_back(v);
    const NodeId a = ids[std::uniform_int_distribution<size_t>(0, ids.size() - 1)(rng)];
    std::vector<NodeId> controlled{a};
    if (i % 2) controlled.push_back(g.neighbors(a).front());
    const KinematicsSystem sys = build_system(g, controlled);
    const JacobianPair jp = jacobians(sys);
    Eigen::VectorXd pdot(sys.matA.cols());
    for (int k = 0; k < pdot.size(); ++k) pdot(k) = uniform(rng, -1, 1);
    worst = std::max(worst, (sys.matB * (jp.j_ba * pdot) - sys.matA * pdot).norm());
  }
  gate.line("6", "kinematic identity over 100 random configurations", worst <= 1e-9,
            fmt("max residual %.3e (limit 1e-9)", worst));
}

void hull_oracles(Gate& gate) {
  Rng rng(kSeed);
  int bad2 = 0, bad3 = 0;
  for (int t = 0; t < 500; ++t) {
    const int n = std::uniform_int_distribution<int>(3, 12)(rng);
    std::vector<Vec2> p;
    for (int i = 0; i < n; ++i) p.emplace_back(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const Hull2 h = convex_hull_2d(p);
    bad2 += std::set<int>(h.index.begin(), h.index.end()) != brute_hull_2d(p);
  }
  for (int t = 0; t < 500; ++t) {
    const int n = std::uniform_int_distribution<int>(4, 12)(rng);
    std::vector<Vec3> p;
    TrussGraph g;
    for (int i = 0; i < n; ++i) {
      p.push_back(random_vec(rng));
      g.nodes[i] = p.back();
    }
    const TrussPolyhedron poly = build_polyhedron(g, {});
    std::set<std::set<int>> facets;
    for (const HullFacet& f : poly.facets) facets.insert(std::set<int>(f.cycle.begin(), f.cycle.end()));
    bad3 += facets != brute_hull_3d(p).facets;
  }
  gate.line("6", "convex_hull_2d against brute force on 500 sets", bad2 == 0, std::to_string(bad2) + " mismatches");
  gate.line("6", "build_polyhedron against brute force on 500 sets", bad3 == 0, std::to_string(bad3) + " mismatches");
}

void segment_oracle(Gate& gate) {
  Rng rng(kSeed);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p1 = random_vec(rng), p2 = random_vec(rng), q1 = random_vec(rng), q2 = random_vec(rng);
    worst = std::max(worst, std::abs(segment_distance(p1, p2, q1, q2) - grid_segment_distance(p1, p2, q1, q2)));
  }
  gate.line("6", "segment distance against the grid oracle on 1000 pairs", worst <= 2e-3,
            fmt("max deviation %.3e (limit 2e-3)", worst));
}

void roll_rigidity(Gate& gate) {
  Rng rng(kSeed);
  double dist_err = 0, ground_err = 0;
  int done = 0;
  while (done < 100) {
    const int n = std::uniform_int_distribution<int>(4, 12)(rng);
    TrussGraph g;
    for (int i = 0; i < n; ++i) g.nodes[i] = random_vec(rng);
    const TrussPolyhedron raw = build_polyhedron(g, {});
    // Rest a random facet on the ground plane z = 0.
    const HullFacet& base = raw.facets[std::uniform_int_distribution<size_t>(0, raw.facets.size() - 1)(rng)];
    const Eigen::Matrix3d r = Eigen::Quaterniond::FromTwoVectors(base.normal, -Vec3::UnitZ()).toRotationMatrix();
    const double lift = -(r * g.pos(base.cycle[0])).z();
    for (auto& [v, q] : g.nodes) q = r * q + Vec3(0, 0, lift);
    PlannerConfig cfg;
    cfg.ground_tol = 1e-9;
    const TrussPolyhedron poly = build_polyhedron(g, cfg);
    if (!poly.support) continue;
    const auto& cyc = poly.facets[*poly.support].cycle;
    const size_t k = std::uniform_int_distribution<size_t>(0, cyc.size() - 1)(rng);
    const RollTargets rt = roll_targets(g, poly, {cyc[k], cyc[(k + 1) % cyc.size()]});
    TrussGraph end = g;
    for (const auto& [v, q] : rt.goals) end.set_pos(v, q);
    for (const auto& [a, qa] : g.nodes) {
      for (const auto& [b, qb] : g.nodes) {
        dist_err = std::max(dist_err, std::abs((end.pos(a) - end.pos(b)).norm() - (qa - qb).norm()));
      }
    }
    for (NodeId v : poly.facets[rt.target_facet].cycle) ground_err = std::max(ground_err, std::abs(end.pos(v).z()));
    ++done;
  }
  gate.line("6", "roll rigidity on 100 random hulls", dist_err <= 1e-9, fmt("max distance change %.3e", dist_err));
  gate.line("6", "roll target facet lands on the ground", ground_err <= 1e-9, fmt("max height %.3e", ground_err));
}

void determinism(Gate& gate) {
  struct Bench {
    std::string label;
    int trials;
    TrialFn fn;
  };
  const Scene tower = scene("cube_tower");
  const auto tower_tasks = load_tasks(task_file("cube_tower"));
  const Scene topo = scene("topology1");
  const auto topo_task = load_tasks(task_file("topology1")).front();
  const Scene oct = scene("octahedron");
  const auto oct_edges = support_edges(oct.graph, oct.config);
  const Scene loc = scene("locomotion7");
  const auto loc_edges = support_edges(loc.graph, loc.config);
  auto roll = [](const Scene& s, std::vector<RollCommand> edges) {
    return [&s, edges](Rng& rng) {
      const RollCommand cmd = edges[std::uniform_int_distribution<size_t>(0, edges.size() - 1)(rng)];
      return plan_roll(s.graph, cmd, s.config, rng);
    };
  };
  const std::vector<Bench> benches{
      {"cube_tower geometry", 5, [&](Rng& rng) { return plan_multi(tower.graph, tower_tasks, tower.config, rng); }},
      {"topology1 topology", 2,
       [&](Rng& rng) { return plan_topology(topo.graph, topo_task.node, topo_task.goal, topo.config, rng); }},
      {"octahedron locomotion", 5, roll(oct, oct_edges)},
      {"locomotion7 locomotion", 5, roll(loc, loc_edges)},
  };
  for (const Bench& b : benches) {
    const BenchReport x = run_bench(b.trials, kSeed, b.fn);
    const BenchReport y = run_bench(b.trials, kSeed, b.fn);
    bool same = x.trials.size() == y.trials.size();
    for (size_t i = 0; same && i < x.trials.size(); ++i) {
      same = x.trials[i].success == y.trials[i].success && x.trials[i].digest == y.trials[i].digest &&
             x.trials[i].seed == y.trials[i].seed;
    }
    gate.line("7", "bench determinism " + b.label, same,
              std::to_string(b.trials) + " trials, success rate " + fmt("%.2f", x.success_rate));
  }
}

}  // namespace

int main() {
  Gate gate;
  ReplayLedger ledger;
  const auto t0 = Clock::now();
  subspace_counts(gate);
  cube_to_tower(gate, ledger);
  topology_scenario(gate, ledger, "3", "topology1", 1, 20, 18);
  topology_scenario(gate, ledger, "4", "topology2", 2, 20, 10);
  locomotion(gate, ledger);
  freespace_soundness(gate);
  kinematic_identity(gate);
  hull_oracles(gate);
  segment_oracle(gate);
  roll_rigidity(gate);
  gate.line("6", "replay gate over every trajectory planned here", ledger.violations == 0,
            std::to_string(ledger.trajectories) + " trajectories, " + std::to_string(ledger.violations) +
                " violations");
  determinism(gate);
  std::cout << (gate.failed() ? "FAILED " : "ALL PASSED ") << "(" << gate.failed() << " failing lines, "
            << fmt("%.0f", seconds_since(t0)) << " s)" << std::endl;
  return gate.failed() ? 1 : 0;
}
