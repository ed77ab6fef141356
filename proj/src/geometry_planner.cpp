#include "vtt/geometry_planner.hpp"

#include "vtt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vtt {

NodeGroup make_group(const TrussGraph& g, const std::vector<NodeId>& nodes, const PlannerConfig& cfg) {
  if (nodes.empty() || nodes.size() > 2) throw InputError("a group holds one or two nodes");
  NodeGroup grp;
  grp.nodes = nodes;
  for (size_t i = 0; i < nodes.size(); ++i) {
    FreeSpaceQuery q;
    if (nodes.size() == 2) q.ignore.insert(nodes[1 - i]);
    NodeFreeSpace fs = compute_free_space(g, nodes[i], cfg, q);
    if (fs.current < 0) {
      throw GeometryError("node " + std::to_string(nodes[i]) + " lies in no free subspace");
    }
    grp.spaces.push_back(std::move(fs.regions[fs.current]));
  }
  if (nodes.size() == 2 && g.has_member(nodes[0], nodes[1])) grp.connecting = Member(nodes[0], nodes[1]);
  return grp;
}

bool motion_valid(const TrussGraph& g, NodeId moving, const Vec3& to, std::optional<NodeId> partner,
                  const PlannerConfig& cfg, const EnclosedSubspace& space,
                  const std::vector<NodeId>& controlled) {
  const Vec3 from = g.pos(moving);
  const ValidationOptions opt{controlled, true};
  if ((to - from).norm() <= 1e-12) return validate_truss(g, cfg, opt).ok();
  if (!segment_inside(space, from, to)) return false;

  for (NodeId u : g.neighbors(moving)) {
    const Vec3& pu = g.pos(u);
    const bool connecting = partner && u == *partner;
    for (const Member& m : g.members) {
      if (m.touches(moving) || m.touches(u)) continue;
      if (!connecting && !(partner && m.touches(*partner))) continue;
      if (segment_triangle_distance(g.pos(m.a), g.pos(m.b), from, to, pu) < cfg.clearance) return false;
    }
  }

  TrussGraph h = g;
  const int n = substeps(from, to, cfg.check_resolution);
  for (int k = 1; k <= n; ++k) {
    h.set_pos(moving, k == n ? to : Vec3(from + (to - from) * (double(k) / n)));
    if (!validate_truss(h, cfg, opt).ok()) return false;
  }
  return true;
}

bool motion_valid(const TrussGraph& g, NodeId moving, const Vec3& from, const Vec3& to,
                  std::optional<NodeId> partner, const PlannerConfig& cfg) {
  TrussGraph h = g;
  h.set_pos(moving, from);
  std::vector<NodeId> nodes{moving};
  if (partner) nodes.push_back(*partner);
  NodeGroup grp;
  try {
    grp = make_group(h, nodes, cfg);
  } catch (const GeometryError&) {
    return false;
  }
  return motion_valid(h, moving, to, partner, cfg, grp.spaces[0], nodes);
}

std::optional<Vec3> sample_in(const EnclosedSubspace& space, double floor_z, Rng& rng, int tries) {
  Vec3 lo = space.extent.min;
  const Vec3 hi = space.extent.max;
  lo.z() = std::max(lo.z(), floor_z);
  if ((hi.array() <= lo.array()).any()) return std::nullopt;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < tries; ++i) {
    Vec3 q;
    for (int k = 0; k < 3; ++k) q[k] = lo[k] + (hi[k] - lo[k]) * u01(rng);
    if (contains(space, q)) return q;
  }
  return std::nullopt;
}

namespace {

using State = std::vector<Vec3>;

double dist2(const State& a, const State& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squaredNorm();
  return s;
}

// Goal-biased RRT in the product space of the group's subspaces. Each tree
// edge is executed node by node in group order.
PlanResult rrt(const TrussGraph& g, const NodeGroup& grp, const State& goals, const PlannerConfig& cfg,
               Rng& rng) {
  const size_t k = grp.nodes.size();
  State start;
  for (NodeId v : grp.nodes) start.push_back(g.pos(v));
  if (dist2(start, goals) <= 1e-24) return {};

  if (!validate_truss(g, cfg, {grp.nodes, true}).ok()) {
    return PlanResult::fail(PlanFailure::InvalidStart, "start state violates a constraint");
  }
  for (size_t i = 0; i < k; ++i) {
    if ((goals[i] - start[i]).norm() > 1e-12 && !contains(grp.spaces[i], goals[i])) {
      return PlanResult::fail(PlanFailure::DifferentSubspace,
                              "goal of node " + std::to_string(grp.nodes[i]) + " is outside its subspace");
    }
  }
  {
    TrussGraph h = g;
    for (size_t i = 0; i < k; ++i) h.set_pos(grp.nodes[i], goals[i]);
    const ValidationReport rep = validate_truss(h, cfg, {grp.nodes, true});
    if (!rep.ok()) return PlanResult::fail(PlanFailure::GoalInvalid, "goal state: " + rep.summary());
  }

  auto edge_ok = [&](const State& a, const State& b) {
    TrussGraph h = g;
    for (size_t i = 0; i < k; ++i) h.set_pos(grp.nodes[i], a[i]);
    for (size_t i = 0; i < k; ++i) {
      std::optional<NodeId> partner;
      if (k == 2) partner = grp.nodes[1 - i];
      if (!motion_valid(h, grp.nodes[i], b[i], partner, cfg, grp.spaces[i], grp.nodes)) return false;
      h.set_pos(grp.nodes[i], b[i]);
    }
    return true;
  };

  double diag = 0;
  for (const EnclosedSubspace& s : grp.spaces) diag = std::max(diag, s.extent.diagonal());
  const int budget = std::max(cfg.sample_min_count, static_cast<int>(std::ceil(diag / cfg.rrt_step)));
  const int iters = cfg.rrt_iter_factor * budget;

  std::vector<State> tree{start};
  std::vector<int> parent{-1};
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int goal_node = -1;

  for (int it = 0; it < iters && goal_node < 0; ++it) {
    State target(k);
    const bool all_goal = u01(rng) < cfg.goal_bias;
    for (size_t i = 0; i < k; ++i) {
      if (all_goal || u01(rng) < cfg.goal_bias) {
        target[i] = goals[i];
      } else {
        auto q = sample_in(grp.spaces[i], g.ground_height, rng);
        target[i] = q ? *q : goals[i];
      }
    }
    int near = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < tree.size(); ++t) {
      const double d = dist2(tree[t], target);
      if (d < best) {
        best = d;
        near = static_cast<int>(t);
      }
    }
    const double len = std::sqrt(best);
    if (len <= 1e-12) continue;
    State next(k);
    const double scale = len > cfg.rrt_step ? cfg.rrt_step / len : 1.0;
    for (size_t i = 0; i < k; ++i) next[i] = tree[near][i] + (target[i] - tree[near][i]) * scale;
    if (!edge_ok(tree[near], next)) continue;
    tree.push_back(next);
    parent.push_back(near);
    const int added = static_cast<int>(tree.size()) - 1;
    if (dist2(next, goals) <= 1e-24) {
      goal_node = added;
    } else if (std::sqrt(dist2(next, goals)) <= cfg.rrt_step && edge_ok(next, goals)) {
      tree.push_back(goals);
      parent.push_back(added);
      goal_node = static_cast<int>(tree.size()) - 1;
    }
  }
  if (goal_node < 0) {
    if (k == 2) {
      return PlanResult::fail(PlanFailure::PairDeadlock,
                              "pair " + std::to_string(grp.nodes[0]) + "," + std::to_string(grp.nodes[1]) +
                                  " found no path in " + std::to_string(iters) + " iterations");
    }
    return PlanResult::fail(PlanFailure::SamplingExhausted,
                            "node " + std::to_string(grp.nodes[0]) + " found no path in " +
                                std::to_string(iters) + " iterations");
  }

  std::vector<int> chain;
  for (int t = goal_node; t >= 0; t = parent[t]) chain.push_back(t);
  std::reverse(chain.begin(), chain.end());
  PlanResult res;
  for (size_t c = 1; c < chain.size(); ++c) {
    const State& a = tree[chain[c - 1]];
    const State& b = tree[chain[c]];
    for (size_t i = 0; i < k; ++i) {
      if ((b[i] - a[i]).norm() <= 1e-12) continue;
      Record r;
      r.kind = RecordKind::Move;
      r.node = grp.nodes[i];
      r.from = a[i];
      r.to = b[i];
      r.group = grp.nodes;
      res.traj.records.push_back(std::move(r));
    }
  }
  return res;
}

}  // namespace

PlanResult plan_single(const TrussGraph& g, NodeId node, const Vec3& goal, const PlannerConfig& cfg, Rng& rng) {
  if ((g.pos(node) - goal).norm() <= 1e-12) return {};
  NodeGroup grp;
  try {
    grp = make_group(g, {node}, cfg);
  } catch (const GeometryError& e) {
    return PlanResult::fail(PlanFailure::InvalidStart, e.what());
  }
  return rrt(g, grp, {goal}, cfg, rng);
}

PlanResult plan_pair(const TrussGraph& g, const NodeGroup& group, const std::vector<Vec3>& goals,
                     const PlannerConfig& cfg, Rng& rng) {
  if (goals.size() != group.nodes.size()) throw InputError("one goal per group node expected");
  return rrt(g, group, goals, cfg, rng);
}

PlanResult plan_multi(const TrussGraph& g, const std::vector<NodeTask>& tasks, const PlannerConfig& cfg, Rng& rng) {
  if (tasks.empty()) return {};
  if (tasks.size() == 1) return plan_single(g, tasks[0].node, tasks[0].goal, cfg, rng);

  PlanResult last = PlanResult::fail(PlanFailure::SamplingExhausted, "no grouping attempted");
  for (int attempt = 0; attempt < cfg.grouping_retries; ++attempt) {
    std::vector<NodeTask> order = tasks;
    std::shuffle(order.begin(), order.end(), rng);
    TrussGraph h = g;
    PlanResult acc;
    bool ok = true;
    for (size_t i = 0; i < order.size() && ok; i += 2) {
      std::vector<NodeId> nodes{order[i].node};
      State goals{order[i].goal};
      if (i + 1 < order.size()) {
        nodes.push_back(order[i + 1].node);
        goals.push_back(order[i + 1].goal);
      }
      PlanResult part;
      try {
        part = rrt(h, make_group(h, nodes, cfg), goals, cfg, rng);
      } catch (const GeometryError& e) {
        part = PlanResult::fail(PlanFailure::InvalidStart, e.what());
      }
      if (!part.ok()) {
        last = part;
        ok = false;
        break;
      }
      for (const Record& r : part.traj.records) apply_record(h, r);
      acc.traj.append(part.traj);
    }
    if (ok) return acc;
  }
  return last;
}

}  // namespace vtt
