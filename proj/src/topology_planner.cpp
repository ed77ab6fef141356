#include "vtt/topology_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace vtt {

std::vector<Partition> enumerate_partitions(const TrussGraph& g, NodeId node) {
  std::vector<NodeId> nb = g.neighbors(node);
  std::sort(nb.begin(), nb.end());
  const int d = static_cast<int>(nb.size());
  std::vector<Partition> out;
  if (d < 6) return out;
  // nb[0] always stays, so masks run over the remaining d - 1 neighbors.
  for (unsigned mask = 1; mask < (1u << (d - 1)); ++mask) {
    const int moved = __builtin_popcount(mask);
    if (moved < 3 || d - moved < 3) continue;
    Partition p;
    p.keep.push_back(nb[0]);
    for (int i = 1; i < d; ++i) ((mask >> (i - 1)) & 1u ? p.move : p.keep).push_back(nb[i]);
    out.push_back(std::move(p));
  }
  return out;
}

SplitDirection split_direction(const TrussGraph& g, NodeId node, Rng& rng) {
  const std::vector<NodeId> nb = g.neighbors(node);
  if (nb.empty()) throw InputError("split direction needs at least one neighbor");
  const Vec3 q = g.pos(node);
  Vec3 sum = Vec3::Zero();
  for (NodeId u : nb) {
    const Vec3 d = q - g.pos(u);
    const double n = d.norm();
    if (n > 1e-12) sum += d / n;
  }
  SplitDirection out;
  if (sum.norm() >= 1e-8) {
    out.dir = sum.normalized();
    return out;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 r;
  do {
    r = Vec3(gauss(rng), gauss(rng), gauss(rng));
  } while (r.norm() < 1e-6);
  out.dir = r.normalized();
  out.fallback = true;
  return out;
}

NodeId apply_split(TrussGraph& g, NodeId node, const SplitAction& action) {
  g.set_pos(node, action.pos_keep);
  return split_node(g, node, std::set<NodeId>(action.part.move.begin(), action.part.move.end()), action.pos_move);
}

std::optional<SplitAction> compute_split_action(const TrussGraph& g, NodeId node, const Vec3& q,
                                                const Partition& part, const PlannerConfig& cfg, Rng& rng) {
  TrussGraph h = g;
  h.set_pos(node, q);
  if (!validate_truss(h, cfg, {{node}, true}).ok()) return std::nullopt;
  const NodeId w = split_node(h, node, std::set<NodeId>(part.move.begin(), part.move.end()), q);
  const SplitDirection sd = split_direction(h, node, rng);
  for (int k = 1; k * cfg.split_step <= cfg.split_max + 1e-12; ++k) {
    const Vec3 p = q + k * cfg.split_step * sd.dir;
    h.set_pos(w, p);
    if (!collision_free(h, cfg.clearance)) continue;
    if (!validate_truss(h, cfg, {{node, w}, true}).ok()) return std::nullopt;
    return SplitAction{part, q, p, sd.dir};
  }
  return std::nullopt;
}

int sample_number(const EnclosedSubspace& space, double d) {
  return std::max(1, static_cast<int>(std::ceil(space.extent.diagonal() / d - 1e-12)));
}

namespace {

std::set<Partition> partitions_of(const std::vector<SplitAction>& acts) {
  std::set<Partition> s;
  for (const SplitAction& a : acts) s.insert(a.part);
  return s;
}

std::vector<SplitAction> valid_actions(const TrussGraph& g, NodeId node, const Vec3& q,
                                       const std::vector<Partition>& parts, const PlannerConfig& cfg, Rng& rng) {
  std::vector<SplitAction> out;
  for (const Partition& p : parts) {
    if (auto a = compute_split_action(g, node, q, p, cfg, rng)) out.push_back(std::move(*a));
  }
  return out;
}

}  // namespace

void offer_sample(SampleSet& s, int& n_max, const Vec3& q, std::vector<SplitAction> valid, size_t n_parts,
                  double d_min) {
  std::vector<size_t> close;
  for (size_t i = 0; i < s.samples.size(); ++i) {
    if ((s.samples[i] - q).norm() <= d_min) close.push_back(i);
  }
  if (static_cast<int>(s.samples.size()) >= n_max) return;

  bool add = false;
  std::vector<size_t> drop;
  if (close.empty()) {
    add = true;
  } else if (valid.size() == n_parts) {
    drop = close;
    add = true;
  } else {
    const std::set<Partition> mine = partitions_of(valid);
    for (size_t i : close) {
      const std::set<Partition> theirs = partitions_of(s.actions[i]);
      const bool subset = theirs.size() < mine.size() &&
                          std::includes(mine.begin(), mine.end(), theirs.begin(), theirs.end());
      if (subset) {
        drop.push_back(i);
        --n_max;
        add = true;
      } else if (!std::includes(theirs.begin(), theirs.end(), mine.begin(), mine.end())) {
        add = true;
      }
    }
    if (add) ++n_max;
  }
  for (auto it = drop.rbegin(); it != drop.rend(); ++it) {
    s.samples.erase(s.samples.begin() + *it);
    s.actions.erase(s.actions.begin() + *it);
  }
  if (add) {
    s.samples.push_back(q);
    s.actions.push_back(std::move(valid));
  }
}

SampleSet generate_samples(const EnclosedSubspace& space, const TrussGraph& g, NodeId node,
                           const std::vector<Partition>& parts, const PlannerConfig& cfg, Rng& rng) {
  SampleSet s;
  int n_max = std::max(cfg.sample_min_count, sample_number(space, cfg.sample_min_dist));
  const int iters = cfg.sample_iter_factor * n_max;
  for (int k = 0; k < iters; ++k) {
    ++s.iterations;
    const auto q = sample_in(space, g.ground_height, rng);
    if (!q) continue;
    offer_sample(s, n_max, *q, valid_actions(g, node, *q, parts, cfg, rng), parts.size(), cfg.sample_min_dist);
  }
  s.n_max = n_max;
  return s;
}

namespace {

struct Transition {
  int from_region = -1;
  int from_sample = -1;
  int to_region = -1;
  int to_sample = -1;
  SplitAction at_from;
  SplitAction at_to;
};

using PairKey = std::tuple<int, int, int, int, Partition>;

class TransitionSearch {
 public:
  TransitionSearch(const TrussGraph& g, NodeId node, const PlannerConfig& cfg, const std::vector<SampleSet>& sets)
      : g_(g), node_(node), cfg_(cfg), sets_(sets) {}

  std::set<PairKey> blocked;

  // Unit-cost search from `start` to `goal`; returns the transitions along
  // the path, or nothing when the goal stays unreached.
  std::optional<std::vector<Transition>> run(int start, int goal, std::vector<int>& path) {
    const int n = static_cast<int>(sets_.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(n, inf);
    std::vector<int> parent(n, -1);
    std::vector<Transition> via(n);
    std::set<int> open{start, goal};
    std::set<int> closed;
    cost[start] = 0;
    while (open.count(goal)) {
      int cur = -1;
      for (int c : open) {
        if (cur < 0 || cost[c] < cost[cur]) cur = c;
      }
      open.erase(cur);
      closed.insert(cur);
      if (cost[cur] == inf) break;
      if (cur == goal) break;
      for (int c = 0; c < n; ++c) {
        if (c == cur || closed.count(c)) continue;
        std::optional<Transition> t = first_transition(cur, c);
        if (!t) continue;
        const double step = 1.0;
        if (!open.count(c) || cost[cur] + step < cost[c]) {
          open.insert(c);
          cost[c] = cost[cur] + step;
          parent[c] = cur;
          via[c] = *t;
        }
      }
    }
    if (cost[goal] == inf) return std::nullopt;
    std::vector<Transition> out;
    path.clear();
    for (int c = goal; c != start; c = parent[c]) {
      out.push_back(via[c]);
      path.push_back(c);
    }
    path.push_back(start);
    std::reverse(out.begin(), out.end());
    std::reverse(path.begin(), path.end());
    return out;
  }

 private:
  struct Halves {
    EnclosedSubspace keep;
    EnclosedSubspace move;
  };

  const TrussGraph& g_;
  NodeId node_;
  const PlannerConfig& cfg_;
  const std::vector<SampleSet>& sets_;
  std::map<std::tuple<int, int, Partition>, std::optional<Halves>> halves_;

  // Subspaces of both halves right after splitting at a stored sample.
  const std::optional<Halves>& halves(int region, int sample, const SplitAction& a) {
    auto key = std::make_tuple(region, sample, a.part);
    auto it = halves_.find(key);
    if (it != halves_.end()) return it->second;
    std::optional<Halves> h;
    TrussGraph s = g_;
    const NodeId w = apply_split(s, node_, a);
    try {
      NodeGroup grp = make_group(s, {node_, w}, cfg_);
      h = Halves{std::move(grp.spaces[0]), std::move(grp.spaces[1])};
    } catch (const GeometryError&) {
    }
    return halves_.emplace(key, std::move(h)).first->second;
  }

  std::optional<Transition> first_transition(int from, int to) {
    const SampleSet& a = sets_[from];
    const SampleSet& b = sets_[to];
    for (size_t i = 0; i < a.samples.size(); ++i) {
      for (size_t j = 0; j < b.samples.size(); ++j) {
        for (const SplitAction& sa : a.actions[i]) {
          for (const SplitAction& sb : b.actions[j]) {
            if (sb.part != sa.part) continue;
            if (blocked.count({from, int(i), to, int(j), sa.part})) continue;
            const auto& h = halves(from, static_cast<int>(i), sa);
            if (!h || !contains(h->keep, sb.pos_keep) || !contains(h->move, sb.pos_move)) continue;
            return Transition{from, int(i), to, int(j), sa, sb};
          }
        }
      }
    }
    return std::nullopt;
  }
};

}  // namespace

PlanResult plan_topology(const TrussGraph& g, NodeId node, const Vec3& goal, const PlannerConfig& cfg, Rng& rng,
                         TopologyStats* stats) {
  TopologyStats local;
  TopologyStats& st = stats ? *stats : local;
  if (!validate_truss(g, cfg, {{node}, true}).ok()) {
    return PlanResult::fail(PlanFailure::InvalidStart, "start state violates a constraint");
  }
  const NodeFreeSpace fs = compute_free_space(g, node, cfg);
  st.subspaces = static_cast<int>(fs.regions.size());
  if (fs.current < 0) return PlanResult::fail(PlanFailure::InvalidStart, "node lies in no free subspace");
  const int start = fs.current;
  const int target = fs.locate(goal);
  if (target < 0) return PlanResult::fail(PlanFailure::GoalInvalid, "goal lies in no free subspace");
  {
    TrussGraph h = g;
    h.set_pos(node, goal);
    const ValidationReport rep = validate_truss(h, cfg, {{node}, true});
    if (!rep.ok()) return PlanResult::fail(PlanFailure::GoalInvalid, "goal state: " + rep.summary());
  }
  if (target == start) {
    st.path = {start};
    return plan_single(g, node, goal, cfg, rng);
  }

  const std::vector<Partition> parts = enumerate_partitions(g, node);
  if (parts.empty()) {
    return PlanResult::fail(PlanFailure::NoTransition, "node has fewer than six members and cannot split");
  }
  std::vector<SampleSet> sets;
  for (const EnclosedSubspace& sp : fs.regions) sets.push_back(generate_samples(sp, g, node, parts, cfg, rng));
  sets[start].samples.push_back(g.pos(node));
  sets[start].actions.push_back(valid_actions(g, node, g.pos(node), parts, cfg, rng));
  sets[target].samples.push_back(goal);
  sets[target].actions.push_back(valid_actions(g, node, goal, parts, cfg, rng));
  st.samples = 0;
  for (const SampleSet& s : sets) st.samples += static_cast<int>(s.samples.size());

  TransitionSearch search(g, node, cfg, sets);
  PlanResult last = PlanResult::fail(PlanFailure::NoTransition, "no split/merge transition reaches the goal subspace");
  for (int attempt = 0; attempt <= cfg.topology_replans; ++attempt) {
    st.replans = attempt;
    auto chain = search.run(start, target, st.path);
    if (!chain) {
      return attempt == 0 ? last : PlanResult::fail(PlanFailure::NoTransition,
                                                    "every discovered transition failed during pair planning; last: " +
                                                        last.reason);
    }
    TrussGraph h = g;
    PlanResult out;
    bool ok = true;
    for (const Transition& t : *chain) {
      const Vec3 q_split = sets[t.from_region].samples[t.from_sample];
      PlanResult reach = plan_single(h, node, q_split, cfg, rng);
      if (!reach.ok()) {
        last = reach;
        ok = false;
      } else {
        for (const Record& r : reach.traj.records) apply_record(h, r);
        out.traj.append(reach.traj);
        TrussGraph s = h;
        const NodeId w = apply_split(s, node, t.at_from);
        Record split;
        split.kind = RecordKind::Split;
        split.node = node;
        split.other = w;
        split.from = t.at_from.pos_keep;
        split.to = t.at_from.pos_move;
        split.group = {node, w};
        split.partition = t.at_from.part.move;
        PlanResult pair;
        try {
          pair = plan_pair(s, make_group(s, {node, w}, cfg), {t.at_to.pos_keep, t.at_to.pos_move}, cfg, rng);
        } catch (const GeometryError& e) {
          pair = PlanResult::fail(PlanFailure::PairDeadlock, e.what());
        }
        if (!pair.ok()) {
          last = pair;
          ok = false;
        } else {
          out.traj.records.push_back(split);
          for (const Record& r : pair.traj.records) apply_record(s, r);
          out.traj.append(pair.traj);
          Record merge;
          merge.kind = RecordKind::Merge;
          merge.node = node;
          merge.other = w;
          merge.from = t.at_to.pos_move;
          merge.to = t.at_to.pos_keep;
          merge.group = {node};
          merge_nodes(s, node, w);
          out.traj.records.push_back(merge);
          h = s;
        }
      }
      if (!ok) {
        search.blocked.insert({t.from_region, t.from_sample, t.to_region, t.to_sample, t.at_from.part});
        break;
      }
    }
    if (!ok) continue;
    PlanResult fin = plan_single(h, node, goal, cfg, rng);
    if (!fin.ok()) {
      last = fin;
      const Transition& t = chain->back();
      search.blocked.insert({t.from_region, t.from_sample, t.to_region, t.to_sample, t.at_from.part});
      continue;
    }
    out.traj.append(fin.traj);
    return out;
  }
  return last;
}

}  // namespace vtt
