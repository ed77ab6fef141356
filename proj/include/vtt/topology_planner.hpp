// Split/merge planning that carries one node across enclosed subspaces its
// geometry motion cannot connect.
#pragma once

#include "vtt/geometry_planner.hpp"

#include <optional>
#include <vector>

namespace vtt {

// Two-way division of a node's members, named by neighbor ids. `keep` holds
// the smallest neighbor and stays on the original node; `move` goes to the
// new node.
struct Partition {
  std::vector<NodeId> keep;
  std::vector<NodeId> move;

  auto operator<=>(const Partition&) const = default;
};

// All partitions with at least three members on each side, ordered by the
// bitmask of `move` over the sorted neighbor list. Empty below degree 6.
std::vector<Partition> enumerate_partitions(const TrussGraph& g, NodeId node);

struct SplitDirection {
  Vec3 dir = Vec3::UnitZ();
  bool fallback = false;  // neighbors cancelled out; a random unit vector was drawn
};

// Normalized sum of unit vectors from each neighbor of `node` toward it.
SplitDirection split_direction(const TrussGraph& g, NodeId node, Rng& rng);

struct SplitAction {
  Partition part;
  Vec3 pos_keep = Vec3::Zero();
  Vec3 pos_move = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
};

// Places `node` at q, splits it by `part` and pushes the new node along the
// split direction in split_step increments up to split_max until the members
// clear each other; the first collision-free placement must then pass every
// constraint with both halves controlled.
std::optional<SplitAction> compute_split_action(const TrussGraph& g, NodeId node, const Vec3& q,
                                                const Partition& part, const PlannerConfig& cfg, Rng& rng);

// Applies a split to a copy of `g` where `node` sits at action.pos_keep and
// returns the new node id.
NodeId apply_split(TrussGraph& g, NodeId node, const SplitAction& action);

struct SampleSet {
  std::vector<Vec3> samples;
  std::vector<std::vector<SplitAction>> actions;  // per sample, in partition order
  int n_max = 0;                                   // final sample cap
  int iterations = 0;
};

// ceil(extent diagonal / d), at least 1.
int sample_number(const EnclosedSubspace& space, double d);

// Admission rule for one candidate sample q with its valid actions out of
// `n_parts` partitions. May evict close samples and adjusts the cap `n_max`.
void offer_sample(SampleSet& s, int& n_max, const Vec3& q, std::vector<SplitAction> valid, size_t n_parts,
                  double d_min);

// Samples spread over a subspace, each with its valid split actions. A new
// sample close to stored ones replaces them when it offers every partition,
// evicts those whose action set it strictly contains, and is added when it
// brings a partition none of them has.
SampleSet generate_samples(const EnclosedSubspace& space, const TrussGraph& g, NodeId node,
                           const std::vector<Partition>& parts, const PlannerConfig& cfg, Rng& rng);

struct TopologyStats {
  int subspaces = 0;
  int samples = 0;
  int replans = 0;
  std::vector<int> path;  // subspace indices from start to goal
};

// Same subspace: plain geometry plan. Otherwise a unit-cost search over
// subspaces whose edges are split/merge pairs found between samples, then
// the full trajectory of moves, splits, pair motions and merges.
PlanResult plan_topology(const TrussGraph& g, NodeId node, const Vec3& goal, const PlannerConfig& cfg, Rng& rng,
                         TopologyStats* stats = nullptr);

}  // namespace vtt
