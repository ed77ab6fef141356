// RRT planning for one node or a pair of nodes inside their free spaces, and
// sequencing of multi-node tasks by random pairing.
#pragma once

#include "vtt/freespace.hpp"
#include "vtt/trajectory.hpp"

#include <optional>
#include <random>
#include <vector>

namespace vtt {

using Rng = std::mt19937_64;

// One or two nodes moved together. Each node's subspace is computed with the
// partner's members ignored.
struct NodeGroup {
  std::vector<NodeId> nodes;
  std::vector<EnclosedSubspace> spaces;
  std::optional<Member> connecting;
};

// Fails with GeometryError when a node is not inside any subspace.
NodeGroup make_group(const TrussGraph& g, const std::vector<NodeId>& nodes, const PlannerConfig& cfg);

// Checks one straight step of `moving` from its current position to `to`
// while every other node stays put:
//  - the segment stays inside `space`;
//  - the triangles swept by the moving members keep `clearance` from the
//    partner's members, and the connecting member's triangle keeps it from
//    every member it does not touch;
//  - every sub-state at check_resolution passes validate_truss with
//    `controlled` as the manipulability group.
bool motion_valid(const TrussGraph& g, NodeId moving, const Vec3& to, std::optional<NodeId> partner,
                  const PlannerConfig& cfg, const EnclosedSubspace& space,
                  const std::vector<NodeId>& controlled);

// Convenience form computing the group subspace itself.
bool motion_valid(const TrussGraph& g, NodeId moving, const Vec3& from, const Vec3& to,
                  std::optional<NodeId> partner, const PlannerConfig& cfg);

// Uniform rejection sample inside a subspace, at or above `floor_z`.
std::optional<Vec3> sample_in(const EnclosedSubspace& space, double floor_z, Rng& rng, int tries = 500);

PlanResult plan_single(const TrussGraph& g, NodeId node, const Vec3& goal, const PlannerConfig& cfg, Rng& rng);

PlanResult plan_pair(const TrussGraph& g, const NodeGroup& group, const std::vector<Vec3>& goals,
                     const PlannerConfig& cfg, Rng& rng);

struct NodeTask {
  NodeId node = -1;
  Vec3 goal = Vec3::Zero();
};

PlanResult plan_multi(const TrussGraph& g, const std::vector<NodeTask>& tasks, const PlannerConfig& cfg, Rng& rng);

}  // namespace vtt
