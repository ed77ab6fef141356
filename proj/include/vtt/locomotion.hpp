// Rolling locomotion over the convex boundary of the truss.
#pragma once

#include "vtt/geometry_planner.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace vtt {

struct HullFacet {
  std::vector<NodeId> cycle;  // counterclockwise seen from outside
  Vec3 normal = Vec3::UnitZ();  // outward unit normal
  double offset = 0;            // normal . x = offset on the facet plane
};

struct TrussPolyhedron {
  std::vector<HullFacet> facets;
  std::set<Member> hull_edges;
  std::map<Member, std::pair<int, int>> incidence;  // facet indices, ascending
  std::optional<int> support;                       // facet resting on the ground

  // Index of the facet whose cycle holds exactly these nodes, if any.
  std::optional<int> find_facet(std::vector<NodeId> nodes) const;
};

// Nodes closer than this to a facet plane join that facet's cycle.
inline constexpr double kHullPlaneTol = 1e-6;

// Convex hull of the node positions with coplanar triangles merged into
// polygonal facets. Interior nodes belong to no facet. The support facet is
// the one whose nodes are all support nodes. Throws GeometryError on fewer
// than four nodes or when all nodes are coplanar.
TrussPolyhedron build_polyhedron(const TrussGraph& g, const PlannerConfig& cfg);

struct RollCommand {
  NodeId a = 0;
  NodeId b = 0;
};

struct RollTargets {
  int target_facet = -1;
  double angle = 0;  // tilt of the target facet's inward normal from +z
  Vec3 axis = Vec3::UnitX();  // unit, through the pivot node
  NodeId pivot = 0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  std::map<NodeId, Vec3> goals;  // every node except the two edge nodes; empty for a no-op
};

// Tilt of a facet's inward unit normal from +z: the roll angle that brings
// the facet down onto the ground.
double roll_angle(const Vec3& inward_normal);

// Rotation about the command edge that lays the other facet of that edge on
// the ground. Throws InputError when the edge is not on the support facet.
RollTargets roll_targets(const TrussGraph& g, const TrussPolyhedron& poly, const RollCommand& cmd,
                         double angle_tol = 1e-9);

// Rolls over the command edge: the edge nodes stay fixed and every other node
// is moved to its rotated position by plan_multi under the full constraint set.
PlanResult plan_roll(const TrussGraph& g, const RollCommand& cmd, const PlannerConfig& cfg, Rng& rng);

// Support polygon (ids, counterclockwise) and ground projection of the center
// of mass for one state.
struct SupportFrame {
  std::vector<NodeId> polygon;
  Vec2 com = Vec2::Zero();
};

SupportFrame support_frame(const TrussGraph& g, const PlannerConfig& cfg);

}  // namespace vtt
