// Node free spaces: obstacle polygons, their inflation into polyhedra, the
// polygon arrangement and the enclosed subspaces it bounds.
#pragma once

#include "vtt/truss.hpp"

#include <iosfwd>
#include <set>
#include <vector>

namespace vtt {

struct Plane {
  Vec3 n = Vec3::UnitZ();  // unit normal
  double d = 0.0;          // n . x = d

  double eval(const Vec3& p) const { return n.dot(p) - d; }
  Plane flipped() const { return {-n, -d}; }
};

enum class PolygonKind { Obstacle, Singular, Workspace };

struct PolygonTag {
  PolygonKind kind = PolygonKind::Obstacle;
  NodeId apex = -1;  // neighbor whose member sweeps the polygon
  Member member;     // blocking member
  int face = 0;      // 0 for the raw polygon, 1..5 for inflated faces
  int wall = -1;     // workspace face index
};

// Planar face given by vertices plus optional rays. When rays are present,
// rays.front() is attached at vertices.front() and rays.back() at
// vertices.back(); the face is the convex region swept beyond the vertex
// chain. For faces of an inflated obstacle the normal points out of the
// obstacle volume.
struct BoundedPolygon {
  std::vector<Vec3> vertices;
  std::vector<Vec3> rays;
  Plane plane;
  PolygonTag tag;
  Vec3 apex = Vec3::Zero();  // position of the sweeping neighbor (obstacle polygons)
};

// Raw obstacle polygons of `node`: one per (neighbor u, member m) where m
// shares no endpoint with (node, u) and touches no ignored node. Neighbors in
// `ignore` are skipped as well since their members move with the group.
std::vector<BoundedPolygon> obstacle_polygons(const TrussGraph& g, NodeId node,
                                              const std::set<NodeId>& ignore = {});

// Member endpoints are pushed outward along the member axis before the
// construction so the end faces keep at least lambda/2 from the member tips.
// Returns the five faces of the inflated obstacle. Throws GeometryError when
// a ray is nearly parallel to the member plane direction.
std::vector<BoundedPolygon> inflate_polygon(const BoundedPolygon& p, double lambda);

// Faces of the inflated obstacle exactly as constructed from the unextended
// member endpoints.
std::vector<BoundedPolygon> inflate_polygon_plain(const BoundedPolygon& p, double lambda);

// The plane through all neighbors of `node` when they are coplanar within
// `tol`; empty otherwise or when a neighbor is ignored.
std::vector<BoundedPolygon> singular_planes(const TrussGraph& g, NodeId node, const Box& workspace,
                                            const std::set<NodeId>& ignore = {}, double tol = 1e-6);

// Convex piece of an input polygon after intersection.
struct Fragment {
  std::vector<Vec3> v;
  std::vector<int> edge_plane;  // supporting plane id of edge v[i] -> v[i+1]
  int plane = -1;               // id of the fragment's own plane
  Vec3 normal = Vec3::UnitZ();  // input polygon normal
  int owner = -1;               // solid index, kThin, or kWall
  int source = -1;              // index into ObstacleSet::inputs
  Vec3 centroid = Vec3::Zero();
  double area = 0.0;
};

constexpr int kThin = -1;
constexpr int kWall = -2;

// Elementary piece of a fragment edge together with every fragment whose
// boundary covers it.
struct EdgeSpan {
  Vec3 p0 = Vec3::Zero();
  Vec3 p1 = Vec3::Zero();
  std::vector<int> frags;
};

struct ObstacleSet {
  Box workspace;
  std::vector<BoundedPolygon> inputs;  // includes the six workspace faces
  std::vector<Plane> planes;
  std::vector<Fragment> fragments;
  std::vector<EdgeSpan> spans;
  std::vector<std::vector<int>> frag_spans;  // spans lying on each fragment's boundary
  int solids = 0;
};

// Inflated faces sharing (apex, member) form one convex obstacle solid; raw
// and singular polygons are two-sided sheets. Rays are materialized against
// the workspace box, then every face is trimmed by the other solids and split
// along the sheets it crosses.
ObstacleSet polygon_intersection(const std::vector<BoundedPolygon>& raw, const Box& workspace);

// A fragment seen from one of its sides (+1 along its normal, -1 against).
struct OrientedFace {
  int frag = -1;
  int side = 1;
  auto operator<=>(const OrientedFace&) const = default;
};

struct BoundaryFace {
  std::vector<Vec3> v;
  Vec3 free_normal = Vec3::UnitZ();  // points into the subspace
  double offset = 0.0;               // plane offset along free_normal
  PolygonTag tag;
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
};

struct EnclosedSubspace {
  std::vector<BoundaryFace> boundary;
  std::vector<OrientedFace> faces;
  Vec3 seed = Vec3::Zero();
  Box extent;
  double volume = 0.0;
  int shells = 0;
};

// Algorithm of the innermost-neighbor walk: the connected set of oriented
// faces reachable from `start`.
std::vector<OrientedFace> shell_search(const ObstacleSet& obs, OrientedFace start);

// All subspaces of an obstacle set, built by repeatedly walking from unused
// faces. Hole shells are attached to the smallest outer shell holding them.
std::vector<EnclosedSubspace> assemble_subspaces(const ObstacleSet& obs);

// Subspace bounded by `start`, seen from the side of `from_point`.
EnclosedSubspace boundary_search(const ObstacleSet& obs, int start, const Vec3& from_point);

// Signed-crossing ray test; false on or near the boundary.
bool contains(const EnclosedSubspace& space, const Vec3& q);

// True when both endpoints are contained and the segment crosses no face.
bool segment_inside(const EnclosedSubspace& space, const Vec3& a, const Vec3& b);

// Every boundary edge is matched by exactly one other boundary face edge.
bool watertight(const EnclosedSubspace& space);

struct FreeSpaceQuery {
  std::set<NodeId> ignore;
  bool include_singular = true;
};

struct NodeFreeSpace {
  ObstacleSet obs;
  std::vector<EnclosedSubspace> regions;  // above-ground subspaces
  int current = -1;                       // index of the subspace holding the node, or -1
  // Obstacles left out because the sweeping neighbor lies within half the
  // inflation of the member's line, where the inflated shape is undefined.
  std::vector<PolygonTag> skipped;

  int locate(const Vec3& q) const;
};

// Inflated obstacles when cfg.inflate > 0, raw sheets otherwise. Skipped
// obstacles leave collisions to the full constraint check.
NodeFreeSpace compute_free_space(const TrussGraph& g, NodeId node, const PlannerConfig& cfg,
                                 const FreeSpaceQuery& query = {});

// Subspaces above the ground, the one holding the node first.
std::vector<EnclosedSubspace> enumerate_subspaces(const TrussGraph& g, NodeId node,
                                                  const PlannerConfig& cfg);

// Wavefront OBJ, one object per subspace, faces fan-triangulated.
void write_obj(std::ostream& os, const std::vector<EnclosedSubspace>& spaces);

double polygon_area(const std::vector<Vec3>& v, const Vec3& n);

}  // namespace vtt
