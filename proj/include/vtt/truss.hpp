// Truss graph model, planner configuration and constraint checks.
#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vtt {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using NodeId = int;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unordered node pair, stored with a < b.
struct Member {
  NodeId a = 0;
  NodeId b = 0;

  Member() = default;
  Member(NodeId x, NodeId y) : a(x < y ? x : y), b(x < y ? y : x) {}

  bool touches(NodeId v) const { return a == v || b == v; }
  bool shares_node(const Member& o) const { return touches(o.a) || touches(o.b); }
  NodeId other(NodeId v) const { return a == v ? b : a; }

  auto operator<=>(const Member&) const = default;
};

struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool contains(const Vec3& p, double tol = 0.0) const {
    return (p.array() >= min.array() - tol).all() && (p.array() <= max.array() + tol).all();
  }
  double diagonal() const { return (max - min).norm(); }
};

struct PlannerConfig {
  double len_min = 1.0;
  double len_max = 5.0;
  double clearance = 0.05;
  double angle_min = 0.3;
  double manip_min = 0.1;
  double inflate = 0.1;
  Box workspace;
  double rrt_step = 0.25;
  double check_resolution = 0.05;
  double sample_min_dist = 1.0;
  double split_step = 0.025;
  double split_max = 0.1;
  double ground_tol = 1e-3;

  // Tuning knobs not named by the constraint model.
  double stability_margin = 1e-9;
  double pinv_rcond = 1e-10;
  double goal_bias = 0.05;
  int rrt_iter_factor = 50;
  int grouping_retries = 200;
  int sample_iter_factor = 5;
  int sample_min_count = 3;
  int topology_replans = 8;

  // Throws InputError when a field is out of range.
  void check() const;
};

class TrussGraph {
 public:
  std::map<NodeId, Vec3> nodes;
  std::set<Member> members;
  double ground_height = 0.0;
  // Optional lumped node masses added to the rod masses in center_of_mass.
  std::map<NodeId, double> node_mass;

  bool has_node(NodeId v) const { return nodes.count(v) != 0; }
  bool has_member(NodeId x, NodeId y) const { return members.count(Member(x, y)) != 0; }
  const Vec3& pos(NodeId v) const;
  void set_pos(NodeId v, const Vec3& p) { nodes.at(v) = p; }

  std::vector<NodeId> neighbors(NodeId v) const;
  std::vector<Member> incident(NodeId v) const;
  int degree(NodeId v) const;
  double length(const Member& m) const { return (pos(m.a) - pos(m.b)).norm(); }
  NodeId fresh_id() const;
};

// Moves the members (v, x) for x in `moved_neighbors` onto a new node placed
// at `new_pos`. Returns the id of the new node.
NodeId split_node(TrussGraph& g, NodeId v, const std::set<NodeId>& moved_neighbors,
                  const Vec3& new_pos, std::optional<NodeId> new_id = std::nullopt);

// Reattaches every member of `w` onto `v` and removes `w`. Throws
// GeometryError when both nodes share a neighbor.
void merge_nodes(TrussGraph& g, NodeId v, NodeId w);

enum class ViolationKind {
  Degree,
  Length,
  Clearance,
  Angle,
  SupportCount,
  Stability,
  BelowGround,
  Manipulability,
};

std::string to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string detail;
  std::vector<NodeId> nodes;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const;
  std::string summary() const;
};

struct ValidationOptions {
  // When set, the manipulability floor is checked with these nodes controlled.
  std::vector<NodeId> controlled;
  // Stop at the first violation; used on hot paths.
  bool first_only = false;
};

ValidationReport validate_truss(const TrussGraph& g, const PlannerConfig& cfg,
                                const ValidationOptions& opt = {});

// Only the clearance part of validate_truss.
bool collision_free(const TrussGraph& g, double clearance);

double incident_angle(const TrussGraph& g, NodeId apex, NodeId n1, NodeId n2);

Vec3 center_of_mass(const TrussGraph& g);

std::set<NodeId> support_nodes(const TrussGraph& g, const PlannerConfig& cfg);

bool stability_check(const TrussGraph& g, const PlannerConfig& cfg);

// Sub-state quantities recorded along trajectories.
struct Telemetry {
  double len_min = 0;
  double len_max = 0;
  double angle_min = 0;
  double manip = 1;
  double com_x = 0;
  double com_y = 0;
  std::vector<NodeId> support;
};

// Lengths are taken over the members of `moving`; the angle over all node
// pairs; manipulability with `moving` controlled.
Telemetry measure(const TrussGraph& g, const PlannerConfig& cfg, const std::vector<NodeId>& moving);

}  // namespace vtt
