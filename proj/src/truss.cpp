#include "vtt/truss.hpp"

#include "vtt/geometry.hpp"
#include "vtt/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vtt {

void PlannerConfig::check() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw InputError(std::string("config: ") + what);
  };
  need(len_min > 0 && len_max > len_min, "require 0 < len_min < len_max");
  need(clearance > 0, "clearance must be positive");
  need(angle_min > 0, "angle_min must be positive");
  need(manip_min > 0 && manip_min < 1, "manip_min must lie in (0,1)");
  need(inflate >= 0, "inflate must be non-negative");
  need((workspace.max.array() > workspace.min.array()).all(), "workspace box is empty");
  need(rrt_step > 0 && check_resolution > 0, "rrt_step and check_resolution must be positive");
  need(sample_min_dist > 0, "sample_min_dist must be positive");
  need(split_step > 0 && split_max >= split_step, "require 0 < split_step <= split_max");
  need(ground_tol > 0, "ground_tol must be positive");
}

const Vec3& TrussGraph::pos(NodeId v) const {
  auto it = nodes.find(v);
  if (it == nodes.end()) throw InputError("unknown node " + std::to_string(v));
  return it->second;
}

std::vector<NodeId> TrussGraph::neighbors(NodeId v) const {
  std::vector<NodeId> out;
  for (const Member& m : members) {
    if (m.touches(v)) out.push_back(m.other(v));
  }
  return out;
}

std::vector<Member> TrussGraph::incident(NodeId v) const {
  std::vector<Member> out;
  for (const Member& m : members) {
    if (m.touches(v)) out.push_back(m);
  }
  return out;
}

int TrussGraph::degree(NodeId v) const {
  int d = 0;
  for (const Member& m : members) d += m.touches(v) ? 1 : 0;
  return d;
}

NodeId TrussGraph::fresh_id() const { return nodes.empty() ? 0 : nodes.rbegin()->first + 1; }

NodeId split_node(TrussGraph& g, NodeId v, const std::set<NodeId>& moved_neighbors,
                  const Vec3& new_pos, std::optional<NodeId> new_id) {
  const NodeId w = new_id.value_or(g.fresh_id());
  if (g.has_node(w)) throw InputError("split target id already in use");
  for (NodeId x : moved_neighbors) {
    if (!g.has_member(v, x)) throw InputError("split part names a non-incident member");
  }
  g.nodes[w] = new_pos;
  for (NodeId x : moved_neighbors) {
    g.members.erase(Member(v, x));
    g.members.insert(Member(w, x));
  }
  return w;
}

void merge_nodes(TrussGraph& g, NodeId v, NodeId w) {
  if (v == w || !g.has_node(v) || !g.has_node(w)) throw InputError("bad merge pair");
  if (g.has_member(v, w)) throw GeometryError("cannot merge nodes joined by a member");
  const std::vector<NodeId> moved = g.neighbors(w);
  for (NodeId x : moved) {
    if (g.has_member(v, x)) throw GeometryError("merge would duplicate a member");
  }
  for (NodeId x : moved) {
    g.members.erase(Member(w, x));
    g.members.insert(Member(v, x));
  }
  g.nodes.erase(w);
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Degree: return "degree";
    case ViolationKind::Length: return "length";
    case ViolationKind::Clearance: return "clearance";
    case ViolationKind::Angle: return "angle";
    case ViolationKind::SupportCount: return "support-count";
    case ViolationKind::Stability: return "stability";
    case ViolationKind::BelowGround: return "below-ground";
    case ViolationKind::Manipulability: return "manipulability";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const Violation& v : violations) os << to_string(v.kind) << ": " << v.detail << "\n";
  return os.str();
}

namespace {

std::string fmt_member(const Member& m) {
  return "(" + std::to_string(m.a) + "," + std::to_string(m.b) + ")";
}

// Support polygon of the current support nodes, or nullopt when degenerate.
std::optional<std::vector<Vec2>> support_polygon(const TrussGraph& g, const std::set<NodeId>& sup) {
  if (sup.size() < 3) return std::nullopt;
  std::vector<Vec2> pts;
  for (NodeId v : sup) pts.push_back(g.pos(v).head<2>());
  try {
    return convex_hull_2d(pts).points;
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

}  // namespace

ValidationReport validate_truss(const TrussGraph& g, const PlannerConfig& cfg,
                                const ValidationOptions& opt) {
  ValidationReport rep;
  auto add = [&](ViolationKind k, std::string detail, std::vector<NodeId> ids) {
    rep.violations.push_back({k, std::move(detail), std::move(ids)});
    return opt.first_only;
  };

  for (const auto& [v, p] : g.nodes) {
    if (p.z() < g.ground_height - cfg.ground_tol) {
      if (add(ViolationKind::BelowGround, "node " + std::to_string(v) + " below ground", {v}))
        return rep;
    }
  }
  for (const auto& [v, p] : g.nodes) {
    const int d = g.degree(v);
    if (d < 3) {
      if (add(ViolationKind::Degree, "node " + std::to_string(v) + " has degree " + std::to_string(d),
              {v}))
        return rep;
    }
  }
  for (const Member& m : g.members) {
    const double len = g.length(m);
    if (len < cfg.len_min || len > cfg.len_max) {
      if (add(ViolationKind::Length, "member " + fmt_member(m) + " length " + std::to_string(len),
              {m.a, m.b}))
        return rep;
    }
  }
  for (const auto& [v, p] : g.nodes) {
    const std::vector<NodeId> nb = g.neighbors(v);
    for (size_t i = 0; i < nb.size(); ++i) {
      for (size_t j = i + 1; j < nb.size(); ++j) {
        const Vec3 a = g.pos(nb[i]) - p;
        const Vec3 b = g.pos(nb[j]) - p;
        const double na = a.norm();
        const double nbn = b.norm();
        const double ang =
            (na <= 1e-12 || nbn <= 1e-12) ? 0.0 : std::acos(std::clamp(a.dot(b) / (na * nbn), -1.0, 1.0));
        if (ang < cfg.angle_min) {
          if (add(ViolationKind::Angle,
                  "angle at " + std::to_string(v) + " between " + std::to_string(nb[i]) + "," +
                      std::to_string(nb[j]) + " is " + std::to_string(ang),
                  {v, nb[i], nb[j]}))
            return rep;
        }
      }
    }
  }
  const std::vector<Member> ms(g.members.begin(), g.members.end());
  for (size_t i = 0; i < ms.size(); ++i) {
    for (size_t j = i + 1; j < ms.size(); ++j) {
      if (ms[i].shares_node(ms[j])) continue;
      const double d = segment_distance(g.pos(ms[i].a), g.pos(ms[i].b), g.pos(ms[j].a), g.pos(ms[j].b));
      if (d < cfg.clearance) {
        if (add(ViolationKind::Clearance,
                "members " + fmt_member(ms[i]) + " and " + fmt_member(ms[j]) + " at distance " +
                    std::to_string(d),
                {ms[i].a, ms[i].b, ms[j].a, ms[j].b}))
          return rep;
      }
    }
  }
  const std::set<NodeId> sup = support_nodes(g, cfg);
  if (sup.size() < 3) {
    if (add(ViolationKind::SupportCount, std::to_string(sup.size()) + " support nodes", {})) return rep;
  } else if (!g.members.empty()) {
    const auto poly = support_polygon(g, sup);
    const Vec3 com = center_of_mass(g);
    if (!poly || !strictly_inside_convex(*poly, com.head<2>(), cfg.stability_margin)) {
      if (add(ViolationKind::Stability, "center of mass outside support polygon", {})) return rep;
    }
  }
  if (!opt.controlled.empty()) {
    double mu = 0.0;
    try {
      mu = manipulability(g, opt.controlled, cfg.pinv_rcond);
    } catch (const std::exception&) {
      mu = 0.0;
    }
    if (mu < cfg.manip_min) {
      add(ViolationKind::Manipulability, "manipulability " + std::to_string(mu), opt.controlled);
    }
  }
  return rep;
}

bool collision_free(const TrussGraph& g, double clearance) {
  const std::vector<Member> ms(g.members.begin(), g.members.end());
  for (size_t i = 0; i < ms.size(); ++i) {
    for (size_t j = i + 1; j < ms.size(); ++j) {
      if (ms[i].shares_node(ms[j])) continue;
      if (segment_distance(g.pos(ms[i].a), g.pos(ms[i].b), g.pos(ms[j].a), g.pos(ms[j].b)) < clearance)
        return false;
    }
  }
  return true;
}

double incident_angle(const TrussGraph& g, NodeId apex, NodeId n1, NodeId n2) {
  if (!g.has_member(apex, n1) || !g.has_member(apex, n2)) {
    throw InputError("incident_angle needs two members at the apex");
  }
  const Vec3 a = g.pos(n1) - g.pos(apex);
  const Vec3 b = g.pos(n2) - g.pos(apex);
  const double na = a.norm();
  const double nb = b.norm();
  if (na <= 1e-12 || nb <= 1e-12) throw GeometryError("zero-length member in angle");
  return std::acos(std::clamp(a.dot(b) / (na * nb), -1.0, 1.0));
}

Vec3 center_of_mass(const TrussGraph& g) {
  if (g.members.empty()) throw InputError("center_of_mass of a truss without members");
  Vec3 acc = Vec3::Zero();
  double mass = 0.0;
  for (const Member& m : g.members) {
    const double len = g.length(m);
    acc += len * 0.5 * (g.pos(m.a) + g.pos(m.b));
    mass += len;
  }
  for (const auto& [v, w] : g.node_mass) {
    if (!g.has_node(v)) continue;
    acc += w * g.pos(v);
    mass += w;
  }
  if (mass <= 0) throw GeometryError("truss has zero total mass");
  return acc / mass;
}

std::set<NodeId> support_nodes(const TrussGraph& g, const PlannerConfig& cfg) {
  std::set<NodeId> out;
  for (const auto& [v, p] : g.nodes) {
    if (std::abs(p.z() - g.ground_height) <= cfg.ground_tol) out.insert(v);
  }
  return out;
}

bool stability_check(const TrussGraph& g, const PlannerConfig& cfg) {
  const std::set<NodeId> sup = support_nodes(g, cfg);
  const auto poly = support_polygon(g, sup);
  if (!poly || g.members.empty()) return false;
  return strictly_inside_convex(*poly, center_of_mass(g).head<2>(), cfg.stability_margin);
}

Telemetry measure(const TrussGraph& g, const PlannerConfig& cfg, const std::vector<NodeId>& moving) {
  Telemetry t;
  t.len_min = std::numeric_limits<double>::infinity();
  t.len_max = 0.0;
  std::set<NodeId> mv(moving.begin(), moving.end());
  for (const Member& m : g.members) {
    if (!mv.count(m.a) && !mv.count(m.b)) continue;
    const double len = g.length(m);
    t.len_min = std::min(t.len_min, len);
    t.len_max = std::max(t.len_max, len);
  }
  if (t.len_max == 0.0) t.len_min = 0.0;
  t.angle_min = M_PI;
  for (const auto& [v, p] : g.nodes) {
    const std::vector<NodeId> nb = g.neighbors(v);
    for (size_t i = 0; i < nb.size(); ++i) {
      for (size_t j = i + 1; j < nb.size(); ++j) {
        t.angle_min = std::min(t.angle_min, incident_angle(g, v, nb[i], nb[j]));
      }
    }
  }
  t.manip = 1.0;
  if (!moving.empty()) {
    try {
      t.manip = manipulability(g, moving, cfg.pinv_rcond);
    } catch (const std::exception&) {
      t.manip = 0.0;
    }
  }
  if (!g.members.empty()) {
    const Vec3 com = center_of_mass(g);
    t.com_x = com.x();
    t.com_y = com.y();
  }
  const std::set<NodeId> sup = support_nodes(g, cfg);
  t.support.assign(sup.begin(), sup.end());
  return t;
}

}  // namespace vtt
