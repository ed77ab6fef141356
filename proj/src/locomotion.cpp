#include "vtt/locomotion.hpp"

#include "vtt/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace vtt {

std::optional<int> TrussPolyhedron::find_facet(std::vector<NodeId> nodes) const {
  std::sort(nodes.begin(), nodes.end());
  for (size_t i = 0; i < facets.size(); ++i) {
    std::vector<NodeId> c = facets[i].cycle;
    std::sort(c.begin(), c.end());
    if (c == nodes) return static_cast<int>(i);
  }
  return std::nullopt;
}

namespace {

struct Tri {
  std::array<int, 3> v;  // point indices, counterclockwise from outside
  Vec3 n;
  double d;
  bool alive = true;
};

Tri make_tri(const std::vector<Vec3>& p, int a, int b, int c) {
  Tri t{{a, b, c}, (p[b] - p[a]).cross(p[c] - p[a]), 0.0};
  t.n.normalize();
  t.d = t.n.dot(p[a]);
  return t;
}

double side(const Tri& t, const Vec3& q) { return t.n.dot(q) - t.d; }

// Incremental hull over triangles. Points within kHullPlaneTol of the current
// hull are not inserted; they rejoin their facet when cycles are assembled.
std::vector<Tri> hull_triangles(const std::vector<Vec3>& p) {
  const int n = static_cast<int>(p.size());
  int i1 = 0;
  for (int i = 1; i < n; ++i) {
    if ((p[i] - p[0]).norm() > (p[i1] - p[0]).norm()) i1 = i;
  }
  const Vec3 dir = (p[i1] - p[0]).normalized();
  auto line_dist = [&](int i) { return (p[i] - p[0] - dir * dir.dot(p[i] - p[0])).norm(); };
  int i2 = 0;
  for (int i = 0; i < n; ++i) {
    if (line_dist(i) > line_dist(i2)) i2 = i;
  }
  if ((p[i1] - p[0]).norm() <= kHullPlaneTol || line_dist(i2) <= kHullPlaneTol) {
    throw GeometryError("node positions are collinear");
  }
  const Tri base = make_tri(p, 0, i1, i2);
  int i3 = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(side(base, p[i])) > std::abs(side(base, p[i3]))) i3 = i;
  }
  if (std::abs(side(base, p[i3])) <= kHullPlaneTol) throw GeometryError("node positions are coplanar");

  std::vector<Tri> tris;
  const std::array<int, 4> tet{0, i1, i2, i3};
  for (int skip = 0; skip < 4; ++skip) {
    std::array<int, 3> f{};
    for (int k = 0, j = 0; k < 4; ++k) {
      if (k != skip) f[j++] = tet[k];
    }
    Tri t = make_tri(p, f[0], f[1], f[2]);
    if (side(t, p[tet[skip]]) > 0) t = make_tri(p, f[0], f[2], f[1]);
    tris.push_back(t);
  }

  for (int q = 0; q < n; ++q) {
    if (q == 0 || q == i1 || q == i2 || q == i3) continue;
    std::set<std::pair<int, int>> directed;
    bool any = false;
    for (Tri& t : tris) {
      if (!t.alive || side(t, p[q]) <= kHullPlaneTol) continue;
      any = true;
      t.alive = false;
      for (int e = 0; e < 3; ++e) directed.insert({t.v[e], t.v[(e + 1) % 3]});
    }
    if (!any) continue;
    // Horizon: directed edges of visible triangles whose reverse is not visible.
    for (const auto& [a, b] : directed) {
      if (!directed.count({b, a})) tris.push_back(make_tri(p, a, b, q));
    }
    std::erase_if(tris, [](const Tri& t) { return !t.alive; });
  }
  return tris;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

TrussPolyhedron build_polyhedron(const TrussGraph& g, const PlannerConfig& cfg) {
  if (g.nodes.size() < 4) throw GeometryError("a polyhedron needs at least four nodes");
  std::vector<NodeId> ids;
  std::vector<Vec3> p;
  for (const auto& [id, q] : g.nodes) {
    ids.push_back(id);
    p.push_back(q);
  }
  const std::vector<Tri> tris = hull_triangles(p);

  // Merge neighboring triangles that lie in one plane.
  std::map<std::pair<int, int>, int> owner;
  for (size_t t = 0; t < tris.size(); ++t) {
    for (int e = 0; e < 3; ++e) owner[{tris[t].v[e], tris[t].v[(e + 1) % 3]}] = static_cast<int>(t);
  }
  std::vector<int> parent(tris.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (size_t t = 0; t < tris.size(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const int u = owner.at({tris[t].v[(e + 1) % 3], tris[t].v[e]});
      const bool flat = std::all_of(tris[u].v.begin(), tris[u].v.end(),
                                    [&](int i) { return std::abs(side(tris[t], p[i])) <= kHullPlaneTol; });
      if (flat) parent[find_root(parent, static_cast<int>(t))] = find_root(parent, u);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (size_t t = 0; t < tris.size(); ++t) groups[find_root(parent, static_cast<int>(t))].push_back(static_cast<int>(t));

  TrussPolyhedron poly;
  for (const auto& [root, members] : groups) {
    Vec3 n = Vec3::Zero();
    for (int t : members) {
      const Tri& tr = tris[t];
      n += (p[tr.v[1]] - p[tr.v[0]]).cross(p[tr.v[2]] - p[tr.v[0]]);
    }
    n.normalize();
    double d = 0;
    for (int t : members) d += n.dot(p[tris[t].v[0]]);
    d /= static_cast<double>(members.size());

    std::vector<int> on;
    for (size_t i = 0; i < p.size(); ++i) {
      if (std::abs(n.dot(p[i]) - d) <= kHullPlaneTol) on.push_back(static_cast<int>(i));
    }
    const Vec3 u = (std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(n).normalized();
    const Vec3 w = n.cross(u);  // u x w = n, so counterclockwise in (u, w) is counterclockwise from outside
    std::vector<Vec2> flat;
    for (int i : on) flat.emplace_back(u.dot(p[i]), w.dot(p[i]));
    const Hull2 h = convex_hull_2d(flat);

    HullFacet f;
    for (int k : h.index) f.cycle.push_back(ids[on[k]]);
    f.normal = n;
    f.offset = d;
    poly.facets.push_back(std::move(f));
  }

  std::map<Member, std::vector<int>> seen;
  for (size_t f = 0; f < poly.facets.size(); ++f) {
    const auto& c = poly.facets[f].cycle;
    for (size_t k = 0; k < c.size(); ++k) seen[Member(c[k], c[(k + 1) % c.size()])].push_back(static_cast<int>(f));
  }
  for (const auto& [m, fs] : seen) {
    if (fs.size() != 2) throw GeometryError("degenerate hull around nodes " + std::to_string(m.a) + "," + std::to_string(m.b));
    poly.hull_edges.insert(m);
    poly.incidence[m] = {std::min(fs[0], fs[1]), std::max(fs[0], fs[1])};
  }

  const std::set<NodeId> support = support_nodes(g, cfg);
  double lowest = 0;
  for (size_t f = 0; f < poly.facets.size(); ++f) {
    const auto& c = poly.facets[f].cycle;
    const bool grounded = std::all_of(c.begin(), c.end(), [&](NodeId v) { return support.count(v) != 0; });
    if (grounded && (!poly.support || poly.facets[f].normal.z() < lowest)) {
      poly.support = static_cast<int>(f);
      lowest = poly.facets[f].normal.z();
    }
  }
  return poly;
}

double roll_angle(const Vec3& inward_normal) { return std::acos(std::clamp(inward_normal.z(), -1.0, 1.0)); }

RollTargets roll_targets(const TrussGraph& g, const TrussPolyhedron& poly, const RollCommand& cmd,
                         double angle_tol) {
  if (!poly.support) throw InputError("the truss has no support facet");
  const Member e(cmd.a, cmd.b);
  auto it = poly.incidence.find(e);
  if (it == poly.incidence.end()) {
    throw InputError("(" + std::to_string(cmd.a) + "," + std::to_string(cmd.b) + ") is not a hull edge");
  }
  const int f = *poly.support;
  if (it->second.first != f && it->second.second != f) {
    throw InputError("(" + std::to_string(cmd.a) + "," + std::to_string(cmd.b) + ") is not on the support facet");
  }

  RollTargets out;
  out.target_facet = it->second.first == f ? it->second.second : it->second.first;
  const Vec3 inward = -poly.facets[out.target_facet].normal;
  out.angle = roll_angle(inward);
  out.pivot = cmd.a;
  out.axis = (g.pos(cmd.b) - g.pos(cmd.a)).normalized();
  if (out.angle <= angle_tol) return out;

  out.rotation = axis_angle(out.axis, out.angle);
  if ((out.rotation * inward).z() < (axis_angle(-out.axis, out.angle) * inward).z()) {
    out.axis = -out.axis;
    out.rotation = axis_angle(out.axis, out.angle);
  }
  const Vec3 qa = g.pos(cmd.a);
  for (const auto& [v, q] : g.nodes) {
    if (v == cmd.a || v == cmd.b) continue;
    out.goals[v] = out.rotation * (q - qa) + qa;
  }
  return out;
}

PlanResult plan_roll(const TrussGraph& g, const RollCommand& cmd, const PlannerConfig& cfg, Rng& rng) {
  if (!stability_check(g, cfg)) return PlanResult::fail(PlanFailure::InvalidStart, "start state is not stable");
  const TrussPolyhedron poly = build_polyhedron(g, cfg);
  const RollTargets rt = roll_targets(g, poly, cmd);
  std::vector<NodeTask> tasks;
  for (const auto& [v, q] : rt.goals) {
    if ((g.pos(v) - q).norm() > 1e-12) tasks.push_back({v, q});
  }
  return plan_multi(g, tasks, cfg, rng);
}

SupportFrame support_frame(const TrussGraph& g, const PlannerConfig& cfg) {
  SupportFrame fr;
  std::vector<NodeId> ids;
  std::vector<Vec2> pts;
  for (NodeId v : support_nodes(g, cfg)) {
    ids.push_back(v);
    pts.emplace_back(g.pos(v).x(), g.pos(v).y());
  }
  fr.polygon = ids;
  if (pts.size() >= 3) {
    try {
      fr.polygon.clear();
      for (int k : convex_hull_2d(pts).index) fr.polygon.push_back(ids[k]);
    } catch (const GeometryError&) {
      fr.polygon = ids;
    }
  }
  const Vec3 c = center_of_mass(g);
  fr.com = Vec2(c.x(), c.y());
  return fr;
}

}  // namespace vtt
