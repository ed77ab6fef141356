#include "vtt/freespace.hpp"

#include "vtt/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace vtt {

namespace {

constexpr double kOnPlane = 1e-10;   // vertex classification against a plane
constexpr double kShrink = 1e-9;     // strict-interior margin for solid overlap
constexpr double kWeld = 1e-9;       // span endpoint welding
constexpr double kLineTol = 1e-8;    // collinearity of edges
constexpr double kTinyArea = 1e-14;  // dropped fragments
constexpr double kCoplanar = 1e-9;   // parallel plane test for sheet splits
constexpr double kAboveGround = 1e-6;  // subspaces must rise this far above the ground

Vec3 unit_perp(const Vec3& n) {
  const Vec3 a = std::abs(n.x()) < 0.6 ? Vec3::UnitX() : Vec3::UnitY();
  return n.cross(a).normalized();
}

// Convex polygon whose edge i runs from v[i] to v[i+1] on plane tag[i].
struct Poly {
  std::vector<Vec3> v;
  std::vector<int> tag;

  bool empty() const { return v.size() < 3; }
};

double area_of(const Poly& p, const Vec3& n) { return polygon_area(p.v, n); }

Vec3 centroid_of(const std::vector<Vec3>& v, const Vec3& n) {
  // Area-weighted centroid of a planar convex polygon.
  if (v.empty()) return Vec3::Zero();
  Vec3 c = Vec3::Zero();
  double a = 0.0;
  for (size_t i = 1; i + 1 < v.size(); ++i) {
    const double t = 0.5 * std::abs((v[i] - v[0]).cross(v[i + 1] - v[0]).dot(n));
    c += t * (v[0] + v[i] + v[i + 1]) / 3.0;
    a += t;
  }
  if (a <= 0) {
    for (const Vec3& p : v) c += p;
    return c / static_cast<double>(v.size());
  }
  return c / a;
}

// Keeps the part with n.x <= d (within kOnPlane). New edges take `id`.
Poly clip(const Poly& in, const Plane& h, int id) {
  Poly out;
  const size_t n = in.v.size();
  if (n < 3) return out;
  std::vector<double> dist(n);
  bool any_out = false;
  bool any_in = false;
  for (size_t i = 0; i < n; ++i) {
    dist[i] = h.eval(in.v[i]);
    any_out |= dist[i] > kOnPlane;
    any_in |= dist[i] < -kOnPlane;
  }
  if (!any_out) return in;
  if (!any_in) return out;
  for (size_t i = 0; i < n; ++i) {
    const size_t j = (i + 1) % n;
    const Vec3& p = in.v[i];
    const Vec3& q = in.v[j];
    const double dp = dist[i];
    const double dq = dist[j];
    if (dp <= kOnPlane) {
      if (dq <= kOnPlane) {
        out.v.push_back(p);
        out.tag.push_back(in.tag[i]);
      } else if (dp >= -kOnPlane) {
        out.v.push_back(p);
        out.tag.push_back(id);
      } else {
        out.v.push_back(p);
        out.tag.push_back(in.tag[i]);
        out.v.push_back(p + (q - p) * (dp / (dp - dq)));
        out.tag.push_back(id);
      }
    } else if (dq < -kOnPlane) {
      out.v.push_back(p + (q - p) * (dp / (dp - dq)));
      out.tag.push_back(in.tag[i]);
    }
  }
  // Drop zero-length edges; the surviving vertex keeps the outgoing tag.
  Poly clean;
  for (size_t i = 0; i < out.v.size(); ++i) {
    if (!clean.v.empty() && (out.v[i] - clean.v.back()).norm() <= 1e-12) {
      clean.tag.back() = out.tag[i];
      continue;
    }
    clean.v.push_back(out.v[i]);
    clean.tag.push_back(out.tag[i]);
  }
  while (clean.v.size() > 1 && (clean.v.back() - clean.v.front()).norm() <= 1e-12) {
    clean.v.pop_back();
    clean.tag.pop_back();
  }
  if (clean.v.size() < 3) return Poly{};
  return clean;
}

// Square of half-width `half` on the plane, centered at the projection of c.
Poly big_square(const Plane& pl, const Vec3& c, double half) {
  const Vec3 o = c - pl.n * pl.eval(c);
  const Vec3 u = unit_perp(pl.n);
  const Vec3 w = pl.n.cross(u);
  Poly p;
  p.v = {o + half * (u + w), o + half * (-u + w), o + half * (-u - w), o + half * (u - w)};
  // Counterclockwise about n.
  if ((p.v[1] - p.v[0]).cross(p.v[2] - p.v[0]).dot(pl.n) < 0) std::reverse(p.v.begin(), p.v.end());
  p.tag.assign(4, -1);
  return p;
}

std::array<Plane, 6> box_planes(const Box& b) {
  std::array<Plane, 6> out;
  for (int k = 0; k < 3; ++k) {
    Vec3 n = Vec3::Zero();
    n[k] = -1;
    out[2 * k] = {n, -b.min[k]};
    n[k] = 1;
    out[2 * k + 1] = {n, b.max[k]};
  }
  return out;
}

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void add(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  bool overlaps(const Aabb& o, double tol) const {
    return (lo.array() <= o.hi.array() + tol).all() && (o.lo.array() <= hi.array() + tol).all();
  }
};

Aabb aabb_of(const std::vector<Vec3>& v) {
  Aabb b;
  for (const Vec3& p : v) b.add(p);
  return b;
}

struct SolidData {
  std::vector<int> planes;  // ids, inside is n.x <= d
  Aabb box;
};

struct InputFace {
  Poly poly;
  int plane = -1;
  Vec3 normal = Vec3::UnitZ();
  int owner = kThin;
  int source = -1;
};

// Interval of the chord of a convex polygon along the plane `cut`, projected on t.
bool chord_interval(const std::vector<Vec3>& v, const Plane& cut, const Vec3& t, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec3& p = v[i];
    const Vec3& q = v[(i + 1) % n];
    const double dp = cut.eval(p);
    const double dq = cut.eval(q);
    if (std::abs(dp) <= kOnPlane) {
      lo = std::min(lo, t.dot(p));
      hi = std::max(hi, t.dot(p));
    }
    if ((dp < -kOnPlane && dq > kOnPlane) || (dp > kOnPlane && dq < -kOnPlane)) {
      const Vec3 x = p + (q - p) * (dp / (dp - dq));
      lo = std::min(lo, t.dot(x));
      hi = std::max(hi, t.dot(x));
    }
  }
  return hi >= lo;
}

bool is_sliver(const Poly& p, const Vec3& n) {
  if (p.empty()) return true;
  const double a = area_of(p, n);
  if (a < kTinyArea) return true;
  double longest = 0.0;
  for (size_t i = 0; i < p.v.size(); ++i) longest = std::max(longest, (p.v[i] - p.v[(i + 1) % p.v.size()]).norm());
  return a / longest < 1e-10;
}

// Removes the part of `frag` lying in solid `s`. A fragment lying on one of the
// solid's planes is trimmed to the part outside that face when the face looks
// the other way (the two touch) or when `drop_shared` is set (duplicate face).
std::vector<Poly> subtract_solid(const Poly& frag, const Plane& own, const SolidData& s,
                                 const std::vector<Plane>& planes, bool drop_shared) {
  int on_plane = -1;
  for (int id : s.planes) {
    const Plane& h = planes[id];
    const double c = own.n.dot(h.n);
    if (std::abs(c) > 1 - 1e-12 && std::abs(own.d * (c > 0 ? 1 : -1) - h.d) < kShrink) {
      if (c > 0 && !drop_shared) return {frag};
      on_plane = id;
      break;
    }
  }
  Poly inter = frag;
  for (int id : s.planes) {
    if (id == on_plane) continue;
    Plane h = planes[id];
    h.d -= kShrink;
    inter = clip(inter, h, id);
    if (inter.empty()) return {frag};
  }
  if (is_sliver(inter, own.n)) return {frag};
  std::vector<Poly> out;
  Poly cur = frag;
  for (int id : s.planes) {
    if (id == on_plane) continue;
    Poly outside = clip(cur, planes[id].flipped(), id);
    if (!is_sliver(outside, own.n)) out.push_back(std::move(outside));
    cur = clip(cur, planes[id], id);
    if (cur.empty()) break;
  }
  return out;
}

struct LineKey {
  std::array<long long, 6> k;
  bool operator==(const LineKey& o) const { return k == o.k; }
};

struct LineKeyHash {
  size_t operator()(const LineKey& key) const {
    size_t h = 1469598103934665603ull;
    for (long long x : key.k) {
      h ^= static_cast<size_t>(x);
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct EdgeRec {
  int frag;
  Vec3 a, b;
  Vec3 t;   // canonical direction
  Vec3 p0;  // point of the line closest to the origin
};

// Line through the fragment edge, taken from the two supporting planes when
// they are available (more accurate than the endpoints for short edges).
void edge_line(const Vec3& a, const Vec3& b, const Plane* own, const Plane* cut, Vec3& t, Vec3& p0) {
  const Vec3 m = 0.5 * (a + b);
  Vec3 point = m;
  Vec3 dir = b - a;
  if (own && cut) {
    const Vec3 c = own->n.cross(cut->n);
    if (c.norm() > 1e-9) {
      dir = c;
      const double g = own->n.dot(cut->n);
      const double r1 = own->d - own->n.dot(m);
      const double r2 = cut->d - cut->n.dot(m);
      const double det = 1.0 - g * g;
      const double al = (r1 - g * r2) / det;
      const double be = (r2 - g * r1) / det;
      point = m + al * own->n + be * cut->n;
    }
  }
  t = dir.normalized();
  for (int k = 0; k < 3; ++k) {
    if (std::abs(t[k]) > 0.3) {
      if (t[k] < 0) t = -t;
      break;
    }
  }
  p0 = point - t * t.dot(point);
}

}  // namespace

double polygon_area(const std::vector<Vec3>& v, const Vec3& n) {
  double a = 0.0;
  for (size_t i = 1; i + 1 < v.size(); ++i) a += (v[i] - v[0]).cross(v[i + 1] - v[0]).dot(n);
  return 0.5 * std::abs(a);
}

std::vector<BoundedPolygon> obstacle_polygons(const TrussGraph& g, NodeId node,
                                              const std::set<NodeId>& ignore) {
  std::vector<BoundedPolygon> out;
  const auto touches_ignored = [&](const Member& m) { return ignore.count(m.a) || ignore.count(m.b); };
  for (NodeId u : g.neighbors(node)) {
    if (ignore.count(u)) continue;
    const Vec3 apex = g.pos(u);
    for (const Member& m : g.members) {
      if (m.touches(node) || m.touches(u) || touches_ignored(m)) continue;
      const Vec3 a = g.pos(m.a);
      const Vec3 b = g.pos(m.b);
      Vec3 n = (a - apex).cross(b - apex);
      if (n.norm() <= 1e-12 * (a - apex).norm() * (b - apex).norm()) continue;  // apex on the member line
      n.normalize();
      BoundedPolygon p;
      p.vertices = {a, b};
      p.rays = {(a - apex).normalized(), (b - apex).normalized()};
      p.plane = {n, n.dot(apex)};
      p.apex = apex;
      p.tag.kind = PolygonKind::Obstacle;
      p.tag.apex = u;
      p.tag.member = m;
      p.tag.face = 0;
      out.push_back(std::move(p));
    }
  }
  return out;
}

namespace {

std::vector<BoundedPolygon> inflate_impl(const BoundedPolygon& p, double lambda, bool extend) {
  if (p.vertices.size() != 2 || p.rays.size() != 2) {
    throw InputError("inflate_polygon expects a raw two-vertex, two-ray polygon");
  }
  const Vec3& apex = p.apex;
  const Vec3 np = p.plane.n;
  Vec3 a = p.vertices[0];
  Vec3 b = p.vertices[1];
  const Vec3 e = (b - a).normalized();
  Vec3 nm = np.cross(e);
  if (nm.dot(apex - a) < 0) nm = -nm;
  const double h = nm.dot(apex - a);

  auto make = [&](int face, std::vector<Vec3> v, std::vector<Vec3> r, const Plane& pl) {
    BoundedPolygon f;
    f.vertices = std::move(v);
    f.rays = std::move(r);
    f.plane = pl;
    f.tag = p.tag;
    f.tag.face = face;
    f.apex = apex;
    return f;
  };

  if (lambda <= 0) {
    std::vector<BoundedPolygon> out;
    out.push_back(make(1, {a, a}, {p.rays[0], p.rays[0]}, p.plane));
    out.push_back(make(2, {b, b}, {p.rays[1], p.rays[1]}, p.plane));
    out.push_back(make(3, {a, b}, {p.rays[0], p.rays[1]}, p.plane));
    out.push_back(make(4, {a, b}, {p.rays[0], p.rays[1]}, p.plane));
    out.push_back(make(5, {a, a, b, b}, {}, {nm, nm.dot(a)}));
    return out;
  }

  if (extend) {
    // Push each endpoint outward by the smallest amount that keeps the
    // member tip lambda/2 away from the end face through the apex.
    auto ext = [&](const Vec3& tip, const Vec3& out_dir) {
      const double big_a = h * h - 0.25 * lambda * lambda;
      if (big_a <= 0) throw GeometryError("apex too close to the member line for inflation");
      const double t = out_dir.dot(tip - apex);
      const double bq = -0.5 * lambda * lambda * t;
      const double c = -0.25 * lambda * lambda * (tip - apex).squaredNorm();
      const double s = (-bq + std::sqrt(bq * bq - 4 * big_a * c)) / (2 * big_a);
      return tip + std::max(0.0, s) * out_dir;
    };
    const Vec3 a2 = ext(a, -e);
    const Vec3 b2 = ext(b, e);
    a = a2;
    b = b2;
  }

  const Vec3 qa1 = a + lambda * np, qa2 = a - lambda * np;
  const Vec3 qb1 = b + lambda * np, qb2 = b - lambda * np;
  auto ray = [&](const Vec3& q) { return Vec3((q - apex).normalized()); };
  const Vec3 ra1 = ray(qa1), ra2 = ray(qa2), rb1 = ray(qb1), rb2 = ray(qb2);
  auto pull = [&](const Vec3& q, const Vec3& r) {
    const double c = std::abs(nm.dot(r));
    if (c < 1e-6) throw GeometryError("degenerate inflation: ray parallel to the member plane");
    return Vec3(q - lambda / (2 * c) * r);
  };
  const Vec3 ba1 = pull(qa1, ra1), ba2 = pull(qa2, ra2), bb1 = pull(qb1, rb1), bb2 = pull(qb2, rb2);

  const Vec3 inside = 0.5 * (p.vertices[0] + p.vertices[1]);
  auto plane_through = [&](const Vec3& x, const Vec3& y, const Vec3& z) {
    Vec3 n = (y - x).cross(z - x).normalized();
    double d = n.dot(x);
    if (n.dot(inside) > d) {
      n = -n;
      d = -d;
    }
    return Plane{n, d};
  };

  std::vector<BoundedPolygon> out;
  out.push_back(make(1, {ba1, ba2}, {ra1, ra2}, plane_through(apex, qa1, qa2)));
  out.push_back(make(2, {bb1, bb2}, {rb1, rb2}, plane_through(apex, qb1, qb2)));
  out.push_back(make(3, {ba1, bb1}, {ra1, rb1}, plane_through(apex, qa1, qb1)));
  out.push_back(make(4, {ba2, bb2}, {ra2, rb2}, plane_through(apex, qa2, qb2)));
  out.push_back(make(5, {ba1, ba2, bb2, bb1}, {}, Plane{nm, nm.dot(p.vertices[0]) + 0.5 * lambda}));
  return out;
}

}  // namespace

std::vector<BoundedPolygon> inflate_polygon(const BoundedPolygon& p, double lambda) {
  return inflate_impl(p, lambda, true);
}

std::vector<BoundedPolygon> inflate_polygon_plain(const BoundedPolygon& p, double lambda) {
  return inflate_impl(p, lambda, false);
}

std::vector<BoundedPolygon> singular_planes(const TrussGraph& g, NodeId node, const Box& workspace,
                                            const std::set<NodeId>& ignore, double tol) {
  const std::vector<NodeId> nb = g.neighbors(node);
  if (nb.size() < 3) return {};
  for (NodeId u : nb) {
    if (ignore.count(u)) return {};
  }
  // Best-fit plane through the neighbors, then a max-deviation check.
  Vec3 c = Vec3::Zero();
  for (NodeId u : nb) c += g.pos(u);
  c /= static_cast<double>(nb.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (NodeId u : nb) {
    const Vec3 d = g.pos(u) - c;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  const Vec3 n = es.eigenvectors().col(0).normalized();
  for (NodeId u : nb) {
    if (std::abs(n.dot(g.pos(u) - c)) > tol) return {};
  }
  const Plane pl{n, n.dot(c)};
  const auto bp = box_planes(workspace);
  // A plane on a workspace wall separates nothing.
  for (const Plane& w : bp) {
    const double s = n.dot(w.n) >= 0 ? 1.0 : -1.0;
    if ((s * n - w.n).norm() < 1e-9 && std::abs(s * pl.d - w.d) <= tol) return {};
  }
  Poly sq = big_square(pl, 0.5 * (workspace.min + workspace.max), 2.0 * workspace.diagonal());
  for (int k = 0; k < 6; ++k) sq = clip(sq, bp[k], k);
  if (sq.empty()) return {};
  BoundedPolygon p;
  p.vertices = sq.v;
  p.plane = pl;
  p.tag.kind = PolygonKind::Singular;
  p.tag.apex = node;
  return {p};
}

ObstacleSet polygon_intersection(const std::vector<BoundedPolygon>& raw, const Box& workspace) {
  ObstacleSet obs;
  obs.workspace = workspace;
  const Vec3 center = 0.5 * (workspace.min + workspace.max);
  const double diag = workspace.diagonal();
  const double half = 2.0 * diag;

  const auto bp = box_planes(workspace);
  for (const Plane& p : bp) obs.planes.push_back(p);

  std::vector<InputFace> faces;
  std::vector<SolidData> solids;

  // Workspace walls, free side inward.
  for (int k = 0; k < 6; ++k) {
    Poly sq = big_square(bp[k], center, half);
    for (int j = 0; j < 6; ++j) {
      if (j / 2 != k / 2) sq = clip(sq, bp[j], j);
    }
    BoundedPolygon wall;
    wall.vertices = sq.v;
    wall.plane = {-bp[k].n, -bp[k].d};
    wall.tag.kind = PolygonKind::Workspace;
    wall.tag.wall = k;
    obs.inputs.push_back(wall);
    InputFace f;
    f.poly = sq;
    f.plane = k;
    f.normal = -bp[k].n;
    f.owner = kWall;
    f.source = static_cast<int>(obs.inputs.size()) - 1;
    faces.push_back(std::move(f));
  }

  // Group inflated faces into solids.
  std::map<std::tuple<NodeId, NodeId, NodeId>, std::vector<int>> groups;
  std::vector<int> thin;
  for (size_t i = 0; i < raw.size(); ++i) {
    const BoundedPolygon& p = raw[i];
    if (p.tag.kind == PolygonKind::Obstacle && p.tag.face >= 1) {
      groups[{p.tag.apex, p.tag.member.a, p.tag.member.b}].push_back(static_cast<int>(i));
    } else if (p.tag.kind != PolygonKind::Workspace) {
      thin.push_back(static_cast<int>(i));
    }
  }

  for (const auto& [key, idx] : groups) {
    SolidData sd;
    const int first_plane = static_cast<int>(obs.planes.size());
    for (int i : idx) {
      obs.planes.push_back(raw[i].plane);
      sd.planes.push_back(static_cast<int>(obs.planes.size()) - 1);
    }
    const int sid = static_cast<int>(solids.size());
    for (size_t j = 0; j < idx.size(); ++j) {
      const int pid = first_plane + static_cast<int>(j);
      Poly sq = big_square(obs.planes[pid], center, half);
      for (int other : sd.planes) {
        if (other != pid) sq = clip(sq, obs.planes[other], other);
      }
      for (int k = 0; k < 6; ++k) sq = clip(sq, bp[k], k);
      obs.inputs.push_back(raw[idx[j]]);
      if (sq.empty() || is_sliver(sq, obs.planes[pid].n)) continue;
      for (const Vec3& v : sq.v) sd.box.add(v);
      InputFace f;
      f.poly = std::move(sq);
      f.plane = pid;
      f.normal = obs.planes[pid].n;
      f.owner = sid;
      f.source = static_cast<int>(obs.inputs.size()) - 1;
      faces.push_back(std::move(f));
    }
    solids.push_back(std::move(sd));
  }
  obs.solids = static_cast<int>(solids.size());

  // Thin sheets: materialize rays, bound by in-plane edge planes.
  std::vector<int> thin_faces;
  std::map<int, SolidData> sheet_bounds;  // in-plane bounding planes per thin face
  for (int i : thin) {
    const BoundedPolygon& p = raw[i];
    obs.planes.push_back(p.plane);
    const int pid = static_cast<int>(obs.planes.size()) - 1;
    Poly sq = big_square(p.plane, center, half);
    SolidData bounds;
    for (int k = 0; k < 6; ++k) bounds.planes.push_back(k);
    if (p.tag.kind != PolygonKind::Singular) {
      std::vector<Vec3> ring = p.vertices;
      if (!p.rays.empty()) {
        const double far = 4.0 * (diag + (p.vertices.front() - center).norm() + (p.vertices.back() - center).norm());
        ring.push_back(p.vertices.back() + far * p.rays.back());
        ring.push_back(p.vertices.front() + far * p.rays.front());
      }
      const Vec3 c = centroid_of(ring, p.plane.n);
      for (size_t k = 0; k < ring.size(); ++k) {
        const Vec3& x = ring[k];
        const Vec3& y = ring[(k + 1) % ring.size()];
        if ((y - x).norm() <= 1e-12) continue;
        Vec3 en = (y - x).cross(p.plane.n).normalized();
        double ed = en.dot(x);
        if (en.dot(c) > ed) {
          en = -en;
          ed = -ed;
        }
        obs.planes.push_back({en, ed});
        bounds.planes.push_back(static_cast<int>(obs.planes.size()) - 1);
        sq = clip(sq, obs.planes.back(), static_cast<int>(obs.planes.size()) - 1);
      }
    }
    for (int k = 0; k < 6; ++k) sq = clip(sq, bp[k], k);
    obs.inputs.push_back(p);
    if (sq.empty() || is_sliver(sq, p.plane.n)) continue;
    InputFace f;
    f.poly = std::move(sq);
    f.plane = pid;
    f.normal = p.plane.n;
    f.owner = kThin;
    f.source = static_cast<int>(obs.inputs.size()) - 1;
    bounds.box = aabb_of(f.poly.v);
    sheet_bounds[static_cast<int>(faces.size())] = std::move(bounds);
    thin_faces.push_back(static_cast<int>(faces.size()));
    faces.push_back(std::move(f));
  }

  std::vector<Aabb> face_box(faces.size());
  for (size_t i = 0; i < faces.size(); ++i) face_box[i] = aabb_of(faces[i].poly.v);

  // Trim and split.
  for (size_t fi = 0; fi < faces.size(); ++fi) {
    const InputFace& f = faces[fi];
    std::vector<Poly> frags{f.poly};
    const Plane own_plane = f.owner == kWall ? obs.planes[f.plane].flipped() : obs.planes[f.plane];
    for (size_t s = 0; s < solids.size(); ++s) {
      if (static_cast<int>(s) == f.owner) continue;
      if (!face_box[fi].overlaps(solids[s].box, 1e-9)) continue;
      std::vector<Poly> next;
      for (const Poly& p : frags) {
        if (!aabb_of(p.v).overlaps(solids[s].box, 1e-9)) {
          next.push_back(p);
          continue;
        }
        const bool drop_shared = f.owner == kThin || static_cast<int>(s) < f.owner;
        for (Poly& q : subtract_solid(p, own_plane, solids[s], obs.planes, drop_shared)) {
          next.push_back(std::move(q));
        }
      }
      frags.swap(next);
      if (frags.empty()) break;
    }
    for (int ti : thin_faces) {
      if (frags.empty()) break;
      if (ti == static_cast<int>(fi)) continue;
      const InputFace& t = faces[ti];
      if (!face_box[fi].overlaps(face_box[ti], 1e-9)) continue;
      const Plane& tp = obs.planes[t.plane];
      const Plane& fp = obs.planes[f.plane];
      Vec3 dir = fp.n.cross(tp.n);
      if (dir.norm() < kCoplanar) {
        // Overlapping coplanar sheets: the earlier sheet keeps the overlap.
        if (f.owner != kThin || ti > static_cast<int>(fi) || std::abs(std::abs(fp.n.dot(tp.n) * fp.d) - std::abs(tp.d)) > kShrink) continue;
        std::vector<Poly> next;
        for (const Poly& p : frags) {
          for (Poly& q : subtract_solid(p, own_plane, sheet_bounds.at(ti), obs.planes, true)) next.push_back(std::move(q));
        }
        frags.swap(next);
        continue;
      }
      dir.normalize();
      double a0, a1, b0, b1;
      if (!chord_interval(f.poly.v, tp, dir, a0, a1)) continue;
      Plane fplane = fp;
      if (!chord_interval(t.poly.v, fplane, dir, b0, b1)) continue;
      const double s0 = std::max(a0, b0);
      const double s1 = std::min(a1, b1);
      if (s1 - s0 <= kWeld) continue;
      std::vector<Poly> next;
      for (const Poly& p : frags) {
        double c0, c1;
        if (!chord_interval(p.v, tp, dir, c0, c1) || std::min(c1, s1) - std::max(c0, s0) <= kWeld) {
          next.push_back(p);
          continue;
        }
        Poly lo = clip(p, tp, t.plane);
        Poly hi = clip(p, tp.flipped(), t.plane);
        const bool lo_ok = !is_sliver(lo, f.normal);
        const bool hi_ok = !is_sliver(hi, f.normal);
        if (lo_ok && hi_ok) {
          next.push_back(std::move(lo));
          next.push_back(std::move(hi));
        } else {
          next.push_back(p);
        }
      }
      frags.swap(next);
    }
    for (Poly& p : frags) {
      Fragment fr;
      fr.v = std::move(p.v);
      fr.edge_plane = std::move(p.tag);
      fr.plane = f.plane;
      fr.normal = f.normal;
      fr.owner = f.owner;
      fr.source = f.source;
      fr.centroid = centroid_of(fr.v, fr.normal);
      fr.area = polygon_area(fr.v, fr.normal);
      obs.fragments.push_back(std::move(fr));
    }
  }

  // Adjacency: group collinear edges, then cut each line into elementary spans.
  std::vector<EdgeRec> edges;
  for (size_t fi = 0; fi < obs.fragments.size(); ++fi) {
    const Fragment& fr = obs.fragments[fi];
    for (size_t k = 0; k < fr.v.size(); ++k) {
      const Vec3& a = fr.v[k];
      const Vec3& b = fr.v[(k + 1) % fr.v.size()];
      if ((b - a).norm() <= kWeld) continue;
      EdgeRec e{static_cast<int>(fi), a, b, Vec3::Zero(), Vec3::Zero()};
      const int cut = fr.edge_plane[k];
      edge_line(a, b, &obs.planes[fr.plane], cut >= 0 ? &obs.planes[cut] : nullptr, e.t, e.p0);
      edges.push_back(e);
    }
  }
  constexpr double kQuant = 1e-6;
  std::unordered_map<LineKey, std::vector<int>, LineKeyHash> buckets;
  auto keys_of = [&](const EdgeRec& e) {
    std::array<double, 6> val{e.t.x(), e.t.y(), e.t.z(), e.p0.x(), e.p0.y(), e.p0.z()};
    std::vector<LineKey> out(1);
    for (int d = 0; d < 6; ++d) {
      const double q = val[d] / kQuant;
      const long long base = static_cast<long long>(std::floor(q));
      const double frac = q - static_cast<double>(base);
      for (auto& k : out) k.k[d] = base;
      const double tol = kLineTol / kQuant;
      if (frac < tol || frac > 1 - tol) {
        const long long alt = frac < tol ? base - 1 : base + 1;
        const size_t n = out.size();
        for (size_t i = 0; i < n; ++i) {
          LineKey k = out[i];
          k.k[d] = alt;
          out.push_back(k);
        }
      }
    }
    return out;
  };
  std::vector<int> parent(edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (size_t i = 0; i < edges.size(); ++i) {
    for (const LineKey& k : keys_of(edges[i])) {
      auto& bucket = buckets[k];
      for (int j : bucket) {
        if ((edges[j].t - edges[i].t).norm() < kLineTol && (edges[j].p0 - edges[i].p0).norm() < kLineTol) {
          parent[find(static_cast<int>(i))] = find(j);
        }
      }
      bucket.push_back(static_cast<int>(i));
    }
  }
  std::map<int, std::vector<int>> lines;
  for (size_t i = 0; i < edges.size(); ++i) lines[find(static_cast<int>(i))].push_back(static_cast<int>(i));

  obs.frag_spans.assign(obs.fragments.size(), {});
  for (const auto& [root, members] : lines) {
    const Vec3 t = edges[root].t;
    const Vec3 p0 = edges[root].p0;
    std::vector<double> cuts;
    std::vector<std::pair<double, double>> iv;
    for (int ei : members) {
      double s0 = t.dot(edges[ei].a);
      double s1 = t.dot(edges[ei].b);
      if (s0 > s1) std::swap(s0, s1);
      iv.emplace_back(s0, s1);
      cuts.push_back(s0);
      cuts.push_back(s1);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> welded;
    for (double c : cuts) {
      if (welded.empty() || c - welded.back() > kWeld) welded.push_back(c);
    }
    for (size_t k = 0; k + 1 < welded.size(); ++k) {
      const double mid = 0.5 * (welded[k] + welded[k + 1]);
      EdgeSpan sp;
      for (size_t m = 0; m < members.size(); ++m) {
        if (iv[m].first - kWeld <= mid && mid <= iv[m].second + kWeld) {
          const int fr = edges[members[m]].frag;
          if (std::find(sp.frags.begin(), sp.frags.end(), fr) == sp.frags.end()) sp.frags.push_back(fr);
        }
      }
      if (sp.frags.empty()) continue;
      sp.p0 = p0 + welded[k] * t;
      sp.p1 = p0 + welded[k + 1] * t;
      const int sid = static_cast<int>(obs.spans.size());
      for (int fr : sp.frags) obs.frag_spans[fr].push_back(sid);
      obs.spans.push_back(std::move(sp));
    }
  }
  return obs;
}

namespace {

// Next oriented face across span `k`, or frag = -1 when none qualifies.
OrientedFace innermost(const ObstacleSet& obs, OrientedFace of, int k);
}
namespace {
OrientedFace innermost(const ObstacleSet& obs, OrientedFace of, int k) {
  const EdgeSpan& sp = obs.spans[k];
  const Fragment& f = obs.fragments[of.frag];
  const Vec3 t = (sp.p1 - sp.p0).normalized();
  const Vec3 hinge = 0.5 * (sp.p0 + sp.p1);
  const Vec3 e2 = of.side * f.normal;
  Vec3 e1 = f.normal.cross(t).normalized();
  if (e1.dot(f.centroid - hinge) < 0) e1 = -e1;

  OrientedFace best{-1, 1};
  double best_angle = std::numeric_limits<double>::infinity();
  for (int gi : sp.frags) {
    const Fragment& g = obs.fragments[gi];
    double theta;
    int side;
    if (gi == of.frag) {
      if (f.owner != kThin) continue;
      theta = 2 * M_PI;
      side = -of.side;
    } else {
      Vec3 w = g.normal.cross(t).normalized();
      if (w.dot(g.centroid - hinge) < 0) w = -w;
      theta = std::atan2(w.dot(e2), w.dot(e1));
      if (theta < 0) theta += 2 * M_PI;
      if (theta < 1e-12) continue;
      const Vec3 req = std::sin(theta) * e1 - std::cos(theta) * e2;
      side = g.normal.dot(req) > 0 ? 1 : -1;
      if (g.owner != kThin && side != 1) continue;
    }
    if (theta < best_angle) {
      best_angle = theta;
      best = {gi, side};
    }
  }
  return best;
}

double shell_volume(const ObstacleSet& obs, const std::vector<OrientedFace>& faces) {
  const Vec3 ref = 0.5 * (obs.workspace.min + obs.workspace.max);
  double v = 0.0;
  for (const OrientedFace& of : faces) {
    const Fragment& f = obs.fragments[of.frag];
    v -= of.side * f.area * f.normal.dot(f.centroid - ref);
  }
  return v / 3.0;
}

BoundaryFace make_boundary_face(const ObstacleSet& obs, OrientedFace of) {
  const Fragment& f = obs.fragments[of.frag];
  BoundaryFace bf;
  bf.free_normal = of.side * f.normal;
  bf.v = f.v;
  if ((bf.v[1] - bf.v[0]).cross(bf.v[2] - bf.v[0]).dot(bf.free_normal) < 0) std::reverse(bf.v.begin(), bf.v.end());
  bf.offset = bf.free_normal.dot(f.centroid);
  bf.tag = obs.inputs[f.source].tag;
  bf.lo = bf.v[0];
  bf.hi = bf.v[0];
  for (const Vec3& p : bf.v) {
    bf.lo = bf.lo.cwiseMin(p);
    bf.hi = bf.hi.cwiseMax(p);
  }
  return bf;
}

// -1 miss, +1 hit, 0 degenerate (grazing an edge or the plane).
int ray_hits(const BoundaryFace& f, const Vec3& q, const Vec3& dir, double& t_out) {
  const double denom = f.free_normal.dot(dir);
  const double h = f.free_normal.dot(q) - f.offset;
  if (std::abs(denom) < 1e-12) return -1;
  const double t = -h / denom;
  if (t <= 0) return -1;
  const Vec3 x = q + t * dir;
  if ((x.array() < f.lo.array() - 1e-9).any() || (x.array() > f.hi.array() + 1e-9).any()) return -1;
  double worst = std::numeric_limits<double>::infinity();
  const size_t n = f.v.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec3 e = f.v[(i + 1) % n] - f.v[i];
    const double len = e.norm();
    if (len <= 0) continue;
    const double s = e.cross(x - f.v[i]).dot(f.free_normal) / len;
    worst = std::min(worst, s);
    if (worst < -1e-10) return -1;
  }
  t_out = t;
  return worst > 1e-10 ? 1 : 0;
}

const std::array<Vec3, 8>& probe_dirs() {
  static const std::array<Vec3, 8> dirs = [] {
    std::array<Vec3, 8> d{Vec3(0.5773502691896258, 0.6123724356957945, 0.5400617248673217),
                          Vec3(-0.3141592653589793, 0.8660254037844386, 0.3887022017021371),
                          Vec3(0.7071067811865476, -0.2718281828459045, 0.6527036446661393),
                          Vec3(-0.6180339887498949, -0.4142135623730950, 0.6681531047810609),
                          Vec3(0.1234567890123456, 0.3819660112501051, -0.9159),
                          Vec3(0.8414709848078965, 0.5403023058681398, 0.0017320508075689),
                          Vec3(-0.2236067977499790, -0.9109, -0.3467),
                          Vec3(0.4472135954999579, -0.7236, 0.5257)};
    for (Vec3& v : d) v.normalize();
    return d;
  }();
  return dirs;
}

int winding(const std::vector<BoundaryFace>& faces, const Vec3& q, bool& ok) {
  for (const Vec3& dir : probe_dirs()) {
    int sum = 0;
    bool degenerate = false;
    for (const BoundaryFace& f : faces) {
      double t;
      const int r = ray_hits(f, q, dir, t);
      if (r == 0) {
        degenerate = true;
        break;
      }
      if (r == 1) sum += f.free_normal.dot(dir) < 0 ? 1 : -1;
    }
    if (!degenerate) {
      ok = true;
      return sum;
    }
  }
  ok = false;
  return 0;
}

bool on_face(const BoundaryFace& f, const Vec3& q, double tol) {
  const double h = f.free_normal.dot(q) - f.offset;
  if (std::abs(h) > tol) return false;
  const Vec3 x = q - h * f.free_normal;
  const size_t n = f.v.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec3 e = f.v[(i + 1) % n] - f.v[i];
    const double len = e.norm();
    if (len <= 0) continue;
    if (e.cross(x - f.v[i]).dot(f.free_normal) / len < -tol) return false;
  }
  return true;
}

}  // namespace

std::vector<OrientedFace> shell_search(const ObstacleSet& obs, OrientedFace start) {
  std::vector<OrientedFace> out;
  std::set<OrientedFace> seen{start};
  std::deque<OrientedFace> queue{start};
  while (!queue.empty()) {
    const OrientedFace cur = queue.front();
    queue.pop_front();
    out.push_back(cur);
    for (int k : obs.frag_spans[cur.frag]) {
      const OrientedFace next = innermost(obs, cur, k);
      if (next.frag < 0) continue;
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return out;
}

std::vector<EnclosedSubspace> assemble_subspaces(const ObstacleSet& obs) {
  // Shells over all valid oriented faces, in fragment order.
  std::vector<std::vector<OrientedFace>> shells;
  std::map<OrientedFace, int> shell_of;
  for (size_t fi = 0; fi < obs.fragments.size(); ++fi) {
    const Fragment& f = obs.fragments[fi];
    for (int side : {1, -1}) {
      if (side == -1 && f.owner != kThin) continue;
      const OrientedFace of{static_cast<int>(fi), side};
      if (shell_of.count(of)) continue;
      std::vector<OrientedFace> sh = shell_search(obs, of);
      for (const OrientedFace& x : sh) shell_of[x] = static_cast<int>(shells.size());
      shells.push_back(std::move(sh));
    }
  }

  const double box_vol = (obs.workspace.max - obs.workspace.min).prod();
  const double vol_eps = 1e-12 * std::max(1.0, box_vol);
  std::vector<double> vol(shells.size());
  std::vector<std::vector<BoundaryFace>> bfaces(shells.size());
  std::vector<int> outer;
  for (size_t s = 0; s < shells.size(); ++s) {
    vol[s] = shell_volume(obs, shells[s]);
    for (const OrientedFace& of : shells[s]) bfaces[s].push_back(make_boundary_face(obs, of));
    if (vol[s] > vol_eps) outer.push_back(static_cast<int>(s));
  }

  std::map<int, std::vector<int>> holes_of;
  for (size_t s = 0; s < shells.size(); ++s) {
    if (vol[s] > vol_eps) continue;
    // Probe point just off the largest face of the hole shell.
    int best = 0;
    for (size_t i = 1; i < shells[s].size(); ++i) {
      if (obs.fragments[shells[s][i].frag].area > obs.fragments[shells[s][best].frag].area) best = static_cast<int>(i);
    }
    const OrientedFace of = shells[s][best];
    const Fragment& f = obs.fragments[of.frag];
    const Vec3 probe = f.centroid + 1e-6 * of.side * f.normal;
    int host = -1;
    for (int o : outer) {
      bool ok = false;
      if (winding(bfaces[o], probe, ok) == 1 && ok && (host < 0 || vol[o] < vol[host])) host = o;
    }
    if (host >= 0) holes_of[host].push_back(static_cast<int>(s));
  }

  std::vector<EnclosedSubspace> out;
  for (int o : outer) {
    EnclosedSubspace sp;
    sp.faces = shells[o];
    sp.boundary = bfaces[o];
    sp.volume = vol[o];
    sp.shells = 1;
    Aabb box;
    for (const BoundaryFace& bf : bfaces[o]) {
      box.add(bf.lo);
      box.add(bf.hi);
    }
    sp.extent = {box.lo, box.hi};
    for (int h : holes_of[o]) {
      sp.faces.insert(sp.faces.end(), shells[h].begin(), shells[h].end());
      sp.boundary.insert(sp.boundary.end(), bfaces[h].begin(), bfaces[h].end());
      sp.volume += vol[h];
      ++sp.shells;
    }
    // Seed: just inside the largest outer faces.
    std::vector<int> order(shells[o].size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return obs.fragments[shells[o][a].frag].area > obs.fragments[shells[o][b].frag].area;
    });
    bool seeded = false;
    for (int i : order) {
      const OrientedFace of = shells[o][i];
      const Fragment& f = obs.fragments[of.frag];
      for (double d : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const Vec3 q = f.centroid + d * of.side * f.normal;
        if (contains(sp, q)) {
          sp.seed = q;
          seeded = true;
          break;
        }
      }
      if (seeded) break;
    }
    if (!seeded) sp.seed = 0.5 * (sp.extent.min + sp.extent.max);
    out.push_back(std::move(sp));
  }
  return out;
}

EnclosedSubspace boundary_search(const ObstacleSet& obs, int start, const Vec3& from_point) {
  const Fragment& f = obs.fragments.at(start);
  const int side = f.normal.dot(from_point - f.centroid) >= 0 ? 1 : -1;
  if (side == -1 && f.owner != kThin) throw GeometryError("from_point lies behind a one-sided face");
  const OrientedFace of{start, side};
  for (EnclosedSubspace& sp : assemble_subspaces(obs)) {
    if (std::find(sp.faces.begin(), sp.faces.end(), of) != sp.faces.end()) return sp;
  }
  throw GeometryError("boundary search found no closed subspace");
}

bool contains(const EnclosedSubspace& space, const Vec3& q) {
  if (!space.extent.contains(q)) return false;
  for (const BoundaryFace& f : space.boundary) {
    if (on_face(f, q, 1e-9)) return false;
  }
  bool ok = false;
  const int w = winding(space.boundary, q, ok);
  return ok && w == 1;
}

bool segment_inside(const EnclosedSubspace& space, const Vec3& a, const Vec3& b) {
  if (!contains(space, a) || !contains(space, b)) return false;
  const Vec3 lo = a.cwiseMin(b);
  const Vec3 hi = a.cwiseMax(b);
  for (const BoundaryFace& f : space.boundary) {
    if ((hi.array() < f.lo.array() - 1e-9).any() || (lo.array() > f.hi.array() + 1e-9).any()) continue;
    const double da = f.free_normal.dot(a) - f.offset;
    const double db = f.free_normal.dot(b) - f.offset;
    if ((da > 0) == (db > 0)) continue;
    const Vec3 x = a + (b - a) * (da / (da - db));
    if (on_face(f, x, 1e-9)) return false;
  }
  return true;
}

bool watertight(const EnclosedSubspace& space) {
  // Every stretch of every face edge must be covered by exactly two face edges
  // (its own and one neighbor). Collinearity is judged against the longer edge.
  struct E {
    Vec3 a, b;
    double len;
  };
  std::vector<E> es;
  for (const BoundaryFace& f : space.boundary) {
    for (size_t i = 0; i < f.v.size(); ++i) {
      const Vec3& a = f.v[i];
      const Vec3& b = f.v[(i + 1) % f.v.size()];
      if ((b - a).norm() > kWeld) es.push_back({a, b, (b - a).norm()});
    }
  }
  constexpr double tol = 1e-7;
  auto near_line = [&](const Vec3& p, const E& e) {
    const Vec3 t = (e.b - e.a) / e.len;
    return (p - e.a - t * t.dot(p - e.a)).norm() < tol;
  };
  for (const E& e : es) {
    const Vec3 t = (e.b - e.a) / e.len;
    std::vector<double> cuts{0.0, e.len};
    std::vector<const E*> col;
    for (const E& o : es) {
      const bool collinear = o.len >= e.len ? near_line(e.a, o) && near_line(e.b, o) : near_line(o.a, e) && near_line(o.b, e);
      if (!collinear) continue;
      const double s0 = t.dot(o.a - e.a), s1 = t.dot(o.b - e.a);
      if (std::max(s0, s1) < kWeld || std::min(s0, s1) > e.len - kWeld) continue;
      col.push_back(&o);
      cuts.push_back(std::clamp(s0, 0.0, e.len));
      cuts.push_back(std::clamp(s1, 0.0, e.len));
    }
    std::sort(cuts.begin(), cuts.end());
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] - cuts[k] <= 1e-7) continue;
      const Vec3 mid = e.a + 0.5 * (cuts[k] + cuts[k + 1]) * t;
      int count = 0;
      for (const E* o : col) count += point_segment_distance(mid, o->a, o->b) < tol ? 1 : 0;
      if (count != 2) return false;
    }
  }
  return true;
}

int NodeFreeSpace::locate(const Vec3& q) const {
  for (size_t i = 0; i < regions.size(); ++i) {
    if (contains(regions[i], q)) return static_cast<int>(i);
  }
  return -1;
}

namespace {

double point_polygon_distance(const Vec3& q, const Fragment& f) {
  const double h = f.normal.dot(q - f.centroid);
  const Vec3 x = q - h * f.normal;
  bool inside = true;
  const size_t n = f.v.size();
  // Orientation of the stored ring relative to the normal.
  const double orient = (f.v[1] - f.v[0]).cross(f.v[2] - f.v[0]).dot(f.normal) >= 0 ? 1.0 : -1.0;
  for (size_t i = 0; i < n && inside; ++i) {
    const Vec3 e = f.v[(i + 1) % n] - f.v[i];
    if (orient * e.cross(x - f.v[i]).dot(f.normal) < 0) inside = false;
  }
  if (inside) return std::abs(h);
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) best = std::min(best, point_segment_distance(q, f.v[i], f.v[(i + 1) % n]));
  return best;
}

}  // namespace

NodeFreeSpace compute_free_space(const TrussGraph& g, NodeId node, const PlannerConfig& cfg,
                                 const FreeSpaceQuery& query) {
  std::vector<BoundedPolygon> polys;
  std::vector<PolygonTag> skipped;
  for (const BoundedPolygon& p : obstacle_polygons(g, node, query.ignore)) {
    if (cfg.inflate > 0) {
      const Vec3 e = (p.vertices[1] - p.vertices[0]).normalized();
      const Vec3 off = p.apex - p.vertices[0];
      if ((off - e * e.dot(off)).norm() <= 0.5 * cfg.inflate) {
        skipped.push_back(p.tag);
        continue;
      }
      for (BoundedPolygon& f : inflate_polygon(p, cfg.inflate)) polys.push_back(std::move(f));
    } else {
      polys.push_back(p);
    }
  }
  if (query.include_singular) {
    for (BoundedPolygon& p : singular_planes(g, node, cfg.workspace, query.ignore)) polys.push_back(std::move(p));
  }

  NodeFreeSpace fs;
  fs.skipped = std::move(skipped);
  fs.obs = polygon_intersection(polys, cfg.workspace);
  std::vector<EnclosedSubspace> all = assemble_subspaces(fs.obs);

  // The subspace holding the node is the one behind the closest face.
  const Vec3 q = g.pos(node);
  int first = -1;
  if (!fs.obs.fragments.empty()) {
    int closest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < fs.obs.fragments.size(); ++i) {
      const double d = point_polygon_distance(q, fs.obs.fragments[i]);
      if (d < best) {
        best = d;
        closest = static_cast<int>(i);
      }
    }
    const Fragment& f = fs.obs.fragments[closest];
    const OrientedFace of{closest, f.normal.dot(q - f.centroid) >= 0 ? 1 : -1};
    for (size_t i = 0; i < all.size(); ++i) {
      if (std::find(all[i].faces.begin(), all[i].faces.end(), of) != all[i].faces.end() && contains(all[i], q)) {
        first = static_cast<int>(i);
      }
    }
  }
  if (first < 0) {
    for (size_t i = 0; i < all.size() && first < 0; ++i) {
      if (contains(all[i], q)) first = static_cast<int>(i);
    }
  }
  if (first >= 0) {
    fs.regions.push_back(std::move(all[first]));
    fs.current = 0;
  }
  for (size_t i = 0; i < all.size(); ++i) {
    if (static_cast<int>(i) == first) continue;
    if (all[i].extent.max.z() > g.ground_height + kAboveGround) fs.regions.push_back(std::move(all[i]));
  }
  return fs;
}

std::vector<EnclosedSubspace> enumerate_subspaces(const TrussGraph& g, NodeId node, const PlannerConfig& cfg) {
  return compute_free_space(g, node, cfg).regions;
}

void write_obj(std::ostream& os, const std::vector<EnclosedSubspace>& spaces) {
  os.precision(17);
  size_t base = 1;
  for (size_t s = 0; s < spaces.size(); ++s) {
    os << "o subspace_" << s << "\n";
    for (const BoundaryFace& f : spaces[s].boundary) {
      for (const Vec3& p : f.v) os << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << "\n";
      for (size_t i = 1; i + 1 < f.v.size(); ++i) {
        os << "f " << base << ' ' << base + i << ' ' << base + i + 1 << "\n";
      }
      base += f.v.size();
    }
  }
}

}  // namespace vtt
