// Shared fixtures and brute-force oracles for the test binaries. Oracles here
// never call into the code they check beyond the data model.
#pragma once

#include "vtt/io.hpp"
#include "vtt/replay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace vtt::test {

inline std::string scene_file(const std::string& name) { return std::string(VTT_SCENE_DIR) + "/" + name + ".json"; }
inline std::string task_file(const std::string& name) { return std::string(VTT_SCENE_DIR) + "/" + name + ".task.json"; }
inline Scene scene(const std::string& name) { return load_scene(scene_file(name)); }

inline const std::vector<std::string>& bundled_scenes() {
  static const std::vector<std::string> names{"split_cube", "cube_tower", "topology1",
                                              "topology2",  "octahedron", "locomotion7"};
  return names;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Vec3 random_vec(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return Vec3(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi));
}

inline Vec3 random_in(Rng& rng, const Box& b) {
  return Vec3(uniform(rng, b.min.x(), b.max.x()), uniform(rng, b.min.y(), b.max.y()),
              uniform(rng, b.min.z(), b.max.z()));
}

inline Eigen::Matrix3d random_rotation(Rng& rng) {
  Eigen::Quaterniond q(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
  return q.normalized().toRotationMatrix();
}

// Minimum of |p(s) - q(t)| over an (n+1) x (n+1) grid of segment parameters.
inline double grid_segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2, int n = 1000) {
  const Vec3 u = p2 - p1;
  const Vec3 v = q2 - q1;
  const double vv = v.squaredNorm();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const Vec3 w = p1 + (static_cast<double>(i) / n) * u - q1;
    const double ww = w.squaredNorm();
    const double wv = w.dot(v);
    for (int j = 0; j <= n; ++j) {
      const double t = static_cast<double>(j) / n;
      best = std::min(best, ww - 2.0 * t * wv + t * t * vv);
    }
  }
  return std::sqrt(std::max(0.0, best));
}

// Closed-form distance between segments by scanning the parameter box edges
// and the interior critical point; independent of the library routine.
inline double exact_point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double dd = d.squaredNorm();
  const double t = dd > 0 ? std::clamp((p - a).dot(d) / dd, 0.0, 1.0) : 0.0;
  return (a + t * d - p).norm();
}

inline double exact_segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2) {
  double best = std::min({exact_point_segment(p1, q1, q2), exact_point_segment(p2, q1, q2),
                          exact_point_segment(q1, p1, p2), exact_point_segment(q2, p1, p2)});
  const Vec3 u = p2 - p1, v = q2 - q1, w = p1 - q1;
  const double a = u.dot(u), b = u.dot(v), c = v.dot(v), d = u.dot(w), e = v.dot(w);
  const double den = a * c - b * b;
  if (den > 1e-14 * a * c) {
    const double s = (b * e - c * d) / den;
    const double t = (a * e - b * d) / den;
    if (s >= 0 && s <= 1 && t >= 0 && t <= 1) best = std::min(best, (w + s * u - t * v).norm());
  }
  return best;
}

// Smallest distance between a member of `node` placed at q and any member
// that shares no endpoint with it, skipping members that touch `ignore`.
inline double brute_clearance(const TrussGraph& g, NodeId node, const Vec3& q, const std::set<NodeId>& ignore = {}) {
  double best = std::numeric_limits<double>::infinity();
  for (const Member& mv : g.members) {
    if (!mv.touches(node)) continue;
    const NodeId u = mv.other(node);
    if (ignore.count(u)) continue;
    for (const Member& m : g.members) {
      if (m.touches(node) || m.touches(u) || ignore.count(m.a) || ignore.count(m.b)) continue;
      best = std::min(best, exact_segment_distance(q, g.pos(u), g.pos(m.a), g.pos(m.b)));
    }
  }
  return best;
}

// Every pair of members without a shared node keeps the clearance; every
// member length and incident angle is in range; no node is below ground.
inline bool brute_geometry_ok(const TrussGraph& g, const PlannerConfig& cfg) {
  const std::vector<Member> ms(g.members.begin(), g.members.end());
  for (size_t i = 0; i < ms.size(); ++i) {
    const double len = (g.pos(ms[i].a) - g.pos(ms[i].b)).norm();
    if (len < cfg.len_min - 1e-9 || len > cfg.len_max + 1e-9) return false;
    for (size_t j = i + 1; j < ms.size(); ++j) {
      if (ms[i].shares_node(ms[j])) continue;
      const double d = exact_segment_distance(g.pos(ms[i].a), g.pos(ms[i].b), g.pos(ms[j].a), g.pos(ms[j].b));
      if (d < cfg.clearance - 1e-9) return false;
    }
  }
  for (const auto& [v, q] : g.nodes) {
    if (q.z() < g.ground_height - cfg.ground_tol) return false;
    std::vector<Vec3> dirs;
    for (const Member& m : g.members) {
      if (m.touches(v)) dirs.push_back((g.pos(m.other(v)) - q).normalized());
    }
    for (size_t i = 0; i < dirs.size(); ++i) {
      for (size_t j = i + 1; j < dirs.size(); ++j) {
        if (std::acos(std::clamp(dirs[i].dot(dirs[j]), -1.0, 1.0)) < cfg.angle_min - 1e-9) return false;
      }
    }
  }
  return true;
}

// Indices of the extreme points of a planar set: i is extreme when some
// other point j leaves every remaining point strictly left of i -> j.
inline std::set<int> brute_hull_2d(const std::vector<Vec2>& p) {
  std::set<int> out;
  const int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      bool all_left = true;
      for (int k = 0; k < n && all_left; ++k) {
        if (k == i || k == j) continue;
        const Vec2 e = p[j] - p[i], f = p[k] - p[i];
        if (e.x() * f.y() - e.y() * f.x() <= 0) all_left = false;
      }
      if (all_left) {
        out.insert(i);
        out.insert(j);
      }
    }
  }
  return out;
}

// Supporting planes of a point set found from all triples: each plane with
// every point on one side, deduplicated by the set of points lying on it.
struct BruteHull3 {
  std::set<int> vertices;
  std::set<std::set<int>> facets;  // points on each supporting plane
};

inline BruteHull3 brute_hull_3d(const std::vector<Vec3>& p, double tol = 1e-9) {
  BruteHull3 h;
  const int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Vec3 nrm = (p[j] - p[i]).cross(p[k] - p[i]);
        if (nrm.norm() < 1e-12) continue;
        nrm.normalize();
        int pos = 0, neg = 0;
        std::set<int> on;
        for (int m = 0; m < n; ++m) {
          const double s = nrm.dot(p[m] - p[i]);
          if (s > tol) ++pos;
          else if (s < -tol) ++neg;
          else on.insert(m);
        }
        if (pos == 0 || neg == 0) h.facets.insert(on);
      }
    }
  }
  for (const auto& f : h.facets) {
    for (int v : f) h.vertices.insert(v);
  }
  return h;
}

}  // namespace vtt::test
