#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "vtt/geometry.hpp"

#include <numbers>

using namespace vtt;
using namespace vtt::test;

namespace {

TrussGraph tetrahedron(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  TrussGraph g;
  g.nodes = {{0, a}, {1, b}, {2, c}, {3, d}};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) g.members.insert(Member(i, j));
  }
  return g;
}

// Rod-length weighted midpoint sum, written out independently.
Vec3 oracle_com(const TrussGraph& g) {
  Vec3 s = Vec3::Zero();
  double w = 0;
  for (const Member& m : g.members) {
    const double l = (g.pos(m.a) - g.pos(m.b)).norm();
    s += 0.5 * (g.pos(m.a) + g.pos(m.b)) * l;
    w += l;
  }
  return s / w;
}

int count_kind(const ValidationReport& r, ViolationKind k) {
  int n = 0;
  for (const Violation& v : r.violations) n += v.kind == k;
  return n;
}

}  // namespace

TEST_CASE("octahedron scene satisfies every constraint") {
  const Scene s = scene("octahedron");
  const ValidationReport r = validate_truss(s.graph, s.config);
  CHECK_MESSAGE(r.ok(), r.summary());
  CHECK(brute_geometry_ok(s.graph, s.config));
}

TEST_CASE("every bundled scene validates and agrees with the brute-force geometry check") {
  for (const std::string& name : bundled_scenes()) {
    CAPTURE(name);
    const Scene s = scene(name);
    const ValidationReport r = validate_truss(s.graph, s.config);
    CHECK_MESSAGE(r.ok(), r.summary());
    CHECK(brute_geometry_ok(s.graph, s.config));
  }
}

TEST_CASE("a member stretched to 10 m is reported as a length violation") {
  // The triangle inequality forces a second long member on each face through
  // the stretched one, so the oracle counts every member over the bound.
  TrussGraph g = tetrahedron({0, 0, 0}, {10, 0, 0}, {5, 3, 0}, {5, 1, 3});
  PlannerConfig cfg;
  cfg.len_max = 5.0;
  cfg.workspace = {Vec3(-20, -20, 0), Vec3(20, 20, 20)};
  const ValidationReport r = validate_truss(g, cfg);
  int expected = 0;
  for (const Member& m : g.members) expected += g.length(m) > cfg.len_max;
  CHECK(count_kind(r, ViolationKind::Length) == expected);
  bool named = false;
  for (const Violation& v : r.violations) {
    if (v.kind == ViolationKind::Length && v.nodes == std::vector<NodeId>{0, 1}) named = true;
  }
  CHECK(named);

  // Shrinking the stretched member back below the bound clears it.
  TrussGraph ok = tetrahedron({0, 0, 0}, {2, 0, 0}, {1, 1.7, 0}, {1, 0.6, 1.6});
  CHECK(count_kind(validate_truss(ok, cfg), ViolationKind::Length) == 0);
}

TEST_CASE("degree, ground and support violations") {
  PlannerConfig cfg;
  cfg.workspace = {Vec3(-5, -5, 0), Vec3(5, 5, 5)};
  TrussGraph g = tetrahedron({0, 0, 0}, {2, 0, 0}, {1, 1.7, 0}, {1, 0.6, 1.6});
  g.members.erase(Member(2, 3));
  CHECK(validate_truss(g, cfg).has(ViolationKind::Degree));

  TrussGraph low = tetrahedron({0, 0, 0}, {2, 0, 0}, {1, 1.7, 0}, {1, 0.6, -0.5});
  CHECK(validate_truss(low, cfg).has(ViolationKind::BelowGround));

  TrussGraph lifted = tetrahedron({0, 0, 1}, {2, 0, 1}, {1, 1.7, 1}, {1, 0.6, 2.6});
  CHECK(validate_truss(lifted, cfg).has(ViolationKind::SupportCount));
}

TEST_CASE("segment distance closed cases") {
  CHECK(segment_distance({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}) == doctest::Approx(1.0));
  CHECK(segment_distance({-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}) == doctest::Approx(0.0));
  // Degenerate segments fall back to point distances.
  CHECK(segment_distance({0, 0, 0}, {0, 0, 0}, {3, 4, 0}, {3, 4, 0}) == doctest::Approx(5.0));
  CHECK(segment_distance({0, 0, 1}, {0, 0, 1}, {-1, 0, 0}, {1, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("segment distance matches the grid oracle and is symmetric") {
  Rng rng(11);
  for (int i = 0; i < 150; ++i) {
    const Vec3 p1 = random_vec(rng), p2 = random_vec(rng), q1 = random_vec(rng), q2 = random_vec(rng);
    const double d = segment_distance(p1, p2, q1, q2);
    CHECK(std::abs(d - grid_segment_distance(p1, p2, q1, q2, 500)) <= 4e-3);
    CHECK(d == doctest::Approx(segment_distance(q1, q2, p1, p2)).epsilon(1e-12));
    CHECK(d == doctest::Approx(segment_distance(p2, p1, q2, q1)).epsilon(1e-12));
    CHECK(d == doctest::Approx(exact_segment_distance(p1, p2, q1, q2)).epsilon(1e-9));
  }
}

TEST_CASE("incident angle") {
  TrussGraph g;
  g.nodes = {{0, {0, 0, 0}}, {1, {1, 0, 0}}, {2, {0, 1, 0}}, {3, {2, 0, 0}}, {4, {1, 1, 0}}};
  g.members = {Member(0, 1), Member(0, 2), Member(0, 3), Member(0, 4)};
  CHECK(incident_angle(g, 0, 1, 2) == doctest::Approx(std::numbers::pi / 2));
  CHECK(incident_angle(g, 0, 1, 3) == doctest::Approx(0.0));
  CHECK(incident_angle(g, 0, 1, 4) == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("center of mass") {
  TrussGraph rod;
  rod.nodes = {{0, {0, 0, 0}}, {1, {2, 0, 0}}};
  rod.members = {Member(0, 1)};
  CHECK((center_of_mass(rod) - Vec3(1, 0, 0)).norm() < 1e-12);

  TrussGraph ell;
  ell.nodes = {{0, {0, 0, 0}}, {1, {1, 0, 0}}, {2, {0, 1, 0}}};
  ell.members = {Member(0, 1), Member(0, 2)};
  // Two unit rods with midpoints (0.5,0,0) and (0,0.5,0).
  CHECK((center_of_mass(ell) - Vec3(0.25, 0.25, 0)).norm() < 1e-12);

  const Scene oct = scene("octahedron");
  CHECK((center_of_mass(oct.graph) - oracle_com(oct.graph)).norm() < 1e-12);
}

TEST_CASE("center of mass is equivariant under rigid motions") {
  Rng rng(5);
  const Scene s = scene("locomotion7");
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix3d r = random_rotation(rng);
    const Vec3 t = random_vec(rng, -3, 3);
    TrussGraph g = s.graph;
    for (auto& [v, q] : g.nodes) q = r * q + t;
    CHECK((center_of_mass(g) - (r * center_of_mass(s.graph) + t)).norm() < 1e-12);
  }
}

TEST_CASE("support nodes") {
  const Scene oct = scene("octahedron");
  CHECK(support_nodes(oct.graph, oct.config) == std::set<NodeId>{0, 1, 2});

  TrussGraph lifted = oct.graph;
  for (auto& [v, q] : lifted.nodes) q.z() += 1.0;
  CHECK(support_nodes(lifted, oct.config).empty());

  // Threshold scan of the listed coordinates.
  const Scene cube = scene("topology2");
  std::set<NodeId> scan;
  for (const auto& [v, q] : cube.graph.nodes) {
    if (std::abs(q.z() - 0.075) < 1e-12) scan.insert(v);
  }
  CHECK(support_nodes(cube.graph, cube.config) == scan);
}

TEST_CASE("convex hull of a small planar set") {
  const Hull2 sq = convex_hull_2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
  CHECK(std::set<int>(sq.index.begin(), sq.index.end()) == std::set<int>{0, 1, 2, 3});
  const Hull2 tri = convex_hull_2d({{0, 0}, {2, 0}, {0, 1}});
  CHECK(tri.index.size() == 3);
  CHECK(orient2d(tri.points[0], tri.points[1], tri.points[2]) > 0);
  CHECK_THROWS_AS(convex_hull_2d({{0, 0}, {1, 1}, {2, 2}}), GeometryError);
  CHECK_THROWS_AS(convex_hull_2d({{0, 0}, {1, 1}}), GeometryError);
}

TEST_CASE("convex hull matches the brute-force oracle") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const int n = std::uniform_int_distribution<int>(3, 12)(rng);
    std::vector<Vec2> p;
    for (int i = 0; i < n; ++i) p.emplace_back(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const Hull2 h = convex_hull_2d(p);
    CHECK(std::set<int>(h.index.begin(), h.index.end()) == brute_hull_2d(p));
    for (size_t i = 0; i < h.points.size(); ++i) {
      const Vec2& a = h.points[i];
      const Vec2& b = h.points[(i + 1) % h.points.size()];
      for (const Vec2& q : p) CHECK(orient2d(a, b, q) >= -1e-12);
    }
  }
}

TEST_CASE("stability") {
  const Scene oct = scene("octahedron");
  CHECK(stability_check(oct.graph, oct.config));

  // Only two nodes touch the ground.
  TrussGraph two = tetrahedron({0, 0, 0.075}, {1.5, 0, 0.075}, {0.7, 1.2, 0.6}, {0.7, 0.4, 1.6});
  two.ground_height = 0.075;
  CHECK(support_nodes(two, oct.config).size() == 2);
  CHECK_FALSE(stability_check(two, oct.config));

  // Apex placed so the center of mass projects onto the support edge (0,1).
  auto with_apex = [](double y) {
    TrussGraph g = tetrahedron({-1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, y, 1});
    return g;
  };
  double lo = -3.0, hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle_com(with_apex(mid)).y() > 0 ? hi : lo) = mid;
  }
  const TrussGraph edge = with_apex(0.5 * (lo + hi));
  const Vec3 c = oracle_com(edge);
  CHECK(std::abs(c.y()) < 1e-12);
  CHECK(std::abs(c.x()) <= 1.0);
  PlannerConfig cfg;
  CHECK(support_nodes(edge, cfg) == std::set<NodeId>{0, 1, 2});
  CHECK_FALSE(stability_check(edge, cfg));
}

TEST_CASE("split then merge restores the truss") {
  const Scene s = scene("split_cube");
  TrussGraph g = s.graph;
  const NodeId w = split_node(g, 0, {8, 9}, Vec3(0.1, 0, 0.8));
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(w) == 2);
  CHECK(g.has_member(w, 8));
  CHECK_FALSE(g.has_member(0, 8));
  merge_nodes(g, 0, w);
  CHECK(g.members == s.graph.members);
  CHECK_FALSE(g.has_node(w));
  CHECK_THROWS_AS(merge_nodes(g, 0, 1), GeometryError);
}

TEST_CASE("telemetry of a state") {
  const Scene s = scene("octahedron");
  const Telemetry t = measure(s.graph, s.config, {3});
  double lmin = 1e9, lmax = 0;
  for (const Member& m : s.graph.members) {
    if (!m.touches(3)) continue;
    lmin = std::min(lmin, s.graph.length(m));
    lmax = std::max(lmax, s.graph.length(m));
  }
  CHECK(t.len_min == doctest::Approx(lmin));
  CHECK(t.len_max == doctest::Approx(lmax));
  CHECK(t.manip > 0.1);
  CHECK(t.support == std::vector<NodeId>{0, 1, 2});
}
