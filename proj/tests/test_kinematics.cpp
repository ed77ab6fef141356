#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "vtt/kinematics.hpp"

using namespace vtt;
using namespace vtt::test;

namespace {

TrussGraph star(const Vec3& center, const std::vector<Vec3>& around) {
  TrussGraph g;
  g.nodes[0] = center;
  for (size_t i = 0; i < around.size(); ++i) {
    g.nodes[static_cast<NodeId>(i + 1)] = around[i];
    g.members.insert(Member(0, static_cast<NodeId>(i + 1)));
  }
  return g;
}

// Shape oracle counted straight from the adjacency.
struct Shape {
  int rows = 0;
  int cols_a = 0;
  int cols_b = 0;
};

Shape expected_shape(const TrussGraph& g, const std::vector<NodeId>& controlled) {
  const std::set<NodeId> c(controlled.begin(), controlled.end());
  int fixed_links = 0, connections = 0;
  for (const Member& m : g.members) {
    const bool ca = c.count(m.a) != 0, cb = c.count(m.b) != 0;
    if (ca && cb) ++connections;
    else if (ca || cb) ++fixed_links;
  }
  return {fixed_links + 3 * connections, 3 * static_cast<int>(controlled.size()), 3 * fixed_links + 3 * connections};
}

}  // namespace

TEST_CASE("one controlled node with three fixed neighbors") {
  const TrussGraph g = star({0, 0, 0}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const KinematicsSystem sys = build_system(g, {0});
  CHECK(sys.matA.rows() == 3);
  CHECK(sys.matA.cols() == 3);
  CHECK(sys.matB.rows() == 3);
  CHECK(sys.matB.cols() == 9);
  const JacobianPair jp = jacobians(sys);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jp.j_ab);
  for (int i = 0; i < svd.singularValues().size(); ++i) CHECK(svd.singularValues()(i) == doctest::Approx(1.0));
  CHECK(manipulability(sys) == doctest::Approx(1.0));
}

TEST_CASE("coplanar node is singular") {
  const TrussGraph g = star({0, 0, 0}, {{1, 0, 0}, {0, 1, 0}, {-1, -1, 0}});
  CHECK(manipulability(g, {0}) < 1e-9);
}

TEST_CASE("octahedron with two adjacent controlled nodes") {
  const Scene s = scene("octahedron");
  const KinematicsSystem sys = build_system(s.graph, {1, 4});
  CHECK(sys.matA.rows() == 9);
  CHECK(sys.matA.cols() == 6);
  CHECK(sys.connections == 1);
  CHECK(sys.attachments == 6);
  Eigen::MatrixXd band(3, 6);
  band << Eigen::Matrix3d::Identity(), -Eigen::Matrix3d::Identity();
  CHECK((sys.matA.bottomRows(3) - band).norm() < 1e-15);
  const Shape e = expected_shape(s.graph, {1, 4});
  CHECK(sys.matB.rows() == e.rows);
  CHECK(sys.matB.cols() == e.cols_b);
}

TEST_CASE("system shapes follow the link counts") {
  const Scene s = scene("split_cube");
  const std::vector<std::vector<NodeId>> sets{{0}, {1}, {0, 1}, {2, 3}, {6, 0}, {2}};
  for (const auto& c : sets) {
    const KinematicsSystem sys = build_system(s.graph, c);
    const Shape e = expected_shape(s.graph, c);
    CHECK(sys.matA.rows() == e.rows);
    CHECK(sys.matA.cols() == e.cols_a);
    CHECK(sys.matB.rows() == e.rows);
    CHECK(sys.matB.cols() == e.cols_b);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.matB);
    CHECK(lu.rank() == sys.matB.rows());
  }
}

TEST_CASE("manipulability is invariant under rotation, and under scaling without connection links") {
  Rng rng(8);
  const Scene s = scene("octahedron");
  for (const std::vector<NodeId>& c : std::vector<std::vector<NodeId>>{{3}, {1, 4}, {0, 5}}) {
    const double mu = manipulability(s.graph, c);
    const bool connected = build_system(s.graph, c).connections > 0;
    for (int i = 0; i < 10; ++i) {
      const Eigen::Matrix3d r = random_rotation(rng);
      // Attachment rows scale with the truss while the identity connection
      // band does not, so scaling only preserves mu for unconnected groups.
      const double k = connected ? 1.0 : uniform(rng, 0.2, 5.0);
      TrussGraph g = s.graph;
      for (auto& [v, q] : g.nodes) q = k * (r * q) + Vec3(1, -2, 3);
      CHECK(std::abs(manipulability(g, c) - mu) < 1e-8);
    }
  }
}

TEST_CASE("link velocities reproduce node velocities") {
  Rng rng(9);
  const Scene s = scene("split_cube");
  for (int trial = 0; trial < 30; ++trial) {
    TrussGraph g = s.graph;
    for (auto& [v, q] : g.nodes) q += random_vec(rng, -0.2, 0.2);
    const std::vector<NodeId> c = trial % 2 ? std::vector<NodeId>{0, 1} : std::vector<NodeId>{trial % 10};
    const KinematicsSystem sys = build_system(g, c);
    const JacobianPair jp = jacobians(sys);
    for (int k = 0; k < 5; ++k) {
      const Eigen::VectorXd pdot = Eigen::VectorXd::Random(sys.matA.cols());
      CHECK((sys.matB * (jp.j_ba * pdot) - sys.matA * pdot).norm() <= 1e-9);
    }
  }
}

TEST_CASE("pseudo-inverse is the least-squares minimizer") {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const int r = 2 + t % 5, c = 2 + (t * 3) % 6;
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(r, c);
    if (t % 4 == 0) m.col(0) = m.col(1);  // rank deficient
    const Eigen::MatrixXd p = pseudo_inverse(m);
    CHECK((m * p * m - m).norm() < 1e-9);
    CHECK((p * m * p - p).norm() < 1e-9);
    CHECK(((m * p).transpose() - m * p).norm() < 1e-9);
    CHECK(((p * m).transpose() - p * m).norm() < 1e-9);
    const Eigen::VectorXd b = Eigen::VectorXd::Random(r);
    const Eigen::VectorXd x = p * b;
    // Normal equations hold and no perturbation lowers the residual.
    CHECK((m.transpose() * (m * x - b)).norm() < 1e-9);
    for (int k = 0; k < 5; ++k) {
      const Eigen::VectorXd y = x + 0.1 * Eigen::VectorXd::Random(c);
      CHECK((m * y - b).norm() >= (m * x - b).norm() - 1e-12);
    }
  }
}

TEST_CASE("debug dump names the matrices") {
  const Scene s = scene("octahedron");
  const KinematicsSystem sys = build_system(s.graph, {1, 4});
  const std::string d = dump_system(sys, jacobians(sys));
  CHECK(d.find("A") != std::string::npos);
  CHECK(d.find("B") != std::string::npos);
}
