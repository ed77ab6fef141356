#include "vtt/kinematics.hpp"

#include <algorithm>
#include <sstream>

namespace vtt {

KinematicsSystem build_system(const TrussGraph& g, const std::vector<NodeId>& controlled) {
  KinematicsSystem sys;
  sys.controlled = controlled;
  std::set<NodeId> ctrl(controlled.begin(), controlled.end());
  if (ctrl.size() != controlled.size()) throw InputError("duplicate controlled node");
  for (NodeId v : controlled) {
    if (!g.has_node(v)) throw InputError("controlled node " + std::to_string(v) + " not in truss");
    if (g.degree(v) == 0) throw InputError("controlled node " + std::to_string(v) + " has no members");
  }
  for (const auto& [v, p] : g.nodes) {
    if (!ctrl.count(v)) sys.fixed.insert(v);
  }

  std::map<NodeId, int> col_of;
  for (size_t i = 0; i < controlled.size(); ++i) col_of[controlled[i]] = static_cast<int>(i);

  std::vector<Member> connections;
  for (NodeId v : controlled) {
    for (NodeId u : g.neighbors(v)) {
      if (ctrl.count(u)) {
        if (v < u) connections.emplace_back(v, u);
      } else {
        sys.links.push_back({v, u, false});
      }
    }
  }
  std::sort(connections.begin(), connections.end());
  sys.attachments = static_cast<int>(sys.links.size());
  sys.connections = static_cast<int>(connections.size());
  for (const Member& m : connections) sys.links.push_back({m.a, m.b, true});

  const int lambda = static_cast<int>(controlled.size());
  const int rows = sys.attachments + 3 * sys.connections;
  sys.matA = Eigen::MatrixXd::Zero(rows, 3 * lambda);
  sys.matB = Eigen::MatrixXd::Zero(rows, 3 * sys.attachments + 3 * sys.connections);

  for (int r = 0; r < sys.attachments; ++r) {
    const LinkRef& l = sys.links[r];
    const Vec3 link = g.pos(l.to) - g.pos(l.from);
    if (link.norm() <= 1e-12) throw GeometryError("zero-length member at controlled node");
    sys.matA.block<1, 3>(r, 3 * col_of[l.from]) = -link.transpose();
    sys.matB.block<1, 3>(r, 3 * r) = link.transpose();
  }
  for (int c = 0; c < sys.connections; ++c) {
    const LinkRef& l = sys.links[sys.attachments + c];
    if ((g.pos(l.to) - g.pos(l.from)).norm() <= 1e-12) {
      throw GeometryError("zero-length connection member");
    }
    const int r = sys.attachments + 3 * c;
    sys.matA.block<3, 3>(r, 3 * col_of[l.from]) = Eigen::Matrix3d::Identity();
    sys.matA.block<3, 3>(r, 3 * col_of[l.to]) = -Eigen::Matrix3d::Identity();
    sys.matB.block<3, 3>(r, 3 * sys.attachments + 3 * c) = Eigen::Matrix3d::Identity();
  }
  return sys;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rcond) {
  if (m.size() == 0) return Eigen::MatrixXd::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() ? rcond * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

JacobianPair jacobians(const KinematicsSystem& sys, double rcond) {
  if (sys.matA.rows() == 0 || sys.matA.norm() <= 1e-300) {
    throw GeometryError("kinematic system has rank 0");
  }
  JacobianPair jp;
  jp.j_ba = pseudo_inverse(sys.matB, rcond) * sys.matA;
  jp.j_ab = pseudo_inverse(sys.matA, rcond) * sys.matB;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jp.j_ab);
  const Eigen::VectorXd& s = svd.singularValues();
  jp.sigma_max = s.size() ? s(0) : 0.0;
  // J_AB maps into the 3*lambda node velocity space, so a full-rank system has
  // exactly that many singular values.
  const long full = jp.j_ab.rows();
  jp.sigma_min = s.size() >= full ? s(full - 1) : 0.0;
  return jp;
}

double manipulability(const KinematicsSystem& sys, double rcond) {
  const JacobianPair jp = jacobians(sys, rcond);
  if (jp.sigma_max <= 0) throw GeometryError("degenerate kinematic system");
  return std::clamp(jp.sigma_min / jp.sigma_max, 0.0, 1.0);
}

double manipulability(const TrussGraph& g, const std::vector<NodeId>& controlled, double rcond) {
  return manipulability(build_system(g, controlled), rcond);
}

std::string dump_system(const KinematicsSystem& sys, const JacobianPair& jp) {
  std::ostringstream os;
  const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n", "  [", "]");
  os << "controlled:";
  for (NodeId v : sys.controlled) os << ' ' << v;
  os << "\nlinks:";
  for (const LinkRef& l : sys.links) os << ' ' << (l.connection ? "c" : "a") << l.from << '-' << l.to;
  os << "\nA (" << sys.matA.rows() << "x" << sys.matA.cols() << "):\n" << sys.matA.format(fmt);
  os << "\nB (" << sys.matB.rows() << "x" << sys.matB.cols() << "):\n" << sys.matB.format(fmt);
  os << "\nsigma_min: " << jp.sigma_min << "\nsigma_max: " << jp.sigma_max << "\n";
  return os.str();
}

}  // namespace vtt
