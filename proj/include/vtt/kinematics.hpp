// Link-vector kinematics of a set of controlled nodes.
#pragma once

#include "vtt/truss.hpp"

#include <string>
#include <vector>

namespace vtt {

// One column block of the link velocity vector.
struct LinkRef {
  NodeId from = 0;  // controlled node
  NodeId to = 0;    // fixed neighbor, or the second controlled node of a connection
  bool connection = false;
};

struct KinematicsSystem {
  std::vector<NodeId> controlled;
  std::set<NodeId> fixed;
  Eigen::MatrixXd matA;
  Eigen::MatrixXd matB;
  // Attachment links first (grouped per controlled node in order), then
  // connection links sorted by (min id, max id).
  std::vector<LinkRef> links;
  int attachments = 0;
  int connections = 0;
};

struct JacobianPair {
  Eigen::MatrixXd j_ba;
  Eigen::MatrixXd j_ab;
  double sigma_min = 0;
  double sigma_max = 0;
};

// Attachment rows are (q_v - q_u)^T for each fixed neighbor u of controlled v,
// with the link vector (q_u - q_v) in the matching row of B. A connection
// between controlled nodes v < w adds the band [+I at v, -I at w] and an
// identity block in B for the connection vector (q_v - q_w).
KinematicsSystem build_system(const TrussGraph& g, const std::vector<NodeId>& controlled);

// Moore-Penrose pseudo-inverse via SVD; singular values below
// rcond * sigma_max are dropped.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rcond = 1e-10);

JacobianPair jacobians(const KinematicsSystem& sys, double rcond = 1e-10);

double manipulability(const KinematicsSystem& sys, double rcond = 1e-10);

// Shortcut used on hot paths.
double manipulability(const TrussGraph& g, const std::vector<NodeId>& controlled,
                      double rcond = 1e-10);

// Plain-text matrix dump for debugging.
std::string dump_system(const KinematicsSystem& sys, const JacobianPair& jp);

}  // namespace vtt
