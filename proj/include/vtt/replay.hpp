// Independent re-validation of a trajectory against the full brute-force
// constraint checks.
#pragma once

#include "vtt/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vtt {

struct ReplayIssue {
  int record = -1;  // -1 for the initial state
  int substate = 0;
  std::optional<ViolationKind> kind;  // empty for malformed records
  std::string detail;
  std::vector<NodeId> nodes;
};

struct ReplayReport {
  std::vector<ReplayIssue> issues;
  int substates = 0;

  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

// Validates the initial state and every sub-state at cfg.check_resolution.
// Manipulability is checked with each record's group as the controlled set.
ReplayReport replay(const TrussGraph& g, const PlannerConfig& cfg, const Trajectory& t);

}  // namespace vtt
