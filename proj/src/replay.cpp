#include "vtt/replay.hpp"

#include <sstream>

namespace vtt {

std::string ReplayReport::summary() const {
  std::ostringstream os;
  os << substates << " sub-states, " << issues.size() << " violations";
  for (const ReplayIssue& i : issues) {
    os << "\n  step " << i.record << " sub-state " << i.substate << ": "
       << (i.kind ? to_string(*i.kind) : std::string("malformed")) << ": " << i.detail;
  }
  return os.str();
}

namespace {

void check(const TrussGraph& g, const PlannerConfig& cfg, const std::vector<NodeId>& group, int record,
           int substate, ReplayReport& rep) {
  ValidationOptions opt;
  for (NodeId v : group) {
    if (g.has_node(v)) opt.controlled.push_back(v);
  }
  for (Violation& v : validate_truss(g, cfg, opt).violations) {
    rep.issues.push_back({record, substate, v.kind, std::move(v.detail), std::move(v.nodes)});
  }
}

}  // namespace

ReplayReport replay(const TrussGraph& g, const PlannerConfig& cfg, const Trajectory& t) {
  ReplayReport rep;
  check(g, cfg, {}, -1, 0, rep);
  int last = -1;
  int sub = 0;
  try {
    for_each_substate(g, t, cfg.check_resolution, [&](int i, const TrussGraph& h) {
      sub = i == last ? sub + 1 : 1;
      last = i;
      ++rep.substates;
      check(h, cfg, t.records[i].group, i, sub, rep);
      return true;
    });
  } catch (const std::exception& e) {
    rep.issues.push_back({last + 1, 0, std::nullopt, e.what(), {}});
  }
  return rep;
}

}  // namespace vtt
