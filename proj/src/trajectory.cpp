#include "vtt/trajectory.hpp"

#include <cmath>

namespace vtt {

std::string to_string(RecordKind k) {
  switch (k) {
    case RecordKind::Move: return "move";
    case RecordKind::Split: return "split";
    case RecordKind::Merge: return "merge";
  }
  return "?";
}

std::string to_string(PlanFailure f) {
  switch (f) {
    case PlanFailure::None: return "none";
    case PlanFailure::InvalidStart: return "invalid start";
    case PlanFailure::GoalInvalid: return "goal invalid";
    case PlanFailure::DifferentSubspace: return "different subspace";
    case PlanFailure::SamplingExhausted: return "sampling exhausted";
    case PlanFailure::PairDeadlock: return "pair deadlock";
    case PlanFailure::NoTransition: return "no transition";
  }
  return "?";
}

int Trajectory::count(RecordKind k) const {
  int n = 0;
  for (const Record& r : records) n += r.kind == k ? 1 : 0;
  return n;
}

namespace {

void expect_at(const TrussGraph& g, NodeId v, const Vec3& p) {
  if (!g.has_node(v)) throw InputError("record names unknown node " + std::to_string(v));
  if ((g.pos(v) - p).norm() > 1e-9) {
    throw InputError("record start of node " + std::to_string(v) + " does not match its position");
  }
}

}  // namespace

void apply_record(TrussGraph& g, const Record& r) {
  switch (r.kind) {
    case RecordKind::Move:
      expect_at(g, r.node, r.from);
      g.set_pos(r.node, r.to);
      break;
    case RecordKind::Split: {
      expect_at(g, r.node, r.from);
      split_node(g, r.node, std::set<NodeId>(r.partition.begin(), r.partition.end()), r.to, r.other);
      break;
    }
    case RecordKind::Merge:
      expect_at(g, r.other, r.from);
      expect_at(g, r.node, r.to);
      merge_nodes(g, r.node, r.other);
      break;
  }
}

int substeps(const Vec3& from, const Vec3& to, double resolution) {
  const double len = (to - from).norm();
  return std::max(1, static_cast<int>(std::ceil(len / resolution - 1e-12)));
}

void for_each_substate(TrussGraph g, const Trajectory& t, double resolution,
                       const std::function<bool(int, const TrussGraph&)>& visit) {
  for (size_t i = 0; i < t.records.size(); ++i) {
    const Record& r = t.records[i];
    if (r.kind == RecordKind::Move) {
      expect_at(g, r.node, r.from);
      const int n = substeps(r.from, r.to, resolution);
      for (int k = 1; k <= n; ++k) {
        g.set_pos(r.node, k == n ? r.to : Vec3(r.from + (r.to - r.from) * (double(k) / n)));
        if (!visit(static_cast<int>(i), g)) return;
      }
    } else {
      apply_record(g, r);
      if (!visit(static_cast<int>(i), g)) return;
    }
  }
}

TrussGraph final_state(TrussGraph g, const Trajectory& t) {
  for (const Record& r : t.records) apply_record(g, r);
  return g;
}

}  // namespace vtt
