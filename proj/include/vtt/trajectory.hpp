// Planner output: node moves interleaved with split/merge events, plus the
// sub-state walk shared by telemetry and replay.
#pragma once

#include "vtt/truss.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vtt {

enum class RecordKind { Move, Split, Merge };

std::string to_string(RecordKind k);

// Move: `node` travels in a straight line from `from` to `to`.
// Split: `node` stays at `from`; the members (node, x) for x in `partition`
// move onto the new node `other`, placed at `to`.
// Merge: `other`, currently at `from`, joins `node` at `to` and disappears.
// `group` lists the nodes treated as controlled when checking manipulability.
struct Record {
  RecordKind kind = RecordKind::Move;
  NodeId node = -1;
  NodeId other = -1;
  Vec3 from = Vec3::Zero();
  Vec3 to = Vec3::Zero();
  std::vector<NodeId> group;
  std::vector<NodeId> partition;
};

struct Trajectory {
  std::vector<Record> records;

  bool empty() const { return records.empty(); }
  int count(RecordKind k) const;
  void append(const Trajectory& t) { records.insert(records.end(), t.records.begin(), t.records.end()); }
};

// Applies a whole record. Throws InputError when the record does not fit the
// current truss (unknown node, start position mismatch beyond 1e-9).
void apply_record(TrussGraph& g, const Record& r);

// Number of straight-line sub-states of a move at the given resolution.
int substeps(const Vec3& from, const Vec3& to, double resolution);

// Walks every sub-state: each move is cut into substeps() pieces, each event
// yields the state right after it. The callback receives the record index and
// the truss at that sub-state; returning false stops the walk.
void for_each_substate(TrussGraph g, const Trajectory& t, double resolution,
                       const std::function<bool(int, const TrussGraph&)>& visit);

TrussGraph final_state(TrussGraph g, const Trajectory& t);

enum class PlanFailure {
  None,
  InvalidStart,
  GoalInvalid,
  DifferentSubspace,
  SamplingExhausted,
  PairDeadlock,
  NoTransition,
};

std::string to_string(PlanFailure f);

struct PlanResult {
  Trajectory traj;
  PlanFailure failure = PlanFailure::None;
  std::string reason;

  bool ok() const { return failure == PlanFailure::None; }
  static PlanResult fail(PlanFailure f, std::string why) {
    PlanResult r;
    r.failure = f;
    r.reason = std::move(why);
    return r;
  }
};

}  // namespace vtt
