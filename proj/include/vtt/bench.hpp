// Seeded repeated trials with timing statistics.
#pragma once

#include "vtt/geometry_planner.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace vtt {

struct TrialResult {
  int index = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double seconds = 0;
  std::string digest;  // fingerprint of the produced trajectory
  std::string note;
};

struct BenchReport {
  std::vector<TrialResult> trials;
  double mean = 0;
  double stddev = 0;
  double min = 0;
  double max = 0;
  double success_rate = 0;
};

// Seed of trial `index`, independent of how trials are scheduled.
std::uint64_t trial_seed(std::uint64_t seed, int index);

std::string trajectory_digest(const Trajectory& t);

// One trial: plans with the given generator and returns the result.
using TrialFn = std::function<PlanResult(Rng&)>;

BenchReport run_bench(int trials, std::uint64_t seed, const TrialFn& trial);

// Mean, sample standard deviation, min and max of the wall times plus the
// success rate, recomputed from the rows.
void summarize(BenchReport& r);

std::string bench_to_json(const BenchReport& r);
std::string bench_to_text(const BenchReport& r);

}  // namespace vtt
