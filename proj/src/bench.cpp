#include "vtt/bench.hpp"

#include "vtt/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace vtt {

std::uint64_t trial_seed(std::uint64_t seed, int index) {
  // splitmix64 of the seed mixed with the trial index.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string trajectory_digest(const Trajectory& t) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : trajectory_to_json({}, t)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BenchReport run_bench(int trials, std::uint64_t seed, const TrialFn& trial) {
  if (trials < 1) throw InputError("bench needs at least one trial");
  BenchReport rep;
  for (int i = 0; i < trials; ++i) {
    TrialResult r;
    r.index = i;
    r.seed = trial_seed(seed, i);
    Rng rng(r.seed);
    const auto t0 = std::chrono::steady_clock::now();
    PlanResult res;
    try {
      res = trial(rng);
    } catch (const std::exception& e) {
      res = PlanResult::fail(PlanFailure::InvalidStart, e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.success = res.ok();
    r.digest = res.ok() ? trajectory_digest(res.traj) : "";
    r.note = res.ok() ? "" : to_string(res.failure) + ": " + res.reason;
    rep.trials.push_back(std::move(r));
  }
  summarize(rep);
  return rep;
}

void summarize(BenchReport& r) {
  const size_t n = r.trials.size();
  if (n == 0) return;
  double sum = 0;
  int ok = 0;
  r.min = r.trials[0].seconds;
  r.max = r.trials[0].seconds;
  for (const TrialResult& t : r.trials) {
    sum += t.seconds;
    ok += t.success ? 1 : 0;
    r.min = std::min(r.min, t.seconds);
    r.max = std::max(r.max, t.seconds);
  }
  r.mean = sum / n;
  double ss = 0;
  for (const TrialResult& t : r.trials) ss += (t.seconds - r.mean) * (t.seconds - r.mean);
  r.stddev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  r.success_rate = double(ok) / n;
}

std::string bench_to_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["trials"] = nlohmann::ordered_json::array();
  for (const TrialResult& t : r.trials) {
    j["trials"].push_back({{"index", t.index},
                           {"seed", t.seed},
                           {"success", t.success},
                           {"seconds", t.seconds},
                           {"digest", t.digest},
                           {"note", t.note}});
  }
  j["mean"] = r.mean;
  j["stddev"] = r.stddev;
  j["min"] = r.min;
  j["max"] = r.max;
  j["success_rate"] = r.success_rate;
  return j.dump(2);
}

std::string bench_to_text(const BenchReport& r) {
  std::ostringstream os;
  for (const TrialResult& t : r.trials) {
    os << "trial " << t.index << " seed " << t.seed << (t.success ? " ok " : " FAIL ") << t.seconds << " s";
    if (!t.note.empty()) os << " (" << t.note << ")";
    os << "\n";
  }
  os << "trials " << r.trials.size() << " success_rate " << r.success_rate << " mean " << r.mean << " s stddev "
     << r.stddev << " s min " << r.min << " s max " << r.max << " s\n";
  return os.str();
}

}  // namespace vtt
