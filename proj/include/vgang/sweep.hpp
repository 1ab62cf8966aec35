#ifndef VGANG_SWEEP_HPP
#define VGANG_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vgang/gangform.hpp"
#include "vgang/generator.hpp"
#include "vgang/model.hpp"

namespace vgang {

/**
 * Policies compared by the schedulability experiments. RT-Gang and the
 * two RTG-Sync variants are judged by exact response-time analysis; the
 * SIM-suffixed policies have no closed-form analysis here and are judged
 * by hyperperiod simulation feasibility, a necessary condition only, and
 * are labeled accordingly in all output.
 */
enum class SweepPolicy {
  RtGang,
  RtgSyncBfc,
  RtgSyncGpc,
  GangFtpSim,
  ThreadedSim
};

const char* to_string(SweepPolicy policy);
SweepPolicy sweep_policy_from_string(const std::string& name);
std::vector<SweepPolicy> all_sweep_policies();

/// Experiment grid: acceptance ratio per (utilization, policy) point.
struct SweepSpec {
  int m = 8;
  TasksetType type = TasksetType::Mixed;
  Demand util_min{500'000};
  Demand util_max{0};  // 0 means "up to m"
  Demand util_step{250'000};
  int tasksets_per_point = 500;
  std::vector<SweepPolicy> policies;  // empty means all five
  bool interference = false;
  std::optional<int> n_per_period;  // overrides the [2,5] group size
  std::uint64_t seed = 0;
  Demand tolerance = kDefaultTolerance;
  std::uint64_t config_cap = kDefaultConfigCap;
  std::uint64_t sim_horizon_cap = 100'000;
  int workers = 0;  // 0 picks the hardware concurrency
};

struct SweepRow {
  Demand util;
  SweepPolicy policy;
  TasksetType type;
  bool interference;
  double accept_ratio;
  int n;
};

/**
 * Schedulability verdict for one generated taskset under one policy.
 * RTG-Sync verdicts form virtual gangs per same-period candidate set
 * first (brute force falls back to the greedy heuristic when the
 * configuration space exceeds `config_cap`).
 */
bool policy_accepts(const Taskset& tasks, SweepPolicy policy,
                    bool interference, Demand tolerance = kDefaultTolerance,
                    std::uint64_t config_cap = kDefaultConfigCap,
                    std::uint64_t sim_horizon_cap = 100'000);

/// Runs the grid over a worker pool; rows come back ordered by (util,
/// policy) regardless of scheduling, so output is deterministic.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// CSV: util,policy,type,interference,accept_ratio,n
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace vgang

#endif  // VGANG_SWEEP_HPP
