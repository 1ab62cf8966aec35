#ifndef VGANG_GANGFORM_HPP
#define VGANG_GANGFORM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vgang/model.hpp"

namespace vgang {

/// Same-period tasks eligible for virtual-gang formation on m cores.
struct CandidateSet {
  std::vector<Task> tasks;
  int m = 1;
};

/// Validates and builds a candidate set (non-empty, common period, each
/// task viable on its own).
CandidateSet make_candidate_set(std::vector<Task> tasks, int m);

/// Splits a taskset of plain tasks into candidate sets by exact period
/// equality, ordered by ascending period. No period harmonization is
/// attempted. Throws SchemaError if the taskset already contains gangs.
std::vector<CandidateSet> group_by_period(const Taskset& ts);

/**
 * Source of interference-adjusted gang WCETs.
 *
 * On real hardware this is a measurement campaign; in this toolkit it is
 * usually the synthetic demand model. Formation algorithms memoize calls
 * per gang member-set, so an oracle is consulted at most once per distinct
 * gang within one formation run.
 */
class InterferenceOracle {
 public:
  virtual ~InterferenceOracle() = default;
  virtual TimeValue effective_wcet(const VirtualGang& gang) = 0;
};

/// Ideal case: co-running members do not interfere at all.
class ZeroInterferenceOracle final : public InterferenceOracle {
 public:
  TimeValue effective_wcet(const VirtualGang& gang) override {
    return gang.c_iso;
  }
};

/// Synthetic demand model: the gang WCET scales with the combined
/// resource demand of its members (see interference.hpp).
class SyntheticInterferenceOracle final : public InterferenceOracle {
 public:
  TimeValue effective_wcet(const VirtualGang& gang) override;
};

/// Stirling number of the second kind S(n, k): ways to partition n items
/// into k non-empty blocks. Throws CountOverflowError past 64 bits.
std::uint64_t stirling2(unsigned n, unsigned k);

/// Upper bound on the number of system configurations for n tasks on m
/// cores: sum of S(n, k) for k from ceil(n/m) to n. Throws
/// CountOverflowError past 64 bits.
std::uint64_t config_count_bound(unsigned n, unsigned m);

/**
 * Enumerates every partition of the candidate set into viable virtual
 * gangs (each gang's core sum fits on m), exactly once. Discovery order
 * starts at the all-singletons configuration and proceeds to coarser ones;
 * discovery indices are assigned in that order.
 */
std::vector<SystemConfig> generate_system_configs(const CandidateSet& cs);

/// Configurations ordered best-first by rank key (completion time, gang
/// count, discovery index).
struct RankedConfigs {
  std::vector<SystemConfig> configs;
};

RankedConfigs rank_configs(std::vector<SystemConfig> configs);

struct FormationStats {
  std::string algorithm;
  int iterations = 0;    // interference evaluation rounds
  int oracle_calls = 0;  // distinct gangs measured
  Demand tolerance;
};

struct BruteForceResult {
  SystemConfig config;
  FormationStats stats;
};

struct GreedyResult {
  std::vector<VirtualGang> gangs;
  FormationStats stats;
};

inline constexpr std::uint64_t kDefaultConfigCap = 10'000'000;
inline constexpr Demand kDefaultTolerance{200'000};  // 20%

/**
 * Brute-force gang formation.
 *
 * Enumerates all configurations, ranks them by isolation completion time,
 * then iteratively refines: measure the best configuration's gangs through
 * the oracle; accept if the measured completion stays within `tolerance`
 * of its pre-measurement value, otherwise re-rank everything that contains
 * a measured gang and move to the new best. Oracle results are cached by
 * member-set, so a fully-measured configuration that gets re-selected is
 * final. Throws ConfigSpaceTooLargeError when the Eq.-style count bound
 * exceeds `config_cap`; callers should fall back to the greedy heuristic.
 */
BruteForceResult gang_formation_bruteforce(
    const CandidateSet& cs, InterferenceOracle& oracle,
    Demand tolerance = kDefaultTolerance,
    std::uint64_t config_cap = kDefaultConfigCap);

/**
 * Greedy packing heuristic.
 *
 * Sorts tasks by descending isolation WCET (ties: larger core count, then
 * id), repeatedly pops the anchor and packs every later task that still
 * fits. Each formed gang is measured once; a gang whose measured WCET
 * exceeds tolerance is rejected and its members fall back to singleton
 * gangs. No iterative step.
 */
GreedyResult gang_formation_greedy(const CandidateSet& cs,
                                   InterferenceOracle& oracle,
                                   Demand tolerance = kDefaultTolerance);

}  // namespace vgang

#endif  // VGANG_GANGFORM_HPP
