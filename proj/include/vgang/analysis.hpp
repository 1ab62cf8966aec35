#ifndef VGANG_ANALYSIS_HPP
#define VGANG_ANALYSIS_HPP

#include <map>
#include <string>
#include <vector>

#include "vgang/model.hpp"

namespace vgang {

/// Result of the response-time fixed point for one entity.
struct ResponseTime {
  TimeValue value;
  bool converged = false;
  int iterations = 0;
};

/// Aggregate schedulability verdict: schedulable iff every entity's
/// response time converged at or below its period.
struct SchedVerdict {
  bool schedulable = false;
  std::map<std::string, ResponseTime> per_entity;
};

/**
 * Rate-monotonic priority assignment: shorter period wins; equal periods
 * break ties by smaller WCET (c_eff if present), then by id. Returns a
 * copy of the taskset with distinct priorities populated (higher value =
 * higher priority).
 */
Taskset assign_priorities(const Taskset& ts);

/**
 * Worst-case response time of `entity` against the given higher-priority
 * entities, by the standard fixed-point iteration
 *
 *   R^{n+1} = C + sum_j ceil(R^n / T_j) * C_j
 *
 * seeded with R^0 = C. Iteration stops at the fixed point or as soon as R
 * exceeds the entity's period (diverged: converged = false). One-gang-at-
 * a-time scheduling serializes gang entities, which is what makes this
 * unicore analysis exact for them.
 */
ResponseTime response_time(const Entity& entity,
                           const std::vector<Entity>& higher_priority);

/// Applies response_time to every entity against its higher-priority set.
/// Requires priorities to be assigned.
SchedVerdict schedulability_test(const Taskset& ts);

}  // namespace vgang

#endif  // VGANG_ANALYSIS_HPP
