#ifndef VGANG_INTERFERENCE_HPP
#define VGANG_INTERFERENCE_HPP

#include "vgang/model.hpp"
#include "vgang/time.hpp"

namespace vgang {

/// Scheduling policies the interference model distinguishes.
enum class PolicyKind { RtGang, RtgSync, GangFtp, Threaded };

/**
 * Worst-case resource utilization of a task under some policy: the task's
 * own demand plus the maximal combined demand of tasks that can be
 * co-scheduled with it.
 */
struct ResourceUtilization {
  Demand value;
};

/**
 * Interference-adjusted WCET: ceil(c_iso * max(R, 1)).
 *
 * The resource is assumed contention-free until over-utilized, after which
 * execution slows linearly. Rounding is upward so the scaled value stays a
 * safe WCET bound.
 */
TimeValue scale_wcet(TimeValue c_iso, ResourceUtilization r);

/**
 * R for a gang member under one-gang-at-a-time scheduling of virtual
 * gangs: only co-members can interfere, so R is the member's demand plus
 * the combined demand of the rest of the gang. Throws TaskNotInGangError
 * if `task` is not a member.
 */
ResourceUtilization gang_resource_utilization(const Task& task,
                                              const VirtualGang& gang);

/**
 * R under gang fixed-priority scheduling: any subset of the other entities
 * that fits on the remaining m - h cores can co-run, and the worst one is
 * an exact maximum-demand knapsack over those entities.
 */
ResourceUtilization gangftp_resource_utilization(const Task& task,
                                                 const Taskset& ts);

/**
 * R under global fixed-priority thread scheduling: each entity contributes
 * h threads of demand r/h, and the m-1 highest-demand other threads
 * (siblings of the analyzed task included) co-run with the thread under
 * analysis.
 */
ResourceUtilization threaded_resource_utilization(const Task& task,
                                                  const Taskset& ts);

/**
 * Returns a copy of the taskset with c_eff populated on every entity
 * according to the policy's co-scheduling model. RtGang entities run alone
 * by design, so their WCETs are left untouched.
 */
Taskset apply_interference(const Taskset& ts, PolicyKind policy);

}  // namespace vgang

#endif  // VGANG_INTERFERENCE_HPP
