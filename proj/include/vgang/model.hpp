#ifndef VGANG_MODEL_HPP
#define VGANG_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "vgang/time.hpp"

namespace vgang {

/**
 * A rigid periodic gang task: needs `h` cores simultaneously for its whole
 * execution, every `period` ticks. `c_iso` is the WCET measured in
 * isolation; `c_eff` is the interference-adjusted WCET once a policy model
 * has been applied. Deadlines are implicit (equal to the period).
 *
 * All model types are immutable by convention once built: nothing in the
 * toolkit mutates a Task after construction, so instances can be shared
 * freely across threads.
 */
struct Task {
  std::string id;
  int h = 1;
  TimeValue c_iso;
  std::optional<TimeValue> c_eff;
  TimeValue period;
  Demand demand;                 // resource-demand factor in [0, 1]
  std::optional<int> priority;   // higher value = higher priority

  /// WCET the analyses use: interference-adjusted if known, else isolation.
  TimeValue wcet() const { return c_eff.value_or(c_iso); }
};

/// Throws ModelError if the task violates a model invariant.
void validate_task(const Task& task);

/**
 * A group of same-period tasks statically linked and scheduled as one gang
 * entity. The gang needs the sum of its members' cores and runs for the
 * WCET of its longest member.
 */
struct VirtualGang {
  std::string id;
  std::vector<Task> members;
  int h = 0;                     // sum of member core counts
  TimeValue c_iso;               // max over member isolation WCETs
  std::optional<TimeValue> c_eff;
  TimeValue period;
  Demand demand;                 // sum of member demand factors
  std::optional<int> priority;

  TimeValue wcet() const { return c_eff.value_or(c_iso); }
};

/**
 * Builds a virtual gang from `members` on an `m`-core platform.
 *
 * The default id is the member ids joined with '+', which keeps formation
 * output deterministic. Throws PeriodMismatchError if the members do not
 * share one period and NotViableError if their cores sum past m.
 */
VirtualGang make_virtual_gang(std::vector<Task> members, int m);
VirtualGang make_virtual_gang(std::vector<Task> members, int m,
                              std::string id);

/// A scheduling entity: either a plain task or a virtual gang.
using Entity = std::variant<Task, VirtualGang>;

const std::string& entity_id(const Entity& e);
int entity_h(const Entity& e);
TimeValue entity_c_iso(const Entity& e);
TimeValue entity_wcet(const Entity& e);
TimeValue entity_period(const Entity& e);
Demand entity_demand(const Entity& e);
std::optional<int> entity_priority(const Entity& e);
void set_entity_priority(Entity& e, int priority);

/**
 * One way of partitioning a candidate set into viable virtual gangs.
 * `completion_time` is the sum of the gangs' WCETs (interference-adjusted
 * where measured); `discovery_index` records the enumeration order, which
 * breaks ranking ties.
 */
struct SystemConfig {
  std::vector<VirtualGang> gangs;
  TimeValue completion_time;
  std::uint64_t discovery_index = 0;

  std::size_t gang_count() const { return gangs.size(); }

  /// Ranking key: shorter completion first, then fewer gangs, then
  /// earlier discovery.
  std::tuple<std::uint64_t, std::size_t, std::uint64_t> rank_key() const {
    return {completion_time.ticks(), gangs.size(), discovery_index};
  }
};

/// Sum of gang WCETs (c_eff where present, else c_iso).
TimeValue config_completion_time(const std::vector<VirtualGang>& gangs);

/**
 * A set of scheduling entities on an m-core platform; the unit of analysis
 * and simulation. `util_target` is generator bookkeeping.
 */
struct Taskset {
  std::vector<Entity> entities;
  int m = 1;
  std::optional<Demand> util_target;
};

/// Throws ModelError if any entity violates h <= m or its own invariants.
void validate_taskset(const Taskset& ts);

/// Exact total utilization sum(wcet_iso * h / period), rounded half-up to
/// micro units.
Demand total_utilization(const Taskset& ts);

}  // namespace vgang

#endif  // VGANG_MODEL_HPP
