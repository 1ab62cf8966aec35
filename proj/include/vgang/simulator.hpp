#ifndef VGANG_SIMULATOR_HPP
#define VGANG_SIMULATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "vgang/model.hpp"

namespace vgang {

/// Scheduling policies the simulator implements.
enum class SimPolicy {
  RtGang,       // one gang at a time, tasks as their own gangs
  RtgSync,      // one gang at a time, synchronously released virtual gangs
  UnsyncVgang,  // virtual gangs whose members release at their own offsets
  GangFtp,      // gang fixed-priority: greedy core filling by priority
  Threaded      // global preemptive fixed-priority over independent threads
};

enum class SimEventKind {
  Release,
  Start,
  Preempt,
  Resume,
  Complete,
  DeadlineMiss
};

const char* to_string(SimEventKind kind);

/**
 * One scheduling event. An entity runs between a Start/Resume and the next
 * Preempt/Complete; `cores` is the core set it holds from this event on.
 */
struct SimEvent {
  TimeValue time;
  SimEventKind kind;
  std::string id;
  std::vector<int> cores;
};

struct SimTrace {
  std::vector<SimEvent> events;
  TimeValue horizon;
  int m = 0;
};

/**
 * Simulation parameters. `release_offsets` maps entity ids (member ids for
 * unsynchronized gangs) to their first release; everything else releases
 * at t = 0, the critical instant. Preemption is instantaneous and free by
 * default; `preemption_cost` adds work to a preempted job if set.
 */
struct SimConfig {
  SimPolicy policy = SimPolicy::RtGang;
  TimeValue horizon;
  std::map<std::string, TimeValue> release_offsets;
  bool preemptive = true;
  TimeValue preemption_cost;
};

struct HorizonInfo {
  TimeValue horizon;
  bool capped = false;  // hyperperiod exceeded the cap and was clamped
};

/// One hyperperiod (LCM of periods), clamped to `cap_ticks` but never
/// below the largest period. Callers should warn when `capped` is set.
HorizonInfo default_horizon(const Taskset& ts,
                            std::uint64_t cap_ticks = 1'000'000);

/**
 * Event-driven simulation of the taskset. Jobs release strictly before
 * the horizon; completions and deadline checks landing exactly on the
 * horizon instant are still recorded. Priorities must be assigned. Jobs
 * that miss their implicit deadline emit a DeadlineMiss event at the
 * deadline instant and keep running; later releases of the same entity
 * queue up behind them.
 */
SimTrace simulate(const Taskset& ts, const SimConfig& cfg);

/// Latest first-job completion minus earliest release. Throws
/// IncompleteTraceError if some released entity never completed a job.
TimeValue makespan(const SimTrace& trace);

struct MissStats {
  std::map<std::string, int> misses_by_entity;
  int total_misses = 0;
  TimeValue max_lateness;  // over jobs whose completion the trace captured
};

MissStats miss_stats(const SimTrace& trace);

/// One event per line: {"t":int,"kind":str,"id":str,"cores":[int]}.
void write_trace_jsonl(const SimTrace& trace, std::ostream& out);

/// Gantt segments "entity,start,end,cores" with cores joined by '|'.
void write_gantt_csv(const SimTrace& trace, std::ostream& out);

}  // namespace vgang

#endif  // VGANG_SIMULATOR_HPP
