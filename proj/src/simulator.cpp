#include "vgang/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "vgang/errors.hpp"

namespace vgang {

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

// One schedulable unit: a rigid core block that executes for `wcet` ticks.
// Rigid entities have one sub, threaded entities one per thread, and
// unsynchronized gangs one per member (with its release offset inside the
// gang's job).
struct SubSpec {
  int cores_needed = 1;
  std::uint64_t wcet = 0;
  std::uint64_t rel_offset = 0;
};

struct Job {
  std::uint64_t release = 0;
  std::uint64_t deadline = 0;
  std::vector<std::uint64_t> remaining;  // per sub
  int incomplete = 0;
  bool started = false;
  bool missed = false;
};

struct Actor {
  std::string id;
  int priority = 0;
  std::uint64_t period = 0;
  std::uint64_t next_release = 0;
  int total_h = 0;
  std::vector<SubSpec> subs;
  std::deque<Job> jobs;                     // front = executing job
  std::vector<std::vector<int>> sub_cores;  // empty = sub not running

  bool ready() const { return !jobs.empty() && jobs.front().incomplete > 0; }

  bool any_running() const {
    for (const auto& cores : sub_cores) {
      if (!cores.empty()) {
        return true;
      }
    }
    return false;
  }

  std::vector<int> held_cores() const {
    std::vector<int> all;
    for (const auto& cores : sub_cores) {
      all.insert(all.end(), cores.begin(), cores.end());
    }
    std::sort(all.begin(), all.end());
    return all;
  }
};

std::uint64_t offset_for(const SimConfig& cfg, const std::string& id) {
  auto it = cfg.release_offsets.find(id);
  return it == cfg.release_offsets.end() ? 0 : it->second.ticks();
}

std::vector<Actor> build_actors(const Taskset& ts, const SimConfig& cfg) {
  std::vector<Actor> actors;
  actors.reserve(ts.entities.size());
  for (const Entity& e : ts.entities) {
    Actor actor;
    actor.id = entity_id(e);
    if (!entity_priority(e)) {
      throw InvalidConfigError("entity " + actor.id +
                               " has no priority assigned");
    }
    actor.priority = *entity_priority(e);
    actor.period = entity_period(e).ticks();
    actor.total_h = entity_h(e);

    const VirtualGang* gang = std::get_if<VirtualGang>(&e);
    if (cfg.policy == SimPolicy::Threaded) {
      for (int i = 0; i < entity_h(e); ++i) {
        actor.subs.push_back({1, entity_wcet(e).ticks(), 0});
      }
      actor.next_release = offset_for(cfg, actor.id);
    } else if (cfg.policy == SimPolicy::UnsyncVgang && gang != nullptr) {
      std::uint64_t min_offset = kNever;
      for (const Task& member : gang->members) {
        min_offset = std::min(min_offset, offset_for(cfg, member.id));
      }
      for (const Task& member : gang->members) {
        actor.subs.push_back({member.h, member.wcet().ticks(),
                              offset_for(cfg, member.id) - min_offset});
      }
      actor.next_release = min_offset;
    } else {
      actor.subs.push_back({entity_h(e), entity_wcet(e).ticks(), 0});
      actor.next_release = offset_for(cfg, actor.id);
    }
    actor.sub_cores.resize(actor.subs.size());
    actors.push_back(std::move(actor));
  }
  return actors;
}

bool one_gang_at_a_time(SimPolicy policy) {
  return policy == SimPolicy::RtGang || policy == SimPolicy::RtgSync ||
         policy == SimPolicy::UnsyncVgang;
}

// Engine: event-driven advance over release, completion and member-arrival
// instants. All container iteration is in actor-index order, so traces are
// deterministic.
class Simulation {
 public:
  Simulation(const Taskset& ts, const SimConfig& cfg)
      : cfg_(cfg), m_(ts.m), actors_(build_actors(ts, cfg)) {
    core_used_.assign(m_, false);
    last_traced_.resize(actors_.size());
  }

  // Jobs release strictly before the horizon; completions and deadline
  // checks landing exactly on the horizon instant are still recorded, so a
  // hyperperiod-aligned run captures its boundary completions and misses.
  SimTrace run() {
    const std::uint64_t horizon = cfg_.horizon.ticks();
    std::uint64_t now = 0;
    while (true) {
      std::uint64_t next = next_event_after(now);
      if (next == kNever || next > horizon) {
        break;
      }
      std::uint64_t dt = next - now;
      now = next;
      advance_running(dt);
      handle_completions(now);
      handle_releases(now, horizon);
      if (now < horizon) {
        dispatch(now);
      }
    }
    SimTrace trace;
    trace.events = std::move(events_);
    trace.horizon = cfg_.horizon;
    trace.m = m_;
    return trace;
  }

 private:
  std::uint64_t next_event_after(std::uint64_t now) {
    std::uint64_t next = kNever;
    for (const Actor& actor : actors_) {
      next = std::min(next, actor.next_release);
      if (!actor.jobs.empty()) {
        const Job& job = actor.jobs.front();
        for (std::size_t s = 0; s < actor.subs.size(); ++s) {
          if (!actor.sub_cores[s].empty()) {
            next = std::min(next, now + job.remaining[s]);
          } else if (job.remaining[s] > 0) {
            std::uint64_t avail = job.release + actor.subs[s].rel_offset;
            if (avail > now) {
              next = std::min(next, avail);
            }
          }
        }
      }
    }
    return next;
  }

  void advance_running(std::uint64_t dt) {
    for (Actor& actor : actors_) {
      if (actor.jobs.empty()) {
        continue;
      }
      Job& job = actor.jobs.front();
      for (std::size_t s = 0; s < actor.subs.size(); ++s) {
        if (!actor.sub_cores[s].empty()) {
          assert(job.remaining[s] >= dt);
          job.remaining[s] -= dt;
        }
      }
    }
  }

  void handle_completions(std::uint64_t now) {
    for (std::size_t a = 0; a < actors_.size(); ++a) {
      Actor& actor = actors_[a];
      if (actor.jobs.empty()) {
        continue;
      }
      Job& job = actor.jobs.front();
      bool any_finished = false;
      for (std::size_t s = 0; s < actor.subs.size(); ++s) {
        if (!actor.sub_cores[s].empty() && job.remaining[s] == 0) {
          release_cores(actor.sub_cores[s]);
          actor.sub_cores[s].clear();
          --job.incomplete;
          any_finished = true;
        }
      }
      if (any_finished && job.incomplete == 0) {
        // The segment the trace has open ends here.
        emit(now, SimEventKind::Complete, actor.id, last_traced_[a]);
        last_traced_[a].clear();
        actor.jobs.pop_front();
      }
    }
  }

  void handle_releases(std::uint64_t now, std::uint64_t horizon) {
    for (Actor& actor : actors_) {
      if (actor.next_release != now) {
        continue;
      }
      // Implicit deadlines: a job's deadline is exactly the next release
      // instant of its entity, so misses surface here.
      for (Job& job : actor.jobs) {
        if (job.deadline == now && job.incomplete > 0 && !job.missed) {
          job.missed = true;
          emit(now, SimEventKind::DeadlineMiss, actor.id,
               actor.held_cores());
        }
      }
      if (now < horizon) {
        Job job;
        job.release = now;
        job.deadline = now + actor.period;
        job.remaining.reserve(actor.subs.size());
        for (const SubSpec& sub : actor.subs) {
          job.remaining.push_back(sub.wcet);
        }
        job.incomplete = static_cast<int>(actor.subs.size());
        actor.jobs.push_back(std::move(job));
        emit(now, SimEventKind::Release, actor.id, {});
      }
      actor.next_release =
          (actor.next_release + actor.period > horizon)
              ? kNever
              : actor.next_release + actor.period;
    }
  }

  // Sub s of actor's front job can execute at `now`.
  bool sub_available(const Actor& actor, std::size_t s,
                     std::uint64_t now) const {
    const Job& job = actor.jobs.front();
    return job.remaining[s] > 0 &&
           job.release + actor.subs[s].rel_offset <= now;
  }

  std::vector<std::pair<int, int>> desired_run_set(std::uint64_t now) const {
    std::vector<std::pair<int, int>> desired;
    const int n = static_cast<int>(actors_.size());

    if (one_gang_at_a_time(cfg_.policy)) {
      int winner = -1;
      if (!cfg_.preemptive) {
        for (int a = 0; a < n; ++a) {
          if (actors_[a].any_running() && actors_[a].ready()) {
            winner = a;
            break;
          }
        }
      }
      if (winner < 0) {
        for (int a = 0; a < n; ++a) {
          if (actors_[a].ready() &&
              (winner < 0 ||
               actors_[a].priority > actors_[winner].priority)) {
            winner = a;
          }
        }
      }
      if (winner >= 0) {
        const Actor& actor = actors_[winner];
        for (std::size_t s = 0; s < actor.subs.size(); ++s) {
          if (sub_available(actor, s, now)) {
            desired.emplace_back(winner, static_cast<int>(s));
          }
        }
      }
      return desired;
    }

    if (cfg_.policy == SimPolicy::GangFtp) {
      std::vector<int> order(actors_.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return actors_[a].priority > actors_[b].priority;
      });
      int free = m_;
      std::vector<bool> taken(actors_.size(), false);
      if (!cfg_.preemptive) {
        for (int a = 0; a < n; ++a) {
          if (actors_[a].any_running() && actors_[a].ready()) {
            taken[a] = true;
            free -= actors_[a].total_h;
            desired.emplace_back(a, 0);
          }
        }
      }
      for (int a : order) {
        if (taken[a] || !actors_[a].ready() ||
            !sub_available(actors_[a], 0, now)) {
          continue;
        }
        if (actors_[a].total_h <= free) {
          free -= actors_[a].total_h;
          desired.emplace_back(a, 0);
        }
        // Gangs that do not fit are skipped; the scan continues below
        // them on the remaining cores.
      }
      std::sort(desired.begin(), desired.end());
      return desired;
    }

    // Threaded: global fixed-priority over individual threads.
    std::vector<std::pair<int, int>> units;
    for (int a = 0; a < n; ++a) {
      if (!actors_[a].ready()) {
        continue;
      }
      for (std::size_t s = 0; s < actors_[a].subs.size(); ++s) {
        if (sub_available(actors_[a], s, now)) {
          units.emplace_back(a, static_cast<int>(s));
        }
      }
    }
    std::stable_sort(units.begin(), units.end(),
                     [&](const auto& x, const auto& y) {
                       return actors_[x.first].priority >
                              actors_[y.first].priority;
                     });
    if (!cfg_.preemptive) {
      std::stable_partition(units.begin(), units.end(), [&](const auto& u) {
        return !actors_[u.first].sub_cores[u.second].empty();
      });
    }
    if (units.size() > static_cast<std::size_t>(m_)) {
      units.resize(static_cast<std::size_t>(m_));
    }
    return units;
  }

  void dispatch(std::uint64_t now) {
    std::vector<std::pair<int, int>> desired = desired_run_set(now);
    auto is_desired = [&](int a, int s) {
      return std::find(desired.begin(), desired.end(),
                       std::make_pair(a, s)) != desired.end();
    };

    // Stop units that lost their cores; charge the preemption hook.
    for (std::size_t a = 0; a < actors_.size(); ++a) {
      Actor& actor = actors_[a];
      for (std::size_t s = 0; s < actor.subs.size(); ++s) {
        if (!actor.sub_cores[s].empty() &&
            !is_desired(static_cast<int>(a), static_cast<int>(s))) {
          release_cores(actor.sub_cores[s]);
          actor.sub_cores[s].clear();
          actor.jobs.front().remaining[s] += cfg_.preemption_cost.ticks();
        }
      }
    }
    // Start newly scheduled units on the lowest free cores.
    for (const auto& [a, s] : desired) {
      Actor& actor = actors_[static_cast<std::size_t>(a)];
      if (actor.sub_cores[s].empty()) {
        actor.sub_cores[s] = claim_cores(actor.subs[s].cores_needed);
      }
    }

    // Entity-level transitions against what the trace last saw, in actor
    // order, preemptions before starts so core reuse reads sanely. A
    // core-set change of a still-running entity (thread finished early,
    // member arrived) closes the segment and reopens it.
    std::vector<SimEvent> starts;
    for (std::size_t a = 0; a < actors_.size(); ++a) {
      Actor& actor = actors_[a];
      std::vector<int> current = actor.held_cores();
      if (last_traced_[a] == current) {
        continue;
      }
      if (!last_traced_[a].empty()) {
        emit(now, SimEventKind::Preempt, actor.id, last_traced_[a]);
      }
      if (!current.empty()) {
        Job& job = actor.jobs.front();
        SimEventKind kind =
            job.started ? SimEventKind::Resume : SimEventKind::Start;
        job.started = true;
        starts.push_back({TimeValue(now), kind, actor.id, current});
      }
      last_traced_[a] = std::move(current);
    }
    for (SimEvent& e : starts) {
      events_.push_back(std::move(e));
    }
  }

  std::vector<int> claim_cores(int count) {
    std::vector<int> cores;
    cores.reserve(count);
    for (int c = 0; c < m_ && static_cast<int>(cores.size()) < count; ++c) {
      if (!core_used_[c]) {
        core_used_[c] = true;
        cores.push_back(c);
      }
    }
    assert(static_cast<int>(cores.size()) == count);
    return cores;
  }

  void release_cores(const std::vector<int>& cores) {
    for (int c : cores) {
      core_used_[c] = false;
    }
  }

  void emit(std::uint64_t t, SimEventKind kind, const std::string& id,
            std::vector<int> cores) {
    events_.push_back({TimeValue(t), kind, id, std::move(cores)});
  }

  SimConfig cfg_;
  int m_;
  std::vector<Actor> actors_;
  std::vector<bool> core_used_;
  std::vector<std::vector<int>> last_traced_;  // cores per the trace's view
  std::vector<SimEvent> events_;
};

}  // namespace

const char* to_string(SimEventKind kind) {
  switch (kind) {
    case SimEventKind::Release:
      return "RELEASE";
    case SimEventKind::Start:
      return "START";
    case SimEventKind::Preempt:
      return "PREEMPT";
    case SimEventKind::Resume:
      return "RESUME";
    case SimEventKind::Complete:
      return "COMPLETE";
    case SimEventKind::DeadlineMiss:
      return "DEADLINE_MISS";
  }
  return "?";
}

HorizonInfo default_horizon(const Taskset& ts, std::uint64_t cap_ticks) {
  using Wide = unsigned __int128;
  Wide lcm = 1;
  std::uint64_t max_period = 0;
  bool capped = false;
  for (const Entity& e : ts.entities) {
    std::uint64_t p = entity_period(e).ticks();
    max_period = std::max(max_period, p);
    Wide g = std::gcd(static_cast<std::uint64_t>(lcm % p), p);
    lcm = lcm / g * p;
    if (lcm > cap_ticks) {
      capped = true;
      lcm = cap_ticks;
      // keep folding periods in so max_period is still collected
    }
  }
  if (ts.entities.empty()) {
    return {TimeValue(0), false};
  }
  std::uint64_t horizon =
      std::max(capped ? cap_ticks : static_cast<std::uint64_t>(lcm),
               max_period);
  return {TimeValue(horizon), capped};
}

SimTrace simulate(const Taskset& ts, const SimConfig& cfg) {
  validate_taskset(ts);
  std::uint64_t max_period = 0;
  for (const Entity& e : ts.entities) {
    max_period = std::max(max_period, entity_period(e).ticks());
  }
  if (cfg.horizon.ticks() < max_period) {
    throw InvalidConfigError("horizon shorter than the largest period");
  }
  Simulation sim(ts, cfg);
  return sim.run();
}

TimeValue makespan(const SimTrace& trace) {
  if (trace.events.empty()) {
    return TimeValue(0);
  }
  std::uint64_t earliest_release = kNever;
  std::map<std::string, std::uint64_t> first_complete;
  std::set<std::string> released;
  for (const SimEvent& e : trace.events) {
    if (e.kind == SimEventKind::Release) {
      earliest_release = std::min(earliest_release, e.time.ticks());
      released.insert(e.id);
    } else if (e.kind == SimEventKind::Complete) {
      first_complete.emplace(e.id, e.time.ticks());
    }
  }
  if (released.empty()) {
    return TimeValue(0);
  }
  std::uint64_t latest = 0;
  for (const std::string& id : released) {
    auto it = first_complete.find(id);
    if (it == first_complete.end()) {
      throw IncompleteTraceError("entity " + id +
                                 " never completed a job in the trace");
    }
    latest = std::max(latest, it->second);
  }
  return TimeValue(latest - earliest_release);
}

MissStats miss_stats(const SimTrace& trace) {
  MissStats stats;
  stats.max_lateness = TimeValue(0);
  std::map<std::string, std::vector<std::uint64_t>> releases;
  std::map<std::string, std::vector<std::uint64_t>> completes;
  for (const SimEvent& e : trace.events) {
    switch (e.kind) {
      case SimEventKind::DeadlineMiss:
        ++stats.misses_by_entity[e.id];
        ++stats.total_misses;
        break;
      case SimEventKind::Release:
        releases[e.id].push_back(e.time.ticks());
        break;
      case SimEventKind::Complete:
        completes[e.id].push_back(e.time.ticks());
        break;
      default:
        break;
    }
  }
  // Job k's deadline is exactly release k+1; lateness is observable for
  // every completed job whose successor release is inside the trace.
  for (const auto& [id, done] : completes) {
    const auto& rel = releases[id];
    for (std::size_t k = 0; k < done.size(); ++k) {
      if (k + 1 < rel.size() && done[k] > rel[k + 1]) {
        stats.max_lateness =
            std::max(stats.max_lateness, TimeValue(done[k] - rel[k + 1]));
      }
    }
  }
  return stats;
}

void write_trace_jsonl(const SimTrace& trace, std::ostream& out) {
  for (const SimEvent& e : trace.events) {
    nlohmann::json line{{"t", e.time.ticks()},
                        {"kind", to_string(e.kind)},
                        {"id", e.id},
                        {"cores", e.cores}};
    out << line.dump() << '\n';
  }
}

void write_gantt_csv(const SimTrace& trace, std::ostream& out) {
  out << "entity,start,end,cores\n";
  struct Open {
    std::uint64_t start;
    std::vector<int> cores;
  };
  std::map<std::string, Open> open;
  auto close = [&](const std::string& id, std::uint64_t end) {
    auto it = open.find(id);
    if (it == open.end()) {
      return;
    }
    out << id << ',' << it->second.start << ',' << end << ',';
    for (std::size_t i = 0; i < it->second.cores.size(); ++i) {
      if (i > 0) {
        out << '|';
      }
      out << it->second.cores[i];
    }
    out << '\n';
    open.erase(it);
  };
  for (const SimEvent& e : trace.events) {
    switch (e.kind) {
      case SimEventKind::Start:
      case SimEventKind::Resume:
        close(e.id, e.time.ticks());  // core-set change reopens a segment
        open[e.id] = {e.time.ticks(), e.cores};
        break;
      case SimEventKind::Preempt:
      case SimEventKind::Complete:
        close(e.id, e.time.ticks());
        break;
      default:
        break;
    }
  }
  for (auto& [id, seg] : std::map<std::string, Open>(open)) {
    out << id << ',' << seg.start << ',' << trace.horizon.ticks() << ',';
    for (std::size_t i = 0; i < seg.cores.size(); ++i) {
      if (i > 0) {
        out << '|';
      }
      out << seg.cores[i];
    }
    out << '\n';
  }
}

}  // namespace vgang
