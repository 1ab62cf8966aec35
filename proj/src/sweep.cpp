#include "vgang/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "vgang/analysis.hpp"
#include "vgang/errors.hpp"
#include "vgang/interference.hpp"
#include "vgang/rng.hpp"
#include "vgang/simulator.hpp"

namespace vgang {

namespace {

Taskset form_rtg_sync_taskset(const Taskset& tasks, bool use_bfc,
                              bool interference, Demand tolerance,
                              std::uint64_t config_cap) {
  ZeroInterferenceOracle zero;
  SyntheticInterferenceOracle synthetic;
  InterferenceOracle& oracle =
      interference ? static_cast<InterferenceOracle&>(synthetic)
                   : static_cast<InterferenceOracle&>(zero);
  Taskset gangs;
  gangs.m = tasks.m;
  gangs.util_target = tasks.util_target;
  for (const CandidateSet& cs : group_by_period(tasks)) {
    std::vector<VirtualGang> formed;
    if (use_bfc) {
      try {
        formed = gang_formation_bruteforce(cs, oracle, tolerance, config_cap)
                     .config.gangs;
      } catch (const ConfigSpaceTooLargeError&) {
        formed = gang_formation_greedy(cs, oracle, tolerance).gangs;
      }
    } else {
      formed = gang_formation_greedy(cs, oracle, tolerance).gangs;
    }
    for (VirtualGang& g : formed) {
      gangs.entities.emplace_back(std::move(g));
    }
  }
  return gangs;
}

bool simulation_feasible(const Taskset& ts, SimPolicy policy,
                         std::uint64_t sim_horizon_cap) {
  Taskset prioritized = assign_priorities(ts);
  SimConfig cfg;
  cfg.policy = policy;
  cfg.horizon = default_horizon(prioritized, sim_horizon_cap).horizon;
  SimTrace trace = simulate(prioritized, cfg);
  for (const SimEvent& e : trace.events) {
    if (e.kind == SimEventKind::DeadlineMiss) {
      return false;
    }
  }
  return true;
}

std::string format_util(Demand util) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", util.to_double());
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') {
    s.pop_back();
  }
  return s;
}

}  // namespace

const char* to_string(SweepPolicy policy) {
  switch (policy) {
    case SweepPolicy::RtGang:
      return "RT_GANG";
    case SweepPolicy::RtgSyncBfc:
      return "RTG_SYNC_BFC";
    case SweepPolicy::RtgSyncGpc:
      return "RTG_SYNC_GPC";
    case SweepPolicy::GangFtpSim:
      return "GANG_FTP_SIM";
    case SweepPolicy::ThreadedSim:
      return "THREADED_SIM";
  }
  return "?";
}

SweepPolicy sweep_policy_from_string(const std::string& name) {
  for (SweepPolicy p : all_sweep_policies()) {
    if (name == to_string(p)) {
      return p;
    }
  }
  throw SchemaError("unknown policy: " + name);
}

std::vector<SweepPolicy> all_sweep_policies() {
  return {SweepPolicy::RtGang, SweepPolicy::RtgSyncBfc,
          SweepPolicy::RtgSyncGpc, SweepPolicy::GangFtpSim,
          SweepPolicy::ThreadedSim};
}

bool policy_accepts(const Taskset& tasks, SweepPolicy policy,
                    bool interference, Demand tolerance,
                    std::uint64_t config_cap,
                    std::uint64_t sim_horizon_cap) {
  switch (policy) {
    case SweepPolicy::RtGang:
      // One gang at a time: no co-scheduling, interference cannot occur.
      return schedulability_test(assign_priorities(tasks)).schedulable;
    case SweepPolicy::RtgSyncBfc:
    case SweepPolicy::RtgSyncGpc: {
      Taskset gangs = form_rtg_sync_taskset(
          tasks, policy == SweepPolicy::RtgSyncBfc, interference, tolerance,
          config_cap);
      return schedulability_test(assign_priorities(gangs)).schedulable;
    }
    case SweepPolicy::GangFtpSim: {
      Taskset ts = interference ? apply_interference(tasks, PolicyKind::GangFtp)
                                : tasks;
      return simulation_feasible(ts, SimPolicy::GangFtp, sim_horizon_cap);
    }
    case SweepPolicy::ThreadedSim: {
      Taskset ts = interference
                       ? apply_interference(tasks, PolicyKind::Threaded)
                       : tasks;
      return simulation_feasible(ts, SimPolicy::Threaded, sim_horizon_cap);
    }
  }
  return false;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.tasksets_per_point < 1 || spec.m < 1 ||
      spec.util_step.micros() < 1 || spec.util_min.micros() < 0) {
    throw ModelError("invalid sweep spec");
  }
  const Demand util_max = spec.util_max.micros() > 0
                              ? spec.util_max
                              : Demand(spec.m * Demand::kScale);
  std::vector<Demand> grid;
  for (std::int64_t u = spec.util_min.micros(); u <= util_max.micros();
       u += spec.util_step.micros()) {
    grid.push_back(Demand(u));
  }
  if (grid.empty()) {
    throw ModelError("empty utilization grid");
  }
  const std::vector<SweepPolicy> policies =
      spec.policies.empty() ? all_sweep_policies() : spec.policies;

  std::vector<std::vector<int>> accepted(
      grid.size(), std::vector<int>(policies.size(), 0));
  std::mutex merge_mutex;

  // Work items are (grid point, taskset chunk); every taskset is judged
  // under every policy so the comparison is paired.
  const int chunk = 25;
  struct Item {
    std::size_t point;
    int begin;
    int end;
  };
  std::vector<Item> items;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (int b = 0; b < spec.tasksets_per_point; b += chunk) {
      items.push_back(
          {p, b, std::min(spec.tasksets_per_point, b + chunk)});
    }
  }

  int workers = spec.workers > 0
                    ? spec.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, items.size()));

  std::atomic<std::size_t> next_item{0};
  auto work = [&]() {
    while (true) {
      std::size_t idx = next_item.fetch_add(1);
      if (idx >= items.size()) {
        return;
      }
      const Item& item = items[idx];
      std::vector<int> local(policies.size(), 0);
      for (int i = item.begin; i < item.end; ++i) {
        GenSpec gen;
        gen.m = spec.m;
        gen.util_target = grid[item.point];
        gen.type = spec.type;
        if (spec.n_per_period) {
          gen.n_min = gen.n_max = *spec.n_per_period;
        }
        gen.seed = derive_seed(spec.seed, {item.point,
                                           static_cast<std::uint64_t>(i)});
        Taskset tasks = generate_taskset(gen);
        for (std::size_t p = 0; p < policies.size(); ++p) {
          if (policy_accepts(tasks, policies[p], spec.interference,
                             spec.tolerance, spec.config_cap,
                             spec.sim_horizon_cap)) {
            ++local[p];
          }
        }
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      for (std::size_t p = 0; p < policies.size(); ++p) {
        accepted[item.point][p] += local[p];
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back(work);
  }
  for (std::thread& t : pool) {
    t.join();
  }

  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * policies.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t p = 0; p < policies.size(); ++p) {
      rows.push_back({grid[g], policies[p], spec.type, spec.interference,
                      static_cast<double>(accepted[g][p]) /
                          spec.tasksets_per_point,
                      spec.tasksets_per_point});
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "util,policy,type,interference,accept_ratio,n\n";
  char ratio[32];
  for (const SweepRow& row : rows) {
    std::snprintf(ratio, sizeof(ratio), "%.6f", row.accept_ratio);
    out << format_util(row.util) << ',' << to_string(row.policy) << ','
        << to_string(row.type) << ',' << (row.interference ? "on" : "off")
        << ',' << ratio << ',' << row.n << '\n';
  }
}

}  // namespace vgang
