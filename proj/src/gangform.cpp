#include "vgang/gangform.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "vgang/errors.hpp"
#include "vgang/interference.hpp"

namespace vgang {

namespace {

// ---------------------------------------------------------------------
// Checked 64-bit combinatorics. UINT64_MAX doubles as the overflow
// sentinel; no Stirling number hits it exactly before blowing past it.
// ---------------------------------------------------------------------

constexpr std::uint64_t kOverflowSentinel =
    std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  if (a == kOverflowSentinel || b == kOverflowSentinel) {
    return kOverflowSentinel;
  }
  std::uint64_t r;
  return __builtin_add_overflow(a, b, &r) ? kOverflowSentinel : r;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if ((a == kOverflowSentinel && b != 0) ||
      (b == kOverflowSentinel && a != 0)) {
    return kOverflowSentinel;
  }
  std::uint64_t r;
  return __builtin_mul_overflow(a, b, &r) ? kOverflowSentinel : r;
}

// Row n of the Stirling-second-kind triangle, entries 0..n.
std::vector<std::uint64_t> stirling_row(unsigned n) {
  std::vector<std::uint64_t> row(n + 1, 0);
  row[0] = 1;  // S(0,0)
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned j = std::min(i, n); j >= 1; --j) {
      row[j] = sat_add(sat_mul(j, row[j]), row[j - 1]);
    }
    row[0] = 0;
  }
  return row;
}

// ---------------------------------------------------------------------
// Partition enumeration. Configurations are stored compactly as
// restricted-growth label strings (one byte per task); the brute-force
// search works on this arena and only materializes gangs on demand.
// ---------------------------------------------------------------------

struct PartitionEnumeration {
  int n = 0;
  std::vector<std::uint8_t> labels;       // n bytes per configuration
  std::vector<std::uint8_t> block_counts;

  std::size_t count() const { return block_counts.size(); }
  const std::uint8_t* config(std::size_t i) const {
    return labels.data() + i * static_cast<std::size_t>(n);
  }
};

// All partitions of the candidate set into viable gangs, enumerated from
// the all-singletons configuration (k = n blocks) towards coarser ones.
// Within one block count the order is lexicographic in the label string.
PartitionEnumeration enumerate_partitions(const CandidateSet& cs) {
  const int n = static_cast<int>(cs.tasks.size());
  PartitionEnumeration out;
  out.n = n;

  int total_h = 0;
  for (const Task& t : cs.tasks) {
    total_h += t.h;
  }
  const int k_min = (total_h + cs.m - 1) / cs.m;

  std::vector<std::uint8_t> labels(n);
  std::vector<int> block_load(n, 0);

  for (int k = n; k >= std::max(k_min, 1); --k) {
    auto recurse = [&](auto&& self, int i, int used) -> void {
      if (i == n) {
        if (used == k) {
          out.labels.insert(out.labels.end(), labels.begin(), labels.end());
          out.block_counts.push_back(static_cast<std::uint8_t>(k));
        }
        return;
      }
      const int remaining = n - i - 1;
      if (remaining >= k - used) {
        for (int b = 0; b < used; ++b) {
          if (block_load[b] + cs.tasks[i].h <= cs.m) {
            labels[i] = static_cast<std::uint8_t>(b);
            block_load[b] += cs.tasks[i].h;
            self(self, i + 1, used);
            block_load[b] -= cs.tasks[i].h;
          }
        }
      }
      if (used < k && remaining >= k - used - 1) {
        labels[i] = static_cast<std::uint8_t>(used);
        block_load[used] = cs.tasks[i].h;
        self(self, i + 1, used + 1);
      }
    };
    recurse(recurse, 0, 0);
  }
  return out;
}

using MeasuredMap = std::unordered_map<std::uint64_t, std::uint64_t>;

// Completion time of configuration `labels` in ticks, preferring measured
// gang WCETs where available (keyed by member bitmask).
std::uint64_t completion_ticks(const CandidateSet& cs,
                               const std::uint8_t* labels, int blocks,
                               const MeasuredMap* measured) {
  std::uint64_t block_mask[64] = {};
  std::uint64_t block_max[64] = {};
  const int n = static_cast<int>(cs.tasks.size());
  for (int i = 0; i < n; ++i) {
    int b = labels[i];
    block_mask[b] |= std::uint64_t{1} << i;
    block_max[b] = std::max(block_max[b], cs.tasks[i].c_iso.ticks());
  }
  std::uint64_t total = 0;
  for (int b = 0; b < blocks; ++b) {
    std::uint64_t wcet = block_max[b];
    if (measured != nullptr) {
      auto it = measured->find(block_mask[b]);
      if (it != measured->end()) {
        wcet = it->second;
      }
    }
    total += wcet;
  }
  return total;
}

VirtualGang materialize_gang(const CandidateSet& cs, std::uint64_t mask) {
  std::vector<Task> members;
  for (std::size_t i = 0; i < cs.tasks.size(); ++i) {
    if (mask & (std::uint64_t{1} << i)) {
      members.push_back(cs.tasks[i]);
    }
  }
  return make_virtual_gang(std::move(members), cs.m);
}

SystemConfig materialize_config(const CandidateSet& cs,
                                const std::uint8_t* labels, int blocks,
                                std::uint64_t index,
                                const MeasuredMap* measured) {
  std::vector<std::uint64_t> masks(blocks, 0);
  for (std::size_t i = 0; i < cs.tasks.size(); ++i) {
    masks[labels[i]] |= std::uint64_t{1} << i;
  }
  SystemConfig config;
  for (int b = 0; b < blocks; ++b) {
    VirtualGang gang = materialize_gang(cs, masks[b]);
    if (measured != nullptr) {
      auto it = measured->find(masks[b]);
      if (it != measured->end()) {
        gang.c_eff = TimeValue(it->second);
      }
    }
    config.gangs.push_back(std::move(gang));
  }
  config.completion_time = config_completion_time(config.gangs);
  config.discovery_index = index;
  return config;
}

// measured <= (1 + tolerance) * base, exactly.
bool within_tolerance(std::uint64_t measured, std::uint64_t base,
                      Demand tolerance) {
  using Wide = __int128;
  return static_cast<Wide>(measured) * Demand::kScale <=
         static_cast<Wide>(base) * (Demand::kScale + tolerance.micros());
}

}  // namespace

TimeValue SyntheticInterferenceOracle::effective_wcet(
    const VirtualGang& gang) {
  return scale_wcet(gang.c_iso, ResourceUtilization{gang.demand});
}

CandidateSet make_candidate_set(std::vector<Task> tasks, int m) {
  if (tasks.empty()) {
    throw ModelError("candidate set must be non-empty");
  }
  if (m < 1) {
    throw ModelError("core count must be >= 1");
  }
  std::unordered_set<std::string> ids;
  for (const Task& t : tasks) {
    validate_task(t);
    if (t.period != tasks.front().period) {
      throw PeriodMismatchError("candidate set mixes periods");
    }
    if (t.h > m) {
      throw NotViableError("task " + t.id + " needs more than m cores");
    }
    if (!ids.insert(t.id).second) {
      throw ModelError("duplicate task id " + t.id);
    }
  }
  return CandidateSet{std::move(tasks), m};
}

std::vector<CandidateSet> group_by_period(const Taskset& ts) {
  std::map<std::uint64_t, std::vector<Task>> groups;
  for (const Entity& e : ts.entities) {
    const Task* task = std::get_if<Task>(&e);
    if (task == nullptr) {
      throw SchemaError("gang formation expects a taskset of plain tasks");
    }
    groups[task->period.ticks()].push_back(*task);
  }
  std::vector<CandidateSet> out;
  out.reserve(groups.size());
  for (auto& [period, tasks] : groups) {
    out.push_back(make_candidate_set(std::move(tasks), ts.m));
  }
  return out;
}

std::uint64_t stirling2(unsigned n, unsigned k) {
  if (k > n) {
    throw ModelError("stirling2 requires 0 <= k <= n");
  }
  std::uint64_t value = stirling_row(n)[k];
  if (value == kOverflowSentinel) {
    throw CountOverflowError("S(" + std::to_string(n) + "," +
                             std::to_string(k) + ") exceeds 64 bits");
  }
  return value;
}

std::uint64_t config_count_bound(unsigned n, unsigned m) {
  if (n < 1 || m < 1) {
    throw ModelError("config_count_bound requires n >= 1 and m >= 1");
  }
  const unsigned k_min = (n + m - 1) / m;
  std::vector<std::uint64_t> row = stirling_row(n);
  std::uint64_t total = 0;
  for (unsigned k = k_min; k <= n; ++k) {
    total = sat_add(total, row[k]);
  }
  if (total == kOverflowSentinel) {
    throw CountOverflowError("configuration count for n=" +
                             std::to_string(n) + " exceeds 64 bits");
  }
  return total;
}

std::vector<SystemConfig> generate_system_configs(const CandidateSet& cs) {
  if (cs.tasks.size() > 64) {
    throw ConfigSpaceTooLargeError("more than 64 tasks in a candidate set");
  }
  PartitionEnumeration parts = enumerate_partitions(cs);
  std::vector<SystemConfig> configs;
  configs.reserve(parts.count());
  for (std::size_t i = 0; i < parts.count(); ++i) {
    configs.push_back(materialize_config(cs, parts.config(i),
                                         parts.block_counts[i], i, nullptr));
  }
  return configs;
}

RankedConfigs rank_configs(std::vector<SystemConfig> configs) {
  std::sort(configs.begin(), configs.end(),
            [](const SystemConfig& a, const SystemConfig& b) {
              return a.rank_key() < b.rank_key();
            });
  return RankedConfigs{std::move(configs)};
}

BruteForceResult gang_formation_bruteforce(const CandidateSet& cs,
                                           InterferenceOracle& oracle,
                                           Demand tolerance,
                                           std::uint64_t config_cap) {
  const unsigned n = static_cast<unsigned>(cs.tasks.size());
  std::uint64_t bound;
  try {
    bound = config_count_bound(n, static_cast<unsigned>(cs.m));
  } catch (const CountOverflowError&) {
    throw ConfigSpaceTooLargeError(
        "configuration count overflows 64 bits; use the greedy heuristic");
  }
  if (bound > config_cap || n > 64) {
    throw ConfigSpaceTooLargeError(
        "up to " + std::to_string(bound) + " configurations exceed the cap " +
        std::to_string(config_cap) + "; use the greedy heuristic");
  }

  PartitionEnumeration parts = enumerate_partitions(cs);
  const std::size_t count = parts.count();
  std::vector<std::uint64_t> times(count);
  for (std::size_t i = 0; i < count; ++i) {
    times[i] = completion_ticks(cs, parts.config(i), parts.block_counts[i],
                                nullptr);
  }

  auto pick_best = [&]() {
    std::size_t best = 0;
    for (std::size_t i = 1; i < count; ++i) {
      if (std::tuple(times[i], parts.block_counts[i], i) <
          std::tuple(times[best], parts.block_counts[best], best)) {
        best = i;
      }
    }
    return best;
  };

  MeasuredMap measured;
  FormationStats stats{"bfc", 0, 0, tolerance};
  std::unordered_set<std::size_t> selected;

  std::size_t best = pick_best();
  selected.insert(best);
  while (true) {
    ++stats.iterations;
    const std::uint64_t pre_oracle_completion = times[best];

    // Measure every gang of the best configuration (cache hits are free).
    std::uint64_t block_mask[64] = {};
    const std::uint8_t* labels = parts.config(best);
    for (int i = 0; i < parts.n; ++i) {
      block_mask[labels[i]] |= std::uint64_t{1} << i;
    }
    for (int b = 0; b < parts.block_counts[best]; ++b) {
      if (measured.find(block_mask[b]) == measured.end()) {
        VirtualGang gang = materialize_gang(cs, block_mask[b]);
        measured[block_mask[b]] = oracle.effective_wcet(gang).ticks();
        ++stats.oracle_calls;
      }
    }
    times[best] = completion_ticks(cs, labels, parts.block_counts[best],
                                   &measured);

    if (within_tolerance(times[best], pre_oracle_completion, tolerance)) {
      break;
    }

    // Refresh every configuration that contains a measured gang, then
    // re-rank. Unaffected configurations recompute to the same value.
    for (std::size_t i = 0; i < count; ++i) {
      times[i] = completion_ticks(cs, parts.config(i), parts.block_counts[i],
                                  &measured);
    }
    std::size_t next = pick_best();
    if (next == best) {
      break;
    }
    if (!selected.insert(next).second) {
      // Already fully measured earlier: its completion time can no longer
      // change, so the next round would accept it unchanged.
      best = next;
      break;
    }
    best = next;
  }

  BruteForceResult result;
  result.config = materialize_config(cs, parts.config(best),
                                     parts.block_counts[best], best,
                                     &measured);
  result.stats = stats;
  return result;
}

GreedyResult gang_formation_greedy(const CandidateSet& cs,
                                   InterferenceOracle& oracle,
                                   Demand tolerance) {
  std::vector<Task> sorted = cs.tasks;
  std::sort(sorted.begin(), sorted.end(), [](const Task& a, const Task& b) {
    if (a.c_iso != b.c_iso) {
      return a.c_iso > b.c_iso;
    }
    if (a.h != b.h) {
      return a.h > b.h;  // harder to place later
    }
    return a.id < b.id;
  });

  std::vector<bool> used(sorted.size(), false);
  std::vector<VirtualGang> formed;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (used[i]) {
      continue;
    }
    used[i] = true;
    std::vector<Task> members{sorted[i]};
    int gang_h = sorted[i].h;
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (!used[j] && gang_h + sorted[j].h <= cs.m) {
        used[j] = true;
        members.push_back(sorted[j]);
        gang_h += sorted[j].h;
      }
    }
    formed.push_back(make_virtual_gang(std::move(members), cs.m));
  }

  GreedyResult result;
  result.stats = FormationStats{"gpc", 0, 0, tolerance};
  for (VirtualGang& gang : formed) {
    TimeValue eff = oracle.effective_wcet(gang);
    ++result.stats.oracle_calls;
    if (within_tolerance(eff.ticks(), gang.c_iso.ticks(), tolerance)) {
      gang.c_eff = eff;
      result.gangs.push_back(std::move(gang));
    } else if (gang.members.size() == 1) {
      // A singleton cannot be split further; it keeps its isolation WCET.
      result.gangs.push_back(std::move(gang));
    } else {
      // Rejected: members fall back to singleton gangs.
      for (const Task& member : gang.members) {
        result.gangs.push_back(make_virtual_gang({member}, cs.m));
      }
    }
  }
  return result;
}

}  // namespace vgang
