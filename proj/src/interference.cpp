#include "vgang/interference.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "vgang/errors.hpp"

namespace vgang {

namespace {

using Wide = __int128;

Wide wide_gcd(Wide a, Wide b) {
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

// Exact rational accumulator for per-thread demand sums (micro units).
struct Frac {
  Wide num = 0;
  Wide den = 1;

  void add(Wide n, Wide d) {
    num = num * d + n * den;
    den = den * d;
    Wide g = wide_gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  std::int64_t ceil_micros() const {
    return static_cast<std::int64_t>((num + den - 1) / den);
  }
};

// Maximum combined demand of a subset of items with total weight <= cap.
// Solved exactly: weights are core counts, values are micro demands.
std::int64_t max_demand_knapsack(
    const std::vector<std::pair<int, std::int64_t>>& items, int cap) {
  if (cap <= 0) {
    return 0;
  }
  std::vector<std::int64_t> best(static_cast<std::size_t>(cap) + 1, 0);
  for (const auto& [weight, value] : items) {
    if (weight > cap) {
      continue;
    }
    for (int c = cap; c >= weight; --c) {
      best[c] = std::max(best[c], best[c - weight] + value);
    }
  }
  return best[cap];
}

ResourceUtilization gangftp_utilization_of(const std::string& id, int h,
                                           Demand demand, const Taskset& ts) {
  std::vector<std::pair<int, std::int64_t>> others;
  for (const Entity& e : ts.entities) {
    if (entity_id(e) == id) {
      continue;
    }
    others.emplace_back(entity_h(e), entity_demand(e).micros());
  }
  std::int64_t worst = max_demand_knapsack(others, ts.m - h);
  return ResourceUtilization{Demand(demand.micros() + worst)};
}

ResourceUtilization threaded_utilization_of(const std::string& id, int h,
                                            Demand demand, const Taskset& ts) {
  // Per-thread demands as exact fractions micros/h, selected by value.
  struct ThreadDemand {
    std::int64_t num;  // micros
    int den;           // thread count of the owning entity
  };
  std::vector<ThreadDemand> others;
  for (const Entity& e : ts.entities) {
    int count = entity_h(e);
    std::int64_t micros = entity_demand(e).micros();
    if (entity_id(e) == id) {
      count -= 1;  // sibling threads of the task under analysis
    }
    for (int i = 0; i < count; ++i) {
      others.push_back({micros, entity_h(e)});
    }
  }
  std::sort(others.begin(), others.end(),
            [](const ThreadDemand& a, const ThreadDemand& b) {
              return static_cast<std::int64_t>(a.num) * b.den >
                     static_cast<std::int64_t>(b.num) * a.den;
            });
  Frac sum;
  sum.add(demand.micros(), h);  // own thread
  std::size_t take = std::min<std::size_t>(others.size(),
                                           ts.m > 0 ? ts.m - 1 : 0);
  for (std::size_t i = 0; i < take; ++i) {
    sum.add(others[i].num, others[i].den);
  }
  return ResourceUtilization{Demand(sum.ceil_micros())};
}

}  // namespace

TimeValue scale_wcet(TimeValue c_iso, ResourceUtilization r) {
  if (r.value.micros() <= Demand::kScale) {
    return c_iso;  // no interference until the resource is over-utilized
  }
  Wide scaled = static_cast<Wide>(c_iso.ticks()) * r.value.micros();
  Wide ticks = (scaled + Demand::kScale - 1) / Demand::kScale;
  return TimeValue(static_cast<std::uint64_t>(ticks));
}

ResourceUtilization gang_resource_utilization(const Task& task,
                                              const VirtualGang& gang) {
  bool found = false;
  Demand others(0);
  for (const Task& member : gang.members) {
    if (member.id == task.id) {
      found = true;
    } else {
      others += member.demand;
    }
  }
  if (!found) {
    throw TaskNotInGangError("task " + task.id + " is not a member of gang " +
                             gang.id);
  }
  return ResourceUtilization{task.demand + others};
}

ResourceUtilization gangftp_resource_utilization(const Task& task,
                                                 const Taskset& ts) {
  return gangftp_utilization_of(task.id, task.h, task.demand, ts);
}

ResourceUtilization threaded_resource_utilization(const Task& task,
                                                  const Taskset& ts) {
  return threaded_utilization_of(task.id, task.h, task.demand, ts);
}

Taskset apply_interference(const Taskset& ts, PolicyKind policy) {
  Taskset out = ts;
  for (Entity& e : out.entities) {
    switch (policy) {
      case PolicyKind::RtGang:
        // One gang at a time: no co-scheduling, WCETs stay isolated.
        break;
      case PolicyKind::RtgSync:
        if (VirtualGang* g = std::get_if<VirtualGang>(&e)) {
          // Every member sees the combined demand of the whole gang, so
          // the longest member (the gang WCET) scales by it as well.
          g->c_eff = scale_wcet(g->c_iso, ResourceUtilization{g->demand});
        }
        break;
      case PolicyKind::GangFtp: {
        ResourceUtilization r = gangftp_utilization_of(
            entity_id(e), entity_h(e), entity_demand(e), ts);
        TimeValue eff = scale_wcet(entity_c_iso(e), r);
        std::visit([&](auto& x) { x.c_eff = eff; }, e);
        break;
      }
      case PolicyKind::Threaded: {
        ResourceUtilization r = threaded_utilization_of(
            entity_id(e), entity_h(e), entity_demand(e), ts);
        TimeValue eff = scale_wcet(entity_c_iso(e), r);
        std::visit([&](auto& x) { x.c_eff = eff; }, e);
        break;
      }
    }
  }
  return out;
}

}  // namespace vgang
