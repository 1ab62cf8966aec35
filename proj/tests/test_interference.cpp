#include "vgang/interference.hpp"

#include <gtest/gtest.h>

#include <random>

#include "vgang/errors.hpp"

using namespace vgang;

namespace {

Task make_task(const std::string& id, int h, std::uint64_t c,
               std::uint64_t period, double demand) {
  Task t;
  t.id = id;
  t.h = h;
  t.c_iso = TimeValue(c);
  t.period = TimeValue(period);
  t.demand = Demand::from_double(demand);
  return t;
}

Taskset taskset_of(std::vector<Task> tasks, int m) {
  Taskset ts;
  ts.m = m;
  for (Task& t : tasks) {
    ts.entities.emplace_back(std::move(t));
  }
  return ts;
}

// Independent oracle: the maximal combined demand over all subsets of the
// other entities whose cores fit on the remaining capacity. Exhaustive, so
// usable up to ~12 entities.
std::int64_t brute_force_corun_demand(const Taskset& ts,
                                      const std::string& id, int h) {
  std::vector<std::pair<int, std::int64_t>> others;
  for (const Entity& e : ts.entities) {
    if (entity_id(e) != id) {
      others.emplace_back(entity_h(e), entity_demand(e).micros());
    }
  }
  int cap = ts.m - h;
  std::int64_t best = 0;
  for (std::size_t mask = 0; mask < (1u << others.size()); ++mask) {
    int weight = 0;
    std::int64_t value = 0;
    for (std::size_t i = 0; i < others.size(); ++i) {
      if (mask & (1u << i)) {
        weight += others[i].first;
        value += others[i].second;
      }
    }
    if (weight <= cap) {
      best = std::max(best, value);
    }
  }
  return best;
}

}  // namespace

TEST(ScaleWcet, NoInterferenceBelowSaturation) {
  EXPECT_EQ(scale_wcet(TimeValue(10), {Demand::from_double(0.8)}),
            TimeValue(10));
}

TEST(ScaleWcet, LinearAboveSaturation) {
  EXPECT_EQ(scale_wcet(TimeValue(10), {Demand::from_double(1.2)}),
            TimeValue(12));
}

TEST(ScaleWcet, RoundsUp) {
  EXPECT_EQ(scale_wcet(TimeValue(7), {Demand::from_double(1.5)}),
            TimeValue(11));  // ceil(10.5)
}

TEST(ScaleWcet, SaturationThresholdProperty) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    TimeValue c(1 + rng() % 1000);
    ResourceUtilization r{Demand(static_cast<std::int64_t>(
        rng() % (Demand::kScale + 1)))};
    EXPECT_EQ(scale_wcet(c, r), c);
  }
}

TEST(GangUtilization, SingletonSeesOwnDemandOnly) {
  Task a = make_task("a", 1, 5, 10, 0.9);
  VirtualGang g = make_virtual_gang({a}, 4);
  ResourceUtilization r = gang_resource_utilization(a, g);
  EXPECT_EQ(r.value, Demand::from_double(0.9));
  EXPECT_EQ(scale_wcet(a.c_iso, r), a.c_iso);
}

TEST(GangUtilization, SumsCoMemberDemands) {
  Task a = make_task("a", 1, 5, 10, 0.5);
  Task b = make_task("b", 1, 5, 10, 0.7);
  VirtualGang g = make_virtual_gang({a, b}, 4);
  EXPECT_EQ(gang_resource_utilization(a, g).value, Demand::from_double(1.2));
}

TEST(GangUtilization, BelowSaturationLeavesWcet) {
  Task a = make_task("a", 1, 9, 20, 0.3);
  Task b = make_task("b", 1, 9, 20, 0.3);
  Task c = make_task("c", 1, 9, 20, 0.3);
  VirtualGang g = make_virtual_gang({a, b, c}, 4);
  ResourceUtilization r = gang_resource_utilization(a, g);
  EXPECT_EQ(r.value, Demand::from_double(0.9));
  EXPECT_EQ(scale_wcet(a.c_iso, r), a.c_iso);
}

TEST(GangUtilization, ThrowsForNonMember) {
  Task a = make_task("a", 1, 5, 10, 0.5);
  Task x = make_task("x", 1, 5, 10, 0.5);
  VirtualGang g = make_virtual_gang({a}, 4);
  EXPECT_THROW(gang_resource_utilization(x, g), TaskNotInGangError);
}

TEST(GangFtpUtilization, FullPlatformTaskHasNoCoRunners) {
  Task big = make_task("big", 4, 5, 100, 0.6);
  Taskset ts = taskset_of({big, make_task("o", 1, 5, 100, 0.9)}, 4);
  EXPECT_EQ(gangftp_resource_utilization(big, ts).value,
            Demand::from_double(0.6));
}

TEST(GangFtpUtilization, PicksBestFittingSubset) {
  Task t = make_task("t", 2, 5, 100, 0.4);
  Taskset ts = taskset_of({t, make_task("a", 2, 5, 100, 0.5),
                           make_task("b", 2, 5, 100, 0.3),
                           make_task("c", 1, 5, 100, 0.2)},
                          4);
  EXPECT_EQ(gangftp_resource_utilization(t, ts).value,
            Demand::from_double(0.9));
}

TEST(GangFtpUtilization, SearchesAllSubsets) {
  Task t = make_task("t", 1, 5, 100, 0.1);
  Taskset ts = taskset_of({t, make_task("a", 1, 5, 100, 0.6),
                           make_task("b", 1, 5, 100, 0.5),
                           make_task("c", 2, 5, 100, 0.9)},
                          4);
  EXPECT_EQ(gangftp_resource_utilization(t, ts).value,
            Demand::from_double(1.6));
}

TEST(GangFtpUtilization, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    int m = (iter % 2 == 0) ? 4 : 8;
    int n = 2 + static_cast<int>(rng() % 11);  // up to 12 entities
    std::vector<Task> tasks;
    for (int i = 0; i < n; ++i) {
      tasks.push_back(make_task("t" + std::to_string(i),
                                1 + static_cast<int>(rng() % m), 5, 100,
                                static_cast<double>(rng() % 1001) / 1000.0));
    }
    Taskset ts = taskset_of(tasks, m);
    for (const Entity& e : ts.entities) {
      const Task& t = std::get<Task>(e);
      std::int64_t expected =
          t.demand.micros() + brute_force_corun_demand(ts, t.id, t.h);
      EXPECT_EQ(gangftp_resource_utilization(t, ts).value.micros(), expected);
    }
  }
}

TEST(ThreadedUtilization, AloneSingleThread) {
  Task t = make_task("t", 1, 5, 100, 0.35);
  Taskset ts = taskset_of({t}, 4);
  EXPECT_EQ(threaded_resource_utilization(t, ts).value,
            Demand::from_double(0.35));
}

TEST(ThreadedUtilization, TopOtherThreadsSelected) {
  Task t = make_task("t", 1, 5, 100, 0.4);
  Taskset ts = taskset_of({t, make_task("o", 2, 5, 100, 1.0)}, 2);
  // Other threads each have demand 0.5; only m-1 = 1 can co-run.
  EXPECT_EQ(threaded_resource_utilization(t, ts).value,
            Demand::from_double(0.9));
}

TEST(ThreadedUtilization, SiblingThreadsCount) {
  Task t = make_task("t", 2, 5, 100, 0.8);
  Taskset ts = taskset_of({t}, 4);
  // Own thread 0.4 plus the sibling thread 0.4.
  EXPECT_EQ(threaded_resource_utilization(t, ts).value,
            Demand::from_double(0.8));
}

TEST(Monotonicity, AddingCoRunnerNeverDecreasesR) {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    int m = 8;
    int n = 2 + static_cast<int>(rng() % 6);
    std::vector<Task> tasks;
    for (int i = 0; i < n; ++i) {
      tasks.push_back(make_task("t" + std::to_string(i),
                                1 + static_cast<int>(rng() % m), 5, 100,
                                static_cast<double>(rng() % 1000 + 1) /
                                    1000.0));
    }
    Task extra = make_task("extra", 1 + static_cast<int>(rng() % m), 5, 100,
                           static_cast<double>(rng() % 1000 + 1) / 1000.0);
    Taskset without = taskset_of(tasks, m);
    tasks.push_back(extra);
    Taskset with = taskset_of(tasks, m);
    const Task& probe = std::get<Task>(without.entities.front());
    EXPECT_GE(gangftp_resource_utilization(probe, with).value,
              gangftp_resource_utilization(probe, without).value);
    EXPECT_GE(threaded_resource_utilization(probe, with).value,
              threaded_resource_utilization(probe, without).value);
  }
  // Gang-level: growing the gang never lowers a member's R.
  Task a = make_task("a", 1, 5, 100, 0.4);
  Task b = make_task("b", 1, 5, 100, 0.2);
  Task c = make_task("c", 1, 5, 100, 0.3);
  VirtualGang small = make_virtual_gang({a, b}, 8);
  VirtualGang large = make_virtual_gang({a, b, c}, 8);
  EXPECT_GE(gang_resource_utilization(a, large).value,
            gang_resource_utilization(a, small).value);
}

TEST(ApplyInterference, RtGangIsNeutral) {
  Taskset ts = taskset_of({make_task("a", 1, 10, 100, 1.0),
                           make_task("b", 2, 10, 100, 1.0)},
                          4);
  Taskset out = apply_interference(ts, PolicyKind::RtGang);
  for (const Entity& e : out.entities) {
    EXPECT_EQ(entity_wcet(e), entity_c_iso(e));
  }
}

TEST(ApplyInterference, RtgSyncScalesGangsByCombinedDemand) {
  Task a = make_task("a", 1, 10, 100, 0.9);
  Task b = make_task("b", 1, 8, 100, 0.6);
  Taskset ts;
  ts.m = 4;
  ts.entities.emplace_back(make_virtual_gang({a, b}, 4));
  Taskset out = apply_interference(ts, PolicyKind::RtgSync);
  // R = 1.5, gang c_iso = 10 -> 15.
  EXPECT_EQ(entity_wcet(out.entities.front()), TimeValue(15));
}

TEST(ApplyInterference, GangFtpScalesTasks) {
  Taskset ts = taskset_of({make_task("a", 2, 10, 100, 0.8),
                           make_task("b", 2, 10, 100, 0.7)},
                          4);
  Taskset out = apply_interference(ts, PolicyKind::GangFtp);
  // a: R = 0.8 + 0.7 = 1.5 -> 15.
  EXPECT_EQ(entity_wcet(out.entities.front()), TimeValue(15));
}
