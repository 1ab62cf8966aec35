#include "vgang/analysis.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "vgang/errors.hpp"

using namespace vgang;

namespace {

Task make_task(const std::string& id, int h, std::uint64_t c,
               std::uint64_t period) {
  Task t;
  t.id = id;
  t.h = h;
  t.c_iso = TimeValue(c);
  t.period = TimeValue(period);
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

// Classic unicore rate-monotonic response-time analysis, written straight
// from the textbook recurrence as an independent reference.
bool ref_rm_schedulable(std::vector<std::pair<std::uint64_t, std::uint64_t>>
                            tasks /* (C, T), distinct T */) {
  std::sort(tasks.begin(), tasks.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::uint64_t r = tasks[i].first;
    while (true) {
      std::uint64_t next = tasks[i].first;
      for (std::size_t j = 0; j < i; ++j) {
        next += ((r + tasks[j].second - 1) / tasks[j].second) *
                tasks[j].first;
      }
      if (next == r) {
        break;
      }
      r = next;
      if (r > tasks[i].second) {
        return false;
      }
    }
    if (r > tasks[i].second) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST(AssignPriorities, ShorterPeriodWins) {
  Taskset ts = taskset_of(
      {make_task("slow", 1, 5, 50), make_task("fast", 1, 5, 10)}, 4);
  Taskset out = assign_priorities(ts);
  EXPECT_GT(*entity_priority(out.entities[1]),
            *entity_priority(out.entities[0]));
}

TEST(AssignPriorities, EqualPeriodSmallerWcetWins) {
  Taskset ts = taskset_of(
      {make_task("big", 1, 90, 500), make_task("small", 1, 82, 500)}, 4);
  Taskset out = assign_priorities(ts);
  EXPECT_GT(*entity_priority(out.entities[1]),
            *entity_priority(out.entities[0]));
}

TEST(AssignPriorities, FullTieBreaksOnId) {
  Taskset ts = taskset_of(
      {make_task("b", 1, 5, 50), make_task("a", 1, 5, 50)}, 4);
  Taskset out = assign_priorities(ts);
  EXPECT_GT(*entity_priority(out.entities[1]),  // "a"
            *entity_priority(out.entities[0]));
}

TEST(AssignPriorities, TotalStrictOrder) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<Task> tasks;
    int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      std::uint64_t t = 10 + rng() % 5;  // force plenty of ties
      tasks.push_back(make_task("t" + std::to_string(i), 1, 1 + rng() % 3,
                                t));
    }
    Taskset out = assign_priorities(taskset_of(tasks, 4));
    std::set<int> prios;
    for (const Entity& e : out.entities) {
      ASSERT_TRUE(entity_priority(e).has_value());
      prios.insert(*entity_priority(e));
    }
    EXPECT_EQ(prios.size(), out.entities.size());
  }
}

TEST(ResponseTime, NoInterferenceIsOwnWcet) {
  Entity e = make_task("a", 1, 4, 10);
  ResponseTime rt = response_time(e, {});
  EXPECT_TRUE(rt.converged);
  EXPECT_EQ(rt.value, TimeValue(4));
}

TEST(ResponseTime, HandIteratedFixedPoint) {
  Entity e = make_task("low", 1, 2, 6);
  std::vector<Entity> hp{make_task("hi", 1, 1, 4)};
  ResponseTime rt = response_time(e, hp);
  EXPECT_TRUE(rt.converged);
  EXPECT_EQ(rt.value, TimeValue(3));  // 2 + ceil(3/4)*1
}

TEST(ResponseTime, FiveTaskConfigBusyTime) {
  // tau1 (C=1) analyzed under the big gang (C=4, same period 10): the
  // whole busy window is 5 time units.
  Entity e = make_task("tau1", 1, 1, 10);
  Task gang_stub = make_task("gang", 4, 4, 10);
  ResponseTime rt = response_time(e, {gang_stub});
  EXPECT_TRUE(rt.converged);
  EXPECT_EQ(rt.value, TimeValue(5));
}

TEST(ResponseTime, DivergenceIsVerdictNotError) {
  Entity e = make_task("low", 1, 5, 10);
  std::vector<Entity> hp{make_task("hi", 1, 6, 10)};
  ResponseTime rt = response_time(e, hp);
  EXPECT_FALSE(rt.converged);
  EXPECT_GT(rt.value, TimeValue(10));
}

TEST(ResponseTime, ExactBoundaryCountsAsSchedulable) {
  Entity e = make_task("low", 1, 4, 10);
  std::vector<Entity> hp{make_task("hi", 1, 6, 10)};
  ResponseTime rt = response_time(e, hp);
  EXPECT_TRUE(rt.converged);
  EXPECT_EQ(rt.value, TimeValue(10));
}

TEST(SchedulabilityTest, SingleEntity) {
  Taskset ts = assign_priorities(taskset_of({make_task("a", 1, 7, 10)}, 4));
  SchedVerdict v = schedulability_test(ts);
  EXPECT_TRUE(v.schedulable);
  EXPECT_EQ(v.per_entity.at("a").value, TimeValue(7));
}

TEST(SchedulabilityTest, OverUtilizedEqualPeriods) {
  // Serialized execution: 6 + 5 > 10 cannot fit.
  Taskset ts = assign_priorities(taskset_of(
      {make_task("a", 1, 6, 10), make_task("b", 2, 5, 10)}, 4));
  SchedVerdict v = schedulability_test(ts);
  EXPECT_FALSE(v.schedulable);
}

TEST(SchedulabilityTest, FiveTaskBestConfigSchedulable) {
  Task g1 = make_task("tau2+tau3+tau4+tau5", 4, 4, 10);
  Task g2 = make_task("tau1", 1, 1, 10);
  Taskset ts = assign_priorities(taskset_of({g1, g2}, 4));
  SchedVerdict v = schedulability_test(ts);
  EXPECT_TRUE(v.schedulable);
  EXPECT_EQ(v.per_entity.at("tau1").value, TimeValue(1));
  EXPECT_EQ(v.per_entity.at("tau2+tau3+tau4+tau5").value, TimeValue(5));
}

TEST(SchedulabilityTest, RequiresPriorities) {
  Taskset ts = taskset_of({make_task("a", 1, 1, 10)}, 4);
  EXPECT_THROW(schedulability_test(ts), InvalidConfigError);
}

TEST(SchedulabilityTest, UsesEffectiveWcet) {
  Task a = make_task("a", 1, 4, 10);
  a.c_eff = TimeValue(11);  // interference pushes it past its period
  Taskset ts = assign_priorities(taskset_of({a}, 4));
  EXPECT_FALSE(schedulability_test(ts).schedulable);
}

TEST(SchedulabilityTest, MatchesClassicRmAnalysis) {
  std::mt19937_64 rng(13);
  int disagreements = 0;
  for (int iter = 0; iter < 500; ++iter) {
    int n = 1 + static_cast<int>(rng() % 6);
    std::vector<Task> tasks;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ref;
    std::set<std::uint64_t> periods;
    for (int i = 0; i < n; ++i) {
      std::uint64_t t;
      do {
        t = 10 + rng() % 100;
      } while (!periods.insert(t).second);  // distinct periods
      std::uint64_t c = 1 + rng() % (t / 2);
      tasks.push_back(make_task("t" + std::to_string(i), 1, c, t));
      ref.emplace_back(c, t);
    }
    Taskset ts = assign_priorities(taskset_of(tasks, 4));
    if (schedulability_test(ts).schedulable != ref_rm_schedulable(ref)) {
      ++disagreements;
    }
  }
  EXPECT_EQ(disagreements, 0);
}
