#include "vgang/generator.hpp"

#include <gtest/gtest.h>

#include <map>

#include "vgang/errors.hpp"
#include "vgang/rng.hpp"

using namespace vgang;

namespace {

GenSpec base_spec(double util, TasksetType type, std::uint64_t seed) {
  GenSpec spec;
  spec.m = 8;
  spec.util_target = Demand::from_double(util);
  spec.type = type;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST(Rng, PortableDrawsAreStable) {
  // Frozen values: mt19937_64 is fully specified by the standard and the
  // rejection sampler on top of it must never drift.
  Rng rng(42);
  EXPECT_EQ(rng.uniform_u64(0, 999), 406u);
  EXPECT_EQ(rng.uniform_u64(0, 999), 824u);
  EXPECT_EQ(rng.uniform_u64(10, 1500), 407u);
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
}

TEST(Generator, ZeroTargetYieldsEmptyTaskset) {
  Taskset ts = generate_taskset(base_spec(0.0, TasksetType::Mixed, 7));
  EXPECT_TRUE(ts.entities.empty());
  EXPECT_EQ(*ts.util_target, Demand(0));
}

TEST(Generator, DeterministicForFixedSeed) {
  GenSpec spec = base_spec(3.5, TasksetType::Mixed, 12345);
  Taskset a = generate_taskset(spec);
  Taskset b = generate_taskset(spec);
  ASSERT_EQ(a.entities.size(), b.entities.size());
  for (std::size_t i = 0; i < a.entities.size(); ++i) {
    EXPECT_EQ(entity_id(a.entities[i]), entity_id(b.entities[i]));
    EXPECT_EQ(entity_h(a.entities[i]), entity_h(b.entities[i]));
    EXPECT_EQ(entity_c_iso(a.entities[i]), entity_c_iso(b.entities[i]));
    EXPECT_EQ(entity_period(a.entities[i]), entity_period(b.entities[i]));
    EXPECT_EQ(entity_demand(a.entities[i]), entity_demand(b.entities[i]));
  }
}

TEST(Generator, LightParallelismBound) {
  EXPECT_EQ(light_h_bound(8), 3);  // ceil(0.3 * 8)
  EXPECT_EQ(light_h_bound(4), 2);
  EXPECT_EQ(light_h_bound(1), 1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Taskset ts = generate_taskset(base_spec(4.0, TasksetType::Light, seed));
    for (const Entity& e : ts.entities) {
      EXPECT_GE(entity_h(e), 1);
      EXPECT_LE(entity_h(e), 3);
    }
  }
}

TEST(Generator, HeavyParallelismRange) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Taskset ts = generate_taskset(base_spec(4.0, TasksetType::Heavy, seed));
    for (const Entity& e : ts.entities) {
      EXPECT_GE(entity_h(e), 3);
      EXPECT_LE(entity_h(e), 8);
    }
  }
}

TEST(Generator, RangeConformance) {
  for (std::uint64_t seed = 100; seed < 300; ++seed) {
    GenSpec spec = base_spec(5.0, TasksetType::Mixed, seed);
    Taskset ts = generate_taskset(spec);
    validate_taskset(ts);
    ASSERT_FALSE(ts.entities.empty());
    for (std::size_t i = 0; i < ts.entities.size(); ++i) {
      const Entity& e = ts.entities[i];
      std::uint64_t t = entity_period(e).ticks();
      EXPECT_GE(t, spec.period_min);
      EXPECT_LE(t, spec.period_max);
      std::uint64_t c = entity_c_iso(e).ticks();
      bool is_fill_task = (i + 1 == ts.entities.size());
      if (!is_fill_task) {
        // Exactly the drawn range [ceil(T/10), floor(T/5)].
        EXPECT_GE(c, (t + 9) / 10);
        EXPECT_LE(c, t / 5);
      } else {
        EXPECT_GE(c, 1u);
        EXPECT_LE(c, t / 5);
      }
      EXPECT_GE(entity_demand(e), Demand(0));
      EXPECT_LE(entity_demand(e), Demand(Demand::kScale));
    }
  }
}

TEST(Generator, UtilizationAccuracy) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    double target = 0.5 + static_cast<double>(seed % 16) * 0.5;
    GenSpec spec = base_spec(target, TasksetType::Mixed, seed);
    Taskset ts = generate_taskset(spec);
    Demand total = total_utilization(ts);
    // Never overshoots; undershoot bounded by one tick of the fill task,
    // at most m / period_min cores worth.
    EXPECT_LE(total.micros(), spec.util_target.micros() + 1);
    std::int64_t bound =
        Demand::kScale * spec.m / static_cast<std::int64_t>(spec.period_min);
    EXPECT_GE(total.micros(), spec.util_target.micros() - bound);
  }
}

TEST(Generator, GroupsShareDrawnPeriod) {
  // Tasks arrive in per-period batches of n_min..n_max (the final batch
  // may be cut short by the fill).
  GenSpec spec = base_spec(6.0, TasksetType::Light, 9);
  Taskset ts = generate_taskset(spec);
  std::map<std::uint64_t, int> batch;
  std::uint64_t current = 0;
  int run = 0;
  for (const Entity& e : ts.entities) {
    std::uint64_t t = entity_period(e).ticks();
    if (t == current) {
      ++run;
    } else {
      if (run > 0) {
        EXPECT_LE(run, spec.n_max);
      }
      current = t;
      run = 1;
    }
  }
}

TEST(Generator, HDistributionUniformChiSquare) {
  // 10^4 h draws per type must be uniform over their range. Critical
  // values at alpha = 0.001: df=2 -> 13.82, df=5 -> 20.52, df=7 -> 24.32.
  struct Case {
    TasksetType type;
    int lo;
    int hi;
    double critical;
  };
  for (const Case& c : {Case{TasksetType::Light, 1, 3, 13.82},
                        Case{TasksetType::Heavy, 3, 8, 20.52},
                        Case{TasksetType::Mixed, 1, 8, 24.32}}) {
    std::map<int, int> counts;
    int total = 0;
    std::uint64_t seed = 0;
    while (total < 10000) {
      Taskset ts =
          generate_taskset(base_spec(8.0, c.type, derive_seed(99, {seed++})));
      for (const Entity& e : ts.entities) {
        ++counts[entity_h(e)];
        ++total;
      }
    }
    int bins = c.hi - c.lo + 1;
    double expected = static_cast<double>(total) / bins;
    double chi2 = 0;
    for (int h = c.lo; h <= c.hi; ++h) {
      double diff = counts[h] - expected;
      chi2 += diff * diff / expected;
    }
    EXPECT_LT(chi2, c.critical) << "type " << to_string(c.type);
  }
}

TEST(Generator, RejectsInvalidSpec) {
  GenSpec spec = base_spec(1.0, TasksetType::Mixed, 1);
  spec.n_min = 3;
  spec.n_max = 2;
  EXPECT_THROW(generate_taskset(spec), ModelError);
  spec = base_spec(1.0, TasksetType::Mixed, 1);
  spec.period_min = 100;
  spec.period_max = 10;
  EXPECT_THROW(generate_taskset(spec), ModelError);
}

TEST(Generator, UnreachableTargetReported) {
  // Heavy tasks on long periods cannot fill a target far below one tick's
  // worth of utilization: every attempt ends with a dropped fill task.
  GenSpec spec;
  spec.m = 8;
  spec.type = TasksetType::Heavy;
  spec.util_target = Demand(10);  // 0.00001 cores
  spec.period_min = 10;
  spec.period_max = 15;
  spec.seed = 3;
  EXPECT_THROW(generate_taskset(spec), UnreachableTargetError);
}

TEST(TasksetTypeNames, RoundTrip) {
  EXPECT_EQ(taskset_type_from_string("light"), TasksetType::Light);
  EXPECT_EQ(taskset_type_from_string("mixed"), TasksetType::Mixed);
  EXPECT_EQ(taskset_type_from_string("heavy"), TasksetType::Heavy);
  EXPECT_THROW(taskset_type_from_string("bogus"), SchemaError);
  EXPECT_STREQ(to_string(TasksetType::Light), "light");
}
