#include "vgang/generator.hpp"

#include <algorithm>

#include "vgang/errors.hpp"
#include "vgang/rng.hpp"

namespace vgang {

namespace {

using Wide = __int128;

// Exact utilization bookkeeping as a reduced rational.
struct Util {
  Wide num = 0;
  Wide den = 1;

  static Wide gcd(Wide a, Wide b) {
    while (b != 0) {
      Wide t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  }

  void reduce() {
    Wide g = gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool positive() const { return num > 0; }

  // this -= c*h/t
  void subtract(std::uint64_t c, std::uint64_t h, std::uint64_t t) {
    num = num * static_cast<Wide>(t) -
          static_cast<Wide>(c) * static_cast<Wide>(h) * den;
    den = den * static_cast<Wide>(t);
    reduce();
  }

  // c*h/t >= this
  bool reached_by(std::uint64_t c, std::uint64_t h, std::uint64_t t) const {
    return static_cast<Wide>(c) * static_cast<Wide>(h) * den >=
           num * static_cast<Wide>(t);
  }

  // floor(this * t / h)
  std::uint64_t fill_wcet(std::uint64_t h, std::uint64_t t) const {
    return static_cast<std::uint64_t>(
        (num * static_cast<Wide>(t)) / (den * static_cast<Wide>(h)));
  }
};

void validate_spec(const GenSpec& spec) {
  if (spec.m < 1 || spec.n_min < 1 || spec.n_min > spec.n_max ||
      spec.period_min < 1 || spec.period_min > spec.period_max ||
      spec.wcet_frac_min.micros() < 1 ||
      spec.wcet_frac_min > spec.wcet_frac_max ||
      spec.wcet_frac_max.micros() > Demand::kScale ||
      spec.util_target.micros() < 0) {
    throw ModelError("invalid generator spec");
  }
}

std::pair<int, int> h_range(const GenSpec& spec) {
  switch (spec.type) {
    case TasksetType::Light:
      return {1, light_h_bound(spec.m)};
    case TasksetType::Heavy:
      return {light_h_bound(spec.m), spec.m};
    case TasksetType::Mixed:
      return {1, spec.m};
  }
  return {1, spec.m};
}

}  // namespace

const char* to_string(TasksetType type) {
  switch (type) {
    case TasksetType::Light:
      return "light";
    case TasksetType::Mixed:
      return "mixed";
    case TasksetType::Heavy:
      return "heavy";
  }
  return "?";
}

TasksetType taskset_type_from_string(const std::string& name) {
  if (name == "light") {
    return TasksetType::Light;
  }
  if (name == "mixed") {
    return TasksetType::Mixed;
  }
  if (name == "heavy") {
    return TasksetType::Heavy;
  }
  throw SchemaError("unknown taskset type: " + name);
}

int light_h_bound(int m) { return (3 * m + 9) / 10; }

Taskset generate_taskset(const GenSpec& spec) {
  validate_spec(spec);
  Taskset ts;
  ts.m = spec.m;
  ts.util_target = spec.util_target;
  if (spec.util_target.micros() == 0) {
    return ts;
  }

  Rng rng(spec.seed);
  const auto [h_lo, h_hi] = h_range(spec);

  for (int attempt = 0; attempt <= spec.max_fill_retries; ++attempt) {
    ts.entities.clear();
    Util remaining{spec.util_target.micros(), Demand::kScale};
    int seq = 0;
    bool filled = false;
    while (remaining.positive() && !filled) {
      std::uint64_t period =
          rng.uniform_u64(spec.period_min, spec.period_max);
      int n = rng.uniform_int(spec.n_min, spec.n_max);
      // WCET bounds for this period, at least one tick wide.
      std::uint64_t c_lo = std::max<std::uint64_t>(
          1, (period * spec.wcet_frac_min.micros() + Demand::kScale - 1) /
                 Demand::kScale);
      std::uint64_t c_hi = std::max(
          c_lo, period * spec.wcet_frac_max.micros() / Demand::kScale);
      for (int j = 0; j < n; ++j) {
        std::uint64_t c = rng.uniform_u64(c_lo, c_hi);
        int h = rng.uniform_int(h_lo, h_hi);
        std::int64_t demand =
            static_cast<std::int64_t>(rng.uniform_u64(0, Demand::kScale));

        if (remaining.reached_by(c, h, period)) {
          // This task crosses the target: shrink its WCET so the taskset
          // fills the remaining utilization, keeping the drawn h.
          std::uint64_t fill = remaining.fill_wcet(h, period);
          if (fill >= 1) {
            Task t;
            t.id = "t" + std::to_string(seq++);
            t.h = h;
            t.c_iso = TimeValue(fill);
            t.period = TimeValue(period);
            t.demand = Demand(demand);
            ts.entities.emplace_back(std::move(t));
          }
          filled = fill >= 1;
          remaining = Util{};
          break;
        }
        Task t;
        t.id = "t" + std::to_string(seq++);
        t.h = h;
        t.c_iso = TimeValue(c);
        t.period = TimeValue(period);
        t.demand = Demand(demand);
        ts.entities.emplace_back(std::move(t));
        remaining.subtract(c, h, period);
      }
    }
    if (filled) {
      return ts;
    }
    // The fill WCET rounded to zero: redraw the whole attempt.
  }
  throw UnreachableTargetError(
      "could not fill the utilization target within rounding after " +
      std::to_string(spec.max_fill_retries) + " retries");
}

}  // namespace vgang
