#ifndef VGANG_GENERATOR_HPP
#define VGANG_GENERATOR_HPP

#include <cstdint>
#include <string>

#include "vgang/model.hpp"

namespace vgang {

/// Parallelism profile of a generated taskset: the range h is drawn from.
enum class TasksetType { Light, Mixed, Heavy };

const char* to_string(TasksetType type);
TasksetType taskset_type_from_string(const std::string& name);

/**
 * Parameters for random parallel-taskset generation. Defaults follow the
 * simulation setup: periods uniform in [10, 1500], 2..5 tasks per period,
 * isolation WCETs in [T/10, T/5], demand factors uniform in [0, 1].
 */
struct GenSpec {
  int m = 8;
  Demand util_target;
  TasksetType type = TasksetType::Mixed;
  int n_min = 2;  // tasks generated per period draw
  int n_max = 5;
  std::uint64_t period_min = 10;
  std::uint64_t period_max = 1500;
  Demand wcet_frac_min{100'000};  // T/10
  Demand wcet_frac_max{200'000};  // T/5
  std::uint64_t seed = 0;
  int max_fill_retries = 16;
};

/// Upper end of the lightly-parallel h range: ceil(0.3 * m).
int light_h_bound(int m);

/**
 * Draws tasks period-group by period-group until the utilization target
 * is reached; the task that crosses the target gets its WCET shrunk so the
 * total lands within one tick of rounding below the target (the drawn h
 * is kept). If the shrunk WCET would fall under one tick the attempt is
 * redrawn; after `max_fill_retries` failed attempts the target is
 * reported unreachable.
 */
Taskset generate_taskset(const GenSpec& spec);

}  // namespace vgang

#endif  // VGANG_GENERATOR_HPP
