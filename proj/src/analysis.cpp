#include "vgang/analysis.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "vgang/errors.hpp"

namespace vgang {

Taskset assign_priorities(const Taskset& ts) {
  Taskset out = ts;
  std::vector<std::size_t> order(out.entities.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Entity& ea = out.entities[a];
    const Entity& eb = out.entities[b];
    if (entity_period(ea) != entity_period(eb)) {
      return entity_period(ea) < entity_period(eb);
    }
    if (entity_wcet(ea) != entity_wcet(eb)) {
      return entity_wcet(ea) < entity_wcet(eb);
    }
    return entity_id(ea) < entity_id(eb);
  });
  int priority = static_cast<int>(order.size());
  for (std::size_t idx : order) {
    set_entity_priority(out.entities[idx], priority--);
  }
  return out;
}

ResponseTime response_time(const Entity& entity,
                           const std::vector<Entity>& higher_priority) {
  const TimeValue c = entity_wcet(entity);
  const TimeValue period = entity_period(entity);

  ResponseTime result;
  TimeValue r = c;
  result.iterations = 0;
  while (true) {
    if (r > period) {
      result.value = r;
      result.converged = false;
      return result;
    }
    TimeValue next = c;
    for (const Entity& hp : higher_priority) {
      next += entity_wcet(hp) * ceil_div(r, entity_period(hp));
    }
    ++result.iterations;
    assert(next >= r);  // the fixed-point sequence never decreases
    if (next == r) {
      result.value = r;
      result.converged = true;
      return result;
    }
    r = next;
  }
}

SchedVerdict schedulability_test(const Taskset& ts) {
  for (const Entity& e : ts.entities) {
    if (!entity_priority(e)) {
      throw InvalidConfigError("entity " + entity_id(e) +
                               " has no priority assigned");
    }
  }
  SchedVerdict verdict;
  verdict.schedulable = true;
  for (const Entity& e : ts.entities) {
    std::vector<Entity> hp;
    for (const Entity& other : ts.entities) {
      if (*entity_priority(other) > *entity_priority(e)) {
        hp.push_back(other);
      }
    }
    ResponseTime rt = response_time(e, hp);
    verdict.schedulable = verdict.schedulable && rt.converged;
    verdict.per_entity.emplace(entity_id(e), rt);
  }
  return verdict;
}

}  // namespace vgang
