#include "vgang/model.hpp"

#include <algorithm>
#include <set>

#include "vgang/errors.hpp"

namespace vgang {

Demand Demand::from_double(double value) {
  return Demand(static_cast<std::int64_t>(
      value * static_cast<double>(kScale) + (value >= 0 ? 0.5 : -0.5)));
}

void validate_task(const Task& task) {
  if (task.id.empty()) {
    throw ModelError("task id must be non-empty");
  }
  if (task.h < 1) {
    throw ModelError("task " + task.id + ": h must be >= 1");
  }
  if (task.c_iso < TimeValue(1)) {
    throw ModelError("task " + task.id + ": c_iso must be >= 1 tick");
  }
  if (task.period < task.c_iso) {
    throw ModelError("task " + task.id + ": period must be >= c_iso");
  }
  if (task.demand < Demand(0) || task.demand > Demand(Demand::kScale)) {
    throw ModelError("task " + task.id + ": demand must be in [0, 1]");
  }
  if (task.c_eff && *task.c_eff < task.c_iso) {
    throw ModelError("task " + task.id + ": c_eff must be >= c_iso");
  }
}

VirtualGang make_virtual_gang(std::vector<Task> members, int m) {
  std::string id;
  for (const Task& t : members) {
    if (!id.empty()) {
      id += '+';
    }
    id += t.id;
  }
  return make_virtual_gang(std::move(members), m, std::move(id));
}

VirtualGang make_virtual_gang(std::vector<Task> members, int m,
                              std::string id) {
  if (members.empty()) {
    throw ModelError("virtual gang needs at least one member");
  }
  std::set<std::string> ids;
  VirtualGang gang;
  gang.period = members.front().period;
  gang.c_iso = TimeValue(0);
  for (const Task& t : members) {
    validate_task(t);
    if (!ids.insert(t.id).second) {
      throw ModelError("duplicate member id " + t.id);
    }
    if (t.period != gang.period) {
      throw PeriodMismatchError("member " + t.id +
                                " does not share the gang period");
    }
    gang.h += t.h;
    gang.c_iso = std::max(gang.c_iso, t.c_iso);
    gang.demand += t.demand;
  }
  if (gang.h > m) {
    throw NotViableError("gang needs " + std::to_string(gang.h) +
                         " cores but the platform has " + std::to_string(m));
  }
  gang.id = std::move(id);
  gang.members = std::move(members);
  return gang;
}

const std::string& entity_id(const Entity& e) {
  return std::visit([](const auto& x) -> const std::string& { return x.id; },
                    e);
}

int entity_h(const Entity& e) {
  return std::visit([](const auto& x) { return x.h; }, e);
}

TimeValue entity_c_iso(const Entity& e) {
  return std::visit([](const auto& x) { return x.c_iso; }, e);
}

TimeValue entity_wcet(const Entity& e) {
  return std::visit([](const auto& x) { return x.wcet(); }, e);
}

TimeValue entity_period(const Entity& e) {
  return std::visit([](const auto& x) { return x.period; }, e);
}

Demand entity_demand(const Entity& e) {
  return std::visit([](const auto& x) { return x.demand; }, e);
}

std::optional<int> entity_priority(const Entity& e) {
  return std::visit([](const auto& x) { return x.priority; }, e);
}

void set_entity_priority(Entity& e, int priority) {
  std::visit([&](auto& x) { x.priority = priority; }, e);
}

TimeValue config_completion_time(const std::vector<VirtualGang>& gangs) {
  TimeValue total(0);
  for (const VirtualGang& g : gangs) {
    total += g.wcet();
  }
  return total;
}

void validate_taskset(const Taskset& ts) {
  if (ts.m < 1) {
    throw ModelError("platform core count must be >= 1");
  }
  std::set<std::string> ids;
  for (const Entity& e : ts.entities) {
    if (const Task* t = std::get_if<Task>(&e)) {
      validate_task(*t);
    }
    if (entity_h(e) > ts.m) {
      throw ModelError("entity " + entity_id(e) +
                       " needs more cores than the platform has");
    }
    if (!ids.insert(entity_id(e)).second) {
      throw ModelError("duplicate entity id " + entity_id(e));
    }
  }
}

Demand total_utilization(const Taskset& ts) {
  // Exact rational accumulation: sum of C*h/T with a running common
  // denominator, reduced as we go. Values stay far below the 128-bit range
  // for any realistic taskset.
  using Wide = __int128;
  auto gcd = [](Wide a, Wide b) {
    while (b != 0) {
      Wide t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  };
  Wide num = 0;
  Wide den = 1;
  for (const Entity& e : ts.entities) {
    Wide c = entity_c_iso(e).ticks();
    Wide h = entity_h(e);
    Wide t = entity_period(e).ticks();
    num = num * t + c * h * den;
    den = den * t;
    Wide g = gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  // Round half-up to micro units.
  Wide micros = (num * Demand::kScale * 2 + den) / (2 * den);
  return Demand(static_cast<std::int64_t>(micros));
}

}  // namespace vgang
