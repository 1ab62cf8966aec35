#include "vgang/json_io.hpp"

#include <cmath>
#include <fstream>

#include "vgang/errors.hpp"

namespace vgang {

namespace {

nlohmann::json task_to_json(const Task& t) {
  nlohmann::json j{{"id", t.id},
                   {"h", t.h},
                   {"c_iso", t.c_iso.ticks()},
                   {"period", t.period.ticks()},
                   {"demand", t.demand.to_double()}};
  if (t.c_eff) {
    j["c_eff"] = t.c_eff->ticks();
  }
  if (t.priority) {
    j["priority"] = *t.priority;
  }
  return j;
}

std::uint64_t require_uint(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer() ||
      j[field].get<std::int64_t>() < 0) {
    throw SchemaError(std::string("missing or invalid field: ") + field);
  }
  return j[field].get<std::uint64_t>();
}

Task task_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw SchemaError("task entry is not an object");
  }
  if (!j.contains("id") || !j["id"].is_string()) {
    throw SchemaError("missing or invalid field: id");
  }
  if (!j.contains("demand") || !j["demand"].is_number()) {
    throw SchemaError("missing or invalid field: demand");
  }
  Task t;
  t.id = j["id"].get<std::string>();
  t.h = static_cast<int>(require_uint(j, "h"));
  t.c_iso = TimeValue(require_uint(j, "c_iso"));
  t.period = TimeValue(require_uint(j, "period"));
  t.demand = Demand(static_cast<std::int64_t>(
      std::llround(j["demand"].get<double>() * Demand::kScale)));
  if (j.contains("c_eff")) {
    t.c_eff = TimeValue(require_uint(j, "c_eff"));
  }
  if (j.contains("priority")) {
    if (!j["priority"].is_number_integer()) {
      throw SchemaError("missing or invalid field: priority");
    }
    t.priority = j["priority"].get<int>();
  }
  try {
    validate_task(t);
  } catch (const ModelError& e) {
    throw SchemaError(e.what());
  }
  return t;
}

}  // namespace

nlohmann::json taskset_to_json(const Taskset& ts) {
  nlohmann::json tasks = nlohmann::json::array();
  nlohmann::json gangs = nlohmann::json::array();
  for (const Entity& e : ts.entities) {
    if (const Task* t = std::get_if<Task>(&e)) {
      tasks.push_back(task_to_json(*t));
    } else {
      const VirtualGang& g = std::get<VirtualGang>(e);
      nlohmann::json jg{{"id", g.id}};
      nlohmann::json members = nlohmann::json::array();
      for (const Task& member : g.members) {
        members.push_back(task_to_json(member));
      }
      jg["members"] = std::move(members);
      if (g.c_eff) {
        jg["c_eff"] = g.c_eff->ticks();
      }
      if (g.priority) {
        jg["priority"] = *g.priority;
      }
      gangs.push_back(std::move(jg));
    }
  }
  nlohmann::json j{{"m", ts.m}, {"tasks", std::move(tasks)}};
  if (!gangs.empty()) {
    j["gangs"] = std::move(gangs);
  }
  if (ts.util_target) {
    j["util_target"] = ts.util_target->to_double();
  }
  return j;
}

Taskset taskset_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw SchemaError("taskset document is not an object");
  }
  Taskset ts;
  ts.m = static_cast<int>(require_uint(j, "m"));
  if (!j.contains("tasks") || !j["tasks"].is_array()) {
    throw SchemaError("missing or invalid field: tasks");
  }
  for (const nlohmann::json& jt : j["tasks"]) {
    ts.entities.emplace_back(task_from_json(jt));
  }
  if (j.contains("gangs")) {
    if (!j["gangs"].is_array()) {
      throw SchemaError("missing or invalid field: gangs");
    }
    for (const nlohmann::json& jg : j["gangs"]) {
      if (!jg.is_object() || !jg.contains("id") || !jg["id"].is_string() ||
          !jg.contains("members") || !jg["members"].is_array() ||
          jg["members"].empty()) {
        throw SchemaError("gang entry needs an id and non-empty members");
      }
      std::vector<Task> members;
      for (const nlohmann::json& jt : jg["members"]) {
        members.push_back(task_from_json(jt));
      }
      VirtualGang gang;
      try {
        gang = make_virtual_gang(std::move(members), ts.m,
                                 jg["id"].get<std::string>());
      } catch (const Error& e) {
        throw SchemaError(e.what());
      }
      if (jg.contains("c_eff")) {
        gang.c_eff = TimeValue(require_uint(jg, "c_eff"));
        if (*gang.c_eff < gang.c_iso) {
          throw SchemaError("gang c_eff below its isolation WCET");
        }
      }
      if (jg.contains("priority")) {
        if (!jg["priority"].is_number_integer()) {
          throw SchemaError("missing or invalid field: priority");
        }
        gang.priority = jg["priority"].get<int>();
      }
      ts.entities.emplace_back(std::move(gang));
    }
  }
  if (j.contains("util_target")) {
    if (!j["util_target"].is_number()) {
      throw SchemaError("missing or invalid field: util_target");
    }
    ts.util_target = Demand(static_cast<std::int64_t>(
        std::llround(j["util_target"].get<double>() * Demand::kScale)));
  }
  try {
    validate_taskset(ts);
  } catch (const ModelError& e) {
    throw SchemaError(e.what());
  }
  return ts;
}

nlohmann::json verdict_to_json(const SchedVerdict& v) {
  nlohmann::json times = nlohmann::json::object();
  for (const auto& [id, rt] : v.per_entity) {
    times[id] = rt.value.ticks();
  }
  return nlohmann::json{{"schedulable", v.schedulable},
                        {"response_times", std::move(times)}};
}

Taskset load_taskset(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return taskset_from_json(j);
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw SchemaError("cannot write " + path);
  }
  out << j.dump(2) << '\n';
}

}  // namespace vgang
