#ifndef VGANG_JSON_IO_HPP
#define VGANG_JSON_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "vgang/analysis.hpp"
#include "vgang/model.hpp"

namespace vgang {

// Taskset schema:
//   { "m": int,
//     "tasks": [ { "id": str, "h": int, "c_iso": int, "period": int,
//                  "demand": float } ],
//     "gangs": [ { "id": str, "members": [task...] } ] }
// Optional per entity: "c_eff" (int), "priority" (int); optional top-level
// "util_target" (float). Parsing validates all model invariants and throws
// SchemaError with the offending field.

nlohmann::json taskset_to_json(const Taskset& ts);
Taskset taskset_from_json(const nlohmann::json& j);

/// { "schedulable": bool, "response_times": { id: int } }
nlohmann::json verdict_to_json(const SchedVerdict& v);

Taskset load_taskset(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

}  // namespace vgang

#endif  // VGANG_JSON_IO_HPP
