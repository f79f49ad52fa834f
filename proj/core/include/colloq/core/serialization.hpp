#pragma once

// JSON encodings of the core value types. Field names are stable; the
// matching schemas live in schemas/core.schema.json.

#include "colloq/core/types.hpp"

#include <nlohmann/json.hpp>

namespace colloq {

inline constexpr const char* kSchemaVersion = "1";

void to_json(nlohmann::json& j, const NodeSet& s);
void from_json(const nlohmann::json& j, NodeSet& s);

void to_json(nlohmann::json& j, const ProbProfile& p);
ProbProfile profile_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const FunctionSpec& spec);
FunctionSpec function_spec_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const MeasurementVector& m);
void from_json(const nlohmann::json& j, MeasurementVector& m);

void to_json(nlohmann::json& j, const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, CostKind kind);
void from_json(const nlohmann::json& j, CostKind& kind);

}  // namespace colloq
