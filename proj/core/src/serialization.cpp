#include "colloq/core/serialization.hpp"

#include "colloq/core/error.hpp"

#include <string>

namespace colloq {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing JSON field '") + name + "'");
  return j.at(name);
}

}  // namespace

void to_json(nlohmann::json& j, const NodeSet& s) { j = s.ids(); }

void from_json(const nlohmann::json& j, NodeSet& s) {
  const auto ids = j.get<std::vector<int>>();
  s = NodeSet::of(ids);
}

void to_json(nlohmann::json& j, const ProbProfile& p) {
  j = nlohmann::json{{"probs", std::vector<double>(p.probs().begin(), p.probs().end())}};
}

ProbProfile profile_from_json(const nlohmann::json& j) {
  return ProbProfile(field(j, "probs").get<std::vector<double>>());
}

void to_json(nlohmann::json& j, const FunctionSpec& spec) {
  j = nlohmann::json{{"kind", std::string(spec.kind_name())}, {"n", spec.n()}};
  std::visit(Overloaded{
                 [&](const fn::Threshold& t) { j["theta"] = t.theta; },
                 [&](const fn::Delta& d) { j["theta"] = d.theta; },
                 [&](const fn::Interval& iv) {
                   j["a"] = iv.a;
                   j["b"] = iv.b;
                 },
                 [&](const fn::Parity&) {},
                 [&](const fn::Max& m) { j["alphabet"] = m.alphabet; },
                 [&](const fn::GeneralThreshold& g) {
                   j["theta"] = g.theta;
                   j["alphabet"] = g.alphabet;
                 },
             },
             spec.kind());
}

FunctionSpec function_spec_from_json(const nlohmann::json& j) {
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "max") return FunctionSpec::max(field(j, "alphabet").get<std::vector<int>>());
  if (kind == "general_threshold") {
    return FunctionSpec::general_threshold(field(j, "theta").get<int>(), field(j, "alphabet").get<std::vector<int>>());
  }
  const int n = field(j, "n").get<int>();
  if (kind == "threshold") return FunctionSpec::threshold(n, field(j, "theta").get<int>());
  if (kind == "delta") return FunctionSpec::delta(n, field(j, "theta").get<int>());
  if (kind == "interval") return FunctionSpec::interval(n, field(j, "a").get<int>(), field(j, "b").get<int>());
  if (kind == "parity") return FunctionSpec::parity(n);
  throw DomainError("unknown function kind '" + kind + "'");
}

void to_json(nlohmann::json& j, const MeasurementVector& m) { j = m.values; }

void from_json(const nlohmann::json& j, MeasurementVector& m) { m.values = j.get<std::vector<int>>(); }

void to_json(nlohmann::json& j, const Transcript& t) {
  auto entries = nlohmann::json::array();
  for (const auto& e : t.entries()) entries.push_back({{"node", e.node}, {"symbol", e.symbol}});
  j = nlohmann::json{{"n", t.n()}, {"entries", std::move(entries)}};
}

Transcript transcript_from_json(const nlohmann::json& j) {
  Transcript t(field(j, "n").get<int>());
  for (const auto& e : field(j, "entries")) t.append(field(e, "node").get<int>(), field(e, "symbol").get<int>());
  return t;
}

void to_json(nlohmann::json& j, CostKind kind) { j = std::string(to_string(kind)); }

void from_json(const nlohmann::json& j, CostKind& kind) { kind = parse_cost_kind(j.get<std::string>()); }

}  // namespace colloq
