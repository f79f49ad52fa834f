#include "colloq/core/types.hpp"

#include "colloq/core/error.hpp"
#include "colloq/core/math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace colloq {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

void check_node_count(int n) {
  require(n >= 1 && n <= NodeSet::kMaxNodes, "node count must be in 1.." + std::to_string(NodeSet::kMaxNodes));
}

void check_alphabet(const std::vector<int>& alphabet) {
  check_node_count(static_cast<int>(alphabet.size()));
  for (int m : alphabet) require(m >= 1, "alphabet sizes m_i must be >= 1");
}

}  // namespace

NodeSet NodeSet::of(std::span<const NodeId> ids) {
  std::uint32_t bits = 0;
  for (NodeId id : ids) {
    require(id >= 1 && id <= kMaxNodes, "node id out of range");
    bits |= std::uint32_t{1} << (id - 1);
  }
  return NodeSet(bits);
}

NodeId NodeSet::nth(int rank) const {
  if (rank < 1) return 0;
  std::uint32_t rest = bits_;
  for (int r = 1; rest != 0; ++r) {
    const int bit = std::countr_zero(rest);
    if (r == rank) return bit + 1;
    rest &= rest - 1;
  }
  return 0;
}

std::vector<NodeId> NodeSet::ids() const {
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint32_t rest = bits_; rest != 0; rest &= rest - 1) out.push_back(std::countr_zero(rest) + 1);
  return out;
}

ProbProfile::ProbProfile(std::vector<double> probs) : probs_(std::move(probs)) {
  require(static_cast<int>(probs_.size()) <= NodeSet::kMaxNodes, "profiles are limited to 32 nodes");
  for (double p : probs_) {
    require(p >= 0.0 && p <= 1.0, "probabilities must lie in [0,1], got " + std::to_string(p));
  }
  require(std::is_sorted(probs_.begin(), probs_.end()), "probabilities must be sorted non-decreasing");
}

RankedProfile rank_profile(std::vector<double> unsorted) {
  std::vector<int> order(unsorted.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return unsorted[static_cast<std::size_t>(a)] < unsorted[static_cast<std::size_t>(b)];
  });
  std::vector<double> sorted;
  std::vector<int> ids;
  sorted.reserve(order.size());
  ids.reserve(order.size());
  for (int idx : order) {
    sorted.push_back(unsorted[static_cast<std::size_t>(idx)]);
    ids.push_back(idx + 1);
  }
  return RankedProfile{ProbProfile(std::move(sorted)), std::move(ids)};
}

FunctionSpec FunctionSpec::threshold(int n, int theta) {
  check_node_count(n);
  require(theta >= 1 && theta <= n, "threshold requires 1 <= theta <= n");
  return FunctionSpec(n, fn::Threshold{theta});
}

FunctionSpec FunctionSpec::delta(int n, int theta) {
  check_node_count(n);
  require(theta >= 1 && theta <= n, "delta requires 1 <= theta <= n");
  return FunctionSpec(n, fn::Delta{theta});
}

FunctionSpec FunctionSpec::interval(int n, int a, int b) {
  check_node_count(n);
  require(a >= 1 && a <= b && b <= n, "interval requires 1 <= a <= b <= n");
  return FunctionSpec(n, fn::Interval{a, b});
}

FunctionSpec FunctionSpec::parity(int n) {
  check_node_count(n);
  return FunctionSpec(n, fn::Parity{});
}

FunctionSpec FunctionSpec::max(std::vector<int> alphabet) {
  check_alphabet(alphabet);
  const int n = static_cast<int>(alphabet.size());
  return FunctionSpec(n, fn::Max{std::move(alphabet)});
}

FunctionSpec FunctionSpec::general_threshold(int theta, std::vector<int> alphabet) {
  check_alphabet(alphabet);
  const int total = std::accumulate(alphabet.begin(), alphabet.end(), 0);
  require(theta >= 1 && theta <= total, "general threshold requires 1 <= theta <= sum of m_i");
  const int n = static_cast<int>(alphabet.size());
  return FunctionSpec(n, fn::GeneralThreshold{theta, std::move(alphabet)});
}

std::string_view FunctionSpec::kind_name() const {
  return std::visit(Overloaded{
                        [](const fn::Threshold&) { return std::string_view("threshold"); },
                        [](const fn::Delta&) { return std::string_view("delta"); },
                        [](const fn::Interval&) { return std::string_view("interval"); },
                        [](const fn::Parity&) { return std::string_view("parity"); },
                        [](const fn::Max&) { return std::string_view("max"); },
                        [](const fn::GeneralThreshold&) { return std::string_view("general_threshold"); },
                    },
                    kind_);
}

int FunctionSpec::alphabet(NodeId id) const {
  if (const auto* m = std::get_if<fn::Max>(&kind_)) return m->alphabet[static_cast<std::size_t>(id - 1)];
  if (const auto* g = std::get_if<fn::GeneralThreshold>(&kind_)) return g->alphabet[static_cast<std::size_t>(id - 1)];
  return 1;
}

std::vector<int> FunctionSpec::alphabets() const {
  std::vector<int> out(static_cast<std::size_t>(n_));
  for (int i = 1; i <= n_; ++i) out[static_cast<std::size_t>(i - 1)] = alphabet(i);
  return out;
}

bool FunctionSpec::boolean() const {
  return !std::holds_alternative<fn::Max>(kind_) && !std::holds_alternative<fn::GeneralThreshold>(kind_);
}

int FunctionSpec::evaluate(std::span<const int> column) const {
  const int sum = std::accumulate(column.begin(), column.end(), 0);
  return std::visit(Overloaded{
                        [&](const fn::Threshold& t) { return sum >= t.theta ? 1 : 0; },
                        [&](const fn::Delta& d) { return sum == d.theta ? 1 : 0; },
                        [&](const fn::Interval& iv) { return (sum >= iv.a && sum <= iv.b) ? 1 : 0; },
                        [&](const fn::Parity&) { return sum % 2; },
                        [&](const fn::Max&) { return column.empty() ? 0 : *std::max_element(column.begin(), column.end()); },
                        [&](const fn::GeneralThreshold& g) { return sum >= g.theta ? 1 : 0; },
                    },
                    kind_);
}

bool operator==(const FunctionSpec& a, const FunctionSpec& b) {
  if (a.n_ != b.n_ || a.kind_.index() != b.kind_.index()) return false;
  return std::visit(Overloaded{
                        [&](const fn::Threshold& t) { return t.theta == std::get<fn::Threshold>(b.kind_).theta; },
                        [&](const fn::Delta& d) { return d.theta == std::get<fn::Delta>(b.kind_).theta; },
                        [&](const fn::Interval& iv) {
                          const auto& o = std::get<fn::Interval>(b.kind_);
                          return iv.a == o.a && iv.b == o.b;
                        },
                        [&](const fn::Parity&) { return true; },
                        [&](const fn::Max& m) { return m.alphabet == std::get<fn::Max>(b.kind_).alphabet; },
                        [&](const fn::GeneralThreshold& g) {
                          const auto& o = std::get<fn::GeneralThreshold>(b.kind_);
                          return g.theta == o.theta && g.alphabet == o.alphabet;
                        },
                    },
                    a.kind_);
}

int MeasurementVector::sum() const { return std::accumulate(values.begin(), values.end(), 0); }

void MeasurementVector::check_against(const FunctionSpec& spec) const {
  require(size() == spec.n(), "measurement vector has dimension " + std::to_string(size()) + ", expected " +
                                  std::to_string(spec.n()));
  for (int i = 1; i <= spec.n(); ++i) {
    const int v = values[static_cast<std::size_t>(i - 1)];
    require(v >= 0 && v <= spec.alphabet(i), "measurement of node " + std::to_string(i) + " outside its alphabet");
  }
}

void Transcript::append(NodeId node, int symbol) {
  require(node >= 1 && node <= n_, "transcript node id out of range");
  require(static_cast<int>(entries_.size()) < n_, "transcript longer than n");
  require(!speakers().contains(node), "node " + std::to_string(node) + " already transmitted");
  entries_.push_back({node, symbol});
}

NodeSet Transcript::speakers() const {
  NodeSet s;
  for (const auto& e : entries_) s = s.with(e.node);
  return s;
}

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::Unit:
      return "unit";
    case CostKind::BinaryEntropy:
      return "entropy";
    case CostKind::PulseMin:
      return "pulse";
  }
  return "unit";
}

CostKind parse_cost_kind(std::string_view name) {
  if (name == "unit") return CostKind::Unit;
  if (name == "entropy" || name == "binary_entropy") return CostKind::BinaryEntropy;
  if (name == "pulse" || name == "pulse_min") return CostKind::PulseMin;
  throw DomainError("unknown cost kind '" + std::string(name) + "' (expected unit|entropy|pulse)");
}

double CostFunction::operator()(double p) const {
  double base = 1.0;
  switch (kind) {
    case CostKind::Unit:
      base = 1.0;
      break;
    case CostKind::BinaryEntropy:
      base = binary_entropy(p);
      break;
    case CostKind::PulseMin:
      base = std::min(p, 1.0 - p);
      break;
  }
  return scale * base + offset;
}

CostHypothesisCheck check_cost_hypotheses(const CostFunction& f, int grid_points) {
  CostHypothesisCheck out;
  double previous_ratio = 0.0;
  for (int j = 0; j <= grid_points; ++j) {
    const double p = static_cast<double>(j) / grid_points;
    out.max_asymmetry = std::max(out.max_asymmetry, std::abs(f(p) - f(1.0 - p)));
    if (j == 0) continue;
    const double ratio = f(p) / p;
    if (j > 1) {
      const double increase = (ratio - previous_ratio) / std::max(1.0, std::abs(previous_ratio));
      out.max_ratio_increase = std::max(out.max_ratio_increase, increase);
    }
    previous_ratio = ratio;
  }
  return out;
}

}  // namespace colloq
