#include "colloq/ordering.hpp"

#include "colloq/core/error.hpp"
#include "colloq/core/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace colloq::ordering {

namespace {

void check_theta(int n, int theta) {
  if (!(theta >= 1 && theta <= n)) throw DomainError("threshold requires 1 <= theta <= n");
}

PolicyTree build_policy(int n, int theta, const std::function<NodeId(DpState)>& chooser) {
  PolicyTree policy(n, theta);
  std::vector<DpState> stack{policy.root()};
  while (!stack.empty()) {
    const DpState s = stack.back();
    stack.pop_back();
    if (s.terminal() || policy.choice(s)) continue;
    const NodeId node = chooser(s);
    policy.set(s, node);
    const auto [zero, one] = children(s, node);
    stack.push_back(one);
    stack.push_back(zero);
  }
  return policy;
}

bool within_tolerance(double candidate, double best) {
  return candidate <= best + kArgminRelTol * std::max(1.0, std::abs(best));
}

}  // namespace

std::pair<DpState, DpState> children(DpState s, NodeId node) {
  const NodeSet rest = s.remaining.without(node);
  return {DpState{rest, s.theta}, DpState{rest, s.theta - 1}};
}

DpTable::DpTable(ProbProfile profile, int theta, CostFunction cost)
    : profile_(std::move(profile)), theta_(theta), cost_(cost) {
  const int n = profile_.size();
  if (n > kMaxDpNodes) {
    throw LimitError("ordering DP is limited to n <= " + std::to_string(kMaxDpNodes) + " nodes");
  }
  fcache_.reserve(static_cast<std::size_t>(n));
  for (double p : profile_.probs()) fcache_.push_back(cost_(p));
  const std::size_t dense_size = (std::size_t{1} << n) * static_cast<std::size_t>(n + 1);
  dense_ = dense_size <= kDenseLimit;
  if (dense_) {
    dense_entries_.resize(dense_size);
    dense_known_.assign(dense_size, false);
  }
}

DpEntry* DpTable::slot(DpState s) {
  if (dense_) {
    const std::size_t index =
        static_cast<std::size_t>(s.remaining.bits()) * static_cast<std::size_t>(profile_.size() + 1) +
        static_cast<std::size_t>(s.theta);
    return dense_known_[index] ? &dense_entries_[index] : nullptr;
  }
  const auto it = sparse_.find((static_cast<std::uint64_t>(s.remaining.bits()) << 8) | static_cast<std::uint64_t>(s.theta));
  return it == sparse_.end() ? nullptr : &it->second;
}

const DpEntry& DpTable::entry(DpState s) {
  static const DpEntry terminal_entry{};
  if (s.terminal()) return terminal_entry;
  if ((s.remaining.bits() & ~profile_.all().bits()) != 0) throw DomainError("DP state refers to unknown nodes");
  if (const DpEntry* known = slot(s)) return *known;
  DpEntry e = compute(s);
  ++solved_;
  if (dense_) {
    const std::size_t index =
        static_cast<std::size_t>(s.remaining.bits()) * static_cast<std::size_t>(profile_.size() + 1) +
        static_cast<std::size_t>(s.theta);
    dense_entries_[index] = e;
    dense_known_[index] = true;
    return dense_entries_[index];
  }
  return sparse_.emplace((static_cast<std::uint64_t>(s.remaining.bits()) << 8) | static_cast<std::uint64_t>(s.theta), e)
      .first->second;
}

double DpTable::candidate_cost(DpState s, NodeId node) {
  if (!s.remaining.contains(node)) throw DomainError("candidate node is not in the state");
  const double p = profile_.p(node);
  const auto [zero, one] = children(s, node);
  double total = fcache_[static_cast<std::size_t>(node - 1)];
  if (p > 0.0) total += p * cost(one);
  if (p < 1.0) total += (1.0 - p) * cost(zero);
  return total;
}

std::vector<std::pair<NodeId, double>> DpTable::candidate_costs(DpState s) {
  std::vector<std::pair<NodeId, double>> out;
  if (s.terminal()) return out;
  for (NodeId id : s.remaining.ids()) out.emplace_back(id, candidate_cost(s, id));
  return out;
}

DpEntry DpTable::compute(DpState s) {
  const auto candidates = candidate_costs(s);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [id, c] : candidates) best = std::min(best, c);
  DpEntry e{best, NodeSet{}};
  for (const auto& [id, c] : candidates) {
    if (within_tolerance(c, best)) e.argmin = e.argmin.with(id);
  }
  return e;
}

DpTable solve_dp(const ProbProfile& profile, int theta, const CostFunction& cost) {
  if (profile.size() > kMaxDpNodes) {
    throw LimitError("ordering DP is limited to n <= " + std::to_string(kMaxDpNodes) + " nodes");
  }
  check_theta(profile.size(), theta);
  DpTable table(profile, theta, cost);
  table.root_cost();
  return table;
}

void PolicyTree::set(DpState s, NodeId node) {
  if (s.terminal()) throw DomainError("cannot assign a transmitter to a terminal state");
  if (!s.remaining.contains(node)) throw DomainError("transmitter " + std::to_string(node) + " is not in the state");
  choices_[s] = node;
}

std::optional<NodeId> PolicyTree::choice(DpState s) const {
  const auto it = choices_.find(s);
  if (it == choices_.end()) return std::nullopt;
  return it->second;
}

std::vector<DpState> PolicyTree::reachable() const {
  std::vector<DpState> out;
  std::map<DpState, bool> seen;
  std::vector<DpState> stack{root()};
  while (!stack.empty()) {
    const DpState s = stack.back();
    stack.pop_back();
    if (s.terminal() || seen[s]) continue;
    seen[s] = true;
    const auto node = choice(s);
    if (!node) throw DomainError("policy has no transmitter for a reachable state");
    out.push_back(s);
    const auto [zero, one] = children(s, *node);
    stack.push_back(one);
    stack.push_back(zero);
  }
  return out;
}

NodeId rule_choice(DpState s) {
  if (s.terminal()) throw DomainError("rule_choice on a terminal state");
  const int k = s.remaining.size() - s.theta;
  return s.remaining.nth(k + 1);
}

PolicyTree rule_policy(int n, int theta) {
  check_theta(n, theta);
  return build_policy(n, theta, rule_choice);
}

PolicyTree rule_policy(const ProbProfile& profile, int theta) { return rule_policy(profile.size(), theta); }

PolicyTree static_order_policy(int n, int theta, const std::vector<NodeId>& order) {
  {
    std::vector<NodeId> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<NodeId> expected(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) expected[static_cast<std::size_t>(i)] = i + 1;
    if (sorted != expected) throw DomainError("static order must be a permutation of 1..n");
  }
  return build_policy(n, theta, [&](DpState s) {
    for (NodeId id : order) {
      if (s.remaining.contains(id)) return id;
    }
    return NodeId{0};
  });
}

PolicyTree dp_policy(DpTable& table) {
  return build_policy(table.profile().size(), table.theta(),
                      [&](DpState s) { return table.argmin(s).nth(1); });
}

double policy_cost(const PolicyTree& policy, const ProbProfile& profile, const CostFunction& cost) {
  if (policy.n() != profile.size()) throw DomainError("policy and profile disagree on n");
  std::map<DpState, double> memo;
  std::function<double(DpState)> eval = [&](DpState s) -> double {
    if (s.terminal()) return 0.0;
    if (const auto it = memo.find(s); it != memo.end()) return it->second;
    const auto node = policy.choice(s);
    if (!node) throw DomainError("policy has no transmitter for a reachable state");
    const double p = profile.p(*node);
    const auto [zero, one] = children(s, *node);
    double total = cost(p);
    if (p > 0.0) total += p * eval(one);
    if (p < 1.0) total += (1.0 - p) * eval(zero);
    memo.emplace(s, total);
    return total;
  };
  return eval(policy.root());
}

RuleCheck verify_rule(const ProbProfile& profile, int theta, const CostFunction& cost) {
  check_theta(profile.size(), theta);
  DpTable table(profile, theta, cost);
  RuleCheck out;
  const int n = profile.size();
  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint32_t bits = 1; bits < limit; ++bits) {
    const NodeSet s(bits);
    const int removed = n - s.size();
    // Every strategy removes one node per broadcast and lowers θ by the
    // number of ones among them.
    for (int t = std::max(1, theta - removed); t <= theta; ++t) {
      const DpState state{s, t};
      if (state.terminal()) continue;
      ++out.states_checked;
      const NodeId node = rule_choice(state);
      const DpEntry& e = table.entry(state);
      if (!e.argmin.contains(node)) {
        out.holds = false;
        if (!out.violation) {
          out.violation = RuleViolation{state, node, e.argmin, table.candidate_cost(state, node), e.cost};
        }
      }
    }
  }
  return out;
}

const char* to_string(Inequality kind) {
  switch (kind) {
    case Inequality::A:
      return "a";
    case Inequality::B:
      return "b";
    case Inequality::C:
      return "c";
    case Inequality::BridgeB:
      return "bridge_b";
    case Inequality::BridgeC:
      return "bridge_c";
  }
  return "a";
}

InequalityReport::InequalityReport() { min_slack.fill(std::numeric_limits<double>::infinity()); }

double InequalityReport::min_overall_slack() const { return *std::min_element(min_slack.begin(), min_slack.end()); }

void InequalityReport::merge(const InequalityReport& other) {
  checked += other.checked;
  profiles += other.profiles;
  for (int j = 0; j < kInequalityCount; ++j) {
    min_slack[static_cast<std::size_t>(j)] = std::min(min_slack[static_cast<std::size_t>(j)], other.min_slack[static_cast<std::size_t>(j)]);
    counts[static_cast<std::size_t>(j)] += other.counts[static_cast<std::size_t>(j)];
  }
  if (other.worst && (!worst || other.worst->slack() < worst->slack())) worst = other.worst;
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

InequalityReport check_appendix_inequalities(const ProbProfile& profile, const CostFunction& cost, bool keep_entries) {
  const int n = profile.size();
  DpTable table(profile, n, cost);
  InequalityReport report;
  report.profiles = 1;

  auto record = [&](Inequality kind, NodeSet subset, int k, int i, double value, double bound) {
    const InequalityEntry e{kind, subset, k, i, value, bound};
    const auto slot = static_cast<std::size_t>(kind);
    ++report.checked;
    ++report.counts[slot];
    report.min_slack[slot] = std::min(report.min_slack[slot], e.slack());
    if (!report.worst || e.slack() < report.worst->slack()) report.worst = e;
    if (keep_entries) report.entries.push_back(e);
  };

  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint32_t bits = 1; bits < limit; ++bits) {
    const NodeSet u(bits);
    const int m = u.size();
    const auto ids = u.ids();
    auto node = [&](int rank) { return ids[static_cast<std::size_t>(rank - 1)]; };
    auto p = [&](int rank) { return profile.p(node(rank)); };
    auto f = [&](int rank) { return cost(p(rank)); };
    auto c = [&](int t, NodeSet s) { return table.cost(DpState{s, t}); };

    for (int k = 0; k < m; ++k) {
      const int r = k + 1;
      const double pr = p(r);
      const NodeSet without_r = u.without(node(r));
      const double lead = pr * c(m - k - 1, without_r) + (1.0 - pr) * c(m - k, without_r);
      for (int i = 1; i <= m; ++i) {
        const double pi = p(i);
        const NodeSet without_i = u.without(node(i));
        const double t_value = lead - (pi * c(m - k - 1, without_i) + (1.0 - pi) * c(m - k, without_i));
        record(Inequality::A, u, k, i, t_value, f(i) - f(r));
        if (i >= k + 2) {
          const double s1 = (pr - pi) * c(m - k - 1, without_r.without(node(i))) + (1.0 - pr) * c(m - k, without_r) -
                            (1.0 - pi) * c(m - k, without_i);
          record(Inequality::B, u, k, i, s1, (1.0 - pr) * f(i) - (1.0 - pi) * f(r));
          record(Inequality::BridgeB, u, k, i, t_value, s1 + pr * f(i) - pi * f(r));
        } else if (i < k + 1) {
          const double s2 = (pi - pr) * c(m - k - 1, without_i.without(node(r))) + pr * c(m - k - 1, without_r) -
                            pi * c(m - k - 1, without_i);
          record(Inequality::C, u, k, i, s2, pr * f(i) - pi * f(r));
          record(Inequality::BridgeC, u, k, i, t_value, s2 + (1.0 - pr) * f(i) - (1.0 - pi) * f(r));
        }
      }
    }
  }
  return report;
}

InequalityReport check_appendix_inequalities(int n, const CostFunction& cost, int samples, std::uint64_t seed) {
  if (n < 1 || n > kMaxDpNodes) throw DomainError("appendix check requires 1 <= n <= " + std::to_string(kMaxDpNodes));
  Rng rng(seed);
  InequalityReport report;
  for (int s = 0; s < samples; ++s) {
    report.merge(check_appendix_inequalities(ProbProfile(rng.sorted_uniforms(static_cast<std::size_t>(n))), cost));
  }
  return report;
}

PulseMapping pulse_mapping(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0,1]");
  if (p <= 0.5) return PulseMapping{1, p};
  return PulseMapping{0, 1.0 - p};
}

void to_json(nlohmann::json& j, const DpState& s) {
  j = nlohmann::json{{"remaining", s.remaining}, {"theta", s.theta}};
}

void to_json(nlohmann::json& j, const PolicyTree& policy) {
  auto states = nlohmann::json::array();
  for (const DpState& s : policy.reachable()) {
    nlohmann::json entry = s;
    entry["transmitter"] = *policy.choice(s);
    states.push_back(std::move(entry));
  }
  j = nlohmann::json{{"n", policy.n()}, {"theta", policy.theta()}, {"states", std::move(states)}};
}

PolicyTree policy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("theta") || !j.contains("states")) {
    throw DomainError("policy JSON needs 'n', 'theta' and 'states'");
  }
  PolicyTree policy(j.at("n").get<int>(), j.at("theta").get<int>());
  for (const auto& e : j.at("states")) {
    const DpState s{e.at("remaining").get<NodeSet>(), e.at("theta").get<int>()};
    policy.set(s, e.at("transmitter").get<int>());
  }
  return policy;
}

}  // namespace colloq::ordering
