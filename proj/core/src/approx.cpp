#include "colloq/approx.hpp"

#include "colloq/core/error.hpp"
#include "colloq/core/math.hpp"
#include "colloq/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace colloq::approx {

namespace {

void check_budget(const ProbProfile& profile, int budget) {
  if (profile.size() > kMaxBudgetNodes) {
    throw LimitError("budget DP is limited to n <= " + std::to_string(kMaxBudgetNodes) + " nodes");
  }
  if (budget < 0 || budget > profile.size()) throw DomainError("budget must lie in 0..n");
}

}  // namespace

std::string_view to_string(Metric metric) { return metric == Metric::Error ? "error" : "entropy"; }

Metric parse_metric(std::string_view name) {
  if (name == "error") return Metric::Error;
  if (name == "entropy") return Metric::Entropy;
  throw DomainError("unknown metric '" + std::string(name) + "' (expected error|entropy)");
}

double residual_prob(const ProbProfile& profile, NodeSet subset, int theta) {
  if (theta <= 0) return 1.0;
  if (theta > subset.size()) return 0.0;
  // dist[c] = P(exactly c ones so far).
  std::vector<double> dist{1.0};
  for (NodeId id : subset.ids()) {
    const double p = profile.p(id);
    std::vector<double> next(dist.size() + 1, 0.0);
    for (std::size_t c = 0; c < dist.size(); ++c) {
      next[c] += dist[c] * (1.0 - p);
      next[c + 1] += dist[c] * p;
    }
    dist = std::move(next);
  }
  double tail = 0.0;
  for (std::size_t c = static_cast<std::size_t>(theta); c < dist.size(); ++c) tail += dist[c];
  return std::clamp(tail, 0.0, 1.0);
}

BudgetDpTable::BudgetDpTable(ProbProfile profile, int theta, int budget, Metric metric)
    : profile_(std::move(profile)), theta_(theta), budget_(budget), metric_(metric) {
  check_budget(profile_, budget);
}

std::uint64_t BudgetDpTable::key(BudgetState s) {
  return (static_cast<std::uint64_t>(s.remaining.bits()) << 16) | (static_cast<std::uint64_t>(s.theta & 0xff) << 8) |
         static_cast<std::uint64_t>(s.budget & 0xff);
}

double BudgetDpTable::boundary(BudgetState s) const {
  const double q = residual_prob(profile_, s.remaining, s.theta);
  return metric_ == Metric::Error ? std::min(q, 1.0 - q) : binary_entropy(q);
}

const BudgetEntry& BudgetDpTable::entry(BudgetState s) {
  static const BudgetEntry determined_entry{};
  if (s.determined()) return determined_entry;
  if (const auto it = memo_.find(key(s)); it != memo_.end()) return it->second;
  BudgetEntry e;
  if (s.budget <= 0) {
    e.value = boundary(s);
  } else {
    const auto candidates = candidate_values(s);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [id, v] : candidates) best = std::min(best, v);
    e.value = best;
    for (const auto& [id, v] : candidates) {
      if (v <= best + ordering::kArgminRelTol * std::max(1.0, std::abs(best))) e.argmin = e.argmin.with(id);
    }
  }
  return memo_.emplace(key(s), e).first->second;
}

double BudgetDpTable::candidate_value(BudgetState s, NodeId node) {
  if (!s.remaining.contains(node)) throw DomainError("candidate node is not in the state");
  if (s.budget <= 0) throw DomainError("no budget left for a broadcast");
  const double p = profile_.p(node);
  const NodeSet rest = s.remaining.without(node);
  double v = 0.0;
  if (p > 0.0) v += p * value(BudgetState{rest, s.theta - 1, s.budget - 1});
  if (p < 1.0) v += (1.0 - p) * value(BudgetState{rest, s.theta, s.budget - 1});
  return v;
}

std::vector<std::pair<NodeId, double>> BudgetDpTable::candidate_values(BudgetState s) {
  std::vector<std::pair<NodeId, double>> out;
  if (s.determined() || s.budget <= 0) return out;
  for (NodeId id : s.remaining.ids()) out.emplace_back(id, candidate_value(s, id));
  return out;
}

BudgetDpTable budget_dp(const ProbProfile& profile, int theta, int budget, Metric metric) {
  check_budget(profile, budget);
  if (!(theta >= 1 && theta <= profile.size())) throw DomainError("threshold requires 1 <= theta <= n");
  BudgetDpTable table(profile, theta, budget, metric);
  table.root_value();
  return table;
}

double parity_residual_entropy(const ProbProfile& profile, NodeSet transmitters) {
  double odd = 0.0;
  for (NodeId id = 1; id <= profile.size(); ++id) {
    if (transmitters.contains(id)) continue;
    const double p = profile.p(id);
    odd = odd * (1.0 - p) + (1.0 - odd) * p;
  }
  return binary_entropy(std::clamp(odd, 0.0, 1.0));
}

ParityPlan parity_best_subset(const ProbProfile& profile, int budget) {
  if (budget < 0 || budget > profile.size()) throw DomainError("budget must lie in 0..n");
  std::vector<NodeId> ids(static_cast<std::size_t>(profile.size()));
  std::iota(ids.begin(), ids.end(), 1);
  std::stable_sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
    return binary_entropy(profile.p(a)) > binary_entropy(profile.p(b));
  });
  ParityPlan plan;
  for (int r = 0; r < budget; ++r) plan.transmitters = plan.transmitters.with(ids[static_cast<std::size_t>(r)]);
  plan.residual_entropy = parity_residual_entropy(profile, plan.transmitters);
  return plan;
}

ParityPlan parity_bruteforce(const ProbProfile& profile, int budget) {
  const int n = profile.size();
  if (n > kMaxBudgetNodes) {
    throw LimitError("parity brute force is limited to n <= " + std::to_string(kMaxBudgetNodes) + " nodes");
  }
  if (budget < 0 || budget > n) throw DomainError("budget must lie in 0..n");
  ParityPlan best;
  best.residual_entropy = std::numeric_limits<double>::infinity();
  if (budget == 0) {
    best.residual_entropy = parity_residual_entropy(profile, NodeSet{});
    return best;
  }
  // Gosper's hack walks the size-`budget` masks in increasing order.
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = (std::uint64_t{1} << budget) - 1; mask < limit;) {
    const NodeSet s(static_cast<std::uint32_t>(mask));
    const double h = parity_residual_entropy(profile, s);
    if (h < best.residual_entropy) best = ParityPlan{s, h};
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return best;
}

}  // namespace colloq::approx
