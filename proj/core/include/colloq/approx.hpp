#pragma once

// Approximate computation when only a fixed number of broadcasts is
// allowed: threshold functions under error probability or conditional
// entropy, and the parity function.

#include "colloq/core/types.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace colloq::approx {

inline constexpr int kMaxBudgetNodes = 20;

enum class Metric { Error, Entropy };

std::string_view to_string(Metric metric);
/// Accepts "error" and "entropy".
Metric parse_metric(std::string_view name);

/// Compute Π_theta over `remaining` with `budget` broadcasts left.
struct BudgetState {
  NodeSet remaining;
  int theta = 0;
  int budget = 0;

  bool determined() const { return theta <= 0 || theta > remaining.size(); }
  friend bool operator==(const BudgetState&, const BudgetState&) = default;
};

struct BudgetEntry {
  double value = 0.0;
  /// Every minimizing transmitter; empty when nothing is sent.
  NodeSet argmin;
};

/// P(Σ_{i∈subset} Xᵢ >= theta) by exact convolution of the count
/// distribution; 1 when theta <= 0, and 0 when theta exceeds the subset.
double residual_prob(const ProbProfile& profile, NodeSet subset, int theta);

/// Memoized
///   V(S, θ, b) = min_i pᵢ·V(S−i, θ−1, b−1) + (1−pᵢ)·V(S−i, θ, b−1),
/// with V = 0 once the value is determined and, at b = 0, min(q, 1−q) for
/// Error or H(q) for Entropy, q = residual_prob(S, θ). A broadcast uses one
/// unit of budget whatever its value.
class BudgetDpTable {
 public:
  BudgetDpTable(ProbProfile profile, int theta, int budget, Metric metric);

  const ProbProfile& profile() const { return profile_; }
  Metric metric() const { return metric_; }
  BudgetState root() const { return BudgetState{profile_.all(), theta_, budget_}; }

  const BudgetEntry& entry(BudgetState s);
  double value(BudgetState s) { return entry(s).value; }
  double root_value() { return value(root()); }

  /// The objective when `node` broadcasts first and the rest is optimal.
  double candidate_value(BudgetState s, NodeId node);
  /// The same for every remaining node, in id order; empty when the state
  /// is determined or out of budget.
  std::vector<std::pair<NodeId, double>> candidate_values(BudgetState s);

 private:
  double boundary(BudgetState s) const;
  static std::uint64_t key(BudgetState s);

  ProbProfile profile_;
  int theta_;
  int budget_;
  Metric metric_;
  std::unordered_map<std::uint64_t, BudgetEntry> memo_;
};

/// Throws LimitError past kMaxBudgetNodes and DomainError unless
/// 1 <= θ <= n and 0 <= budget <= n.
BudgetDpTable budget_dp(const ProbProfile& profile, int theta, int budget, Metric metric);

struct ParityPlan {
  NodeSet transmitters;
  /// H(Φ | X_S) = H(P(parity of the nodes outside S is odd)).
  double residual_entropy = 0.0;
};

/// H of the parity of every node outside `transmitters`, folding
/// q ← q(1−p) + (1−q)p in id order.
double parity_residual_entropy(const ProbProfile& profile, NodeSet transmitters);

/// The `budget` nodes of highest binary entropy, ties to the lowest id.
ParityPlan parity_best_subset(const ProbProfile& profile, int budget);

/// Minimum over every subset of size `budget`; the first minimizer in
/// colexicographic order wins ties.
ParityPlan parity_bruteforce(const ProbProfile& profile, int budget);

}  // namespace colloq::approx
