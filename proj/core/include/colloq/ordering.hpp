#pragma once

// Optimal transmission ordering for Boolean threshold functions: the
// subset-lattice dynamic program, the k-th least likely rule and the
// inequality chain behind its optimality.

#include "colloq/core/rng.hpp"
#include "colloq/core/types.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace colloq::ordering {

inline constexpr int kMaxDpNodes = 24;

/// Relative tolerance used for every argmin comparison: a candidate joins
/// the argmin set when its cost is within kArgminRelTol·max(1,|best|) of the
/// best cost.
inline constexpr double kArgminRelTol = 1e-12;

/// Residual problem: compute Π_theta over the nodes in `remaining`.
struct DpState {
  NodeSet remaining;
  int theta = 0;

  /// Determined already: no ones needed, or more ones needed than nodes left.
  bool terminal() const { return theta <= 0 || theta > remaining.size(); }

  friend auto operator<=>(const DpState&, const DpState&) = default;
};

/// States after `node` broadcasts a 0 (first) or a 1 (second).
std::pair<DpState, DpState> children(DpState s, NodeId node);

struct DpEntry {
  double cost = 0.0;
  /// Every minimizing transmitter; empty on terminal states.
  NodeSet argmin;
};

/// Memoized solution of
///   C(S, θ) = min_{i∈S} f(pᵢ) + pᵢ·C(S−i, θ−1) + (1−pᵢ)·C(S−i, θ)
/// with C = 0 on terminal states. States are solved lazily on first query;
/// zero-probability branches are never expanded.
class DpTable {
 public:
  DpTable(ProbProfile profile, int theta, CostFunction cost);

  const ProbProfile& profile() const { return profile_; }
  int theta() const { return theta_; }
  const CostFunction& cost_function() const { return cost_; }
  DpState root() const { return DpState{profile_.all(), theta_}; }

  const DpEntry& entry(DpState s);
  double cost(DpState s) { return entry(s).cost; }
  NodeSet argmin(DpState s) { return entry(s).argmin; }
  double root_cost() { return cost(root()); }

  /// f(pᵢ) + pᵢ·C(S−i, θ−1) + (1−pᵢ)·C(S−i, θ) for one transmitter.
  double candidate_cost(DpState s, NodeId node);
  /// The same for every node of a non-terminal state, in id order.
  std::vector<std::pair<NodeId, double>> candidate_costs(DpState s);

  std::size_t states_solved() const { return solved_; }

 private:
  static constexpr std::size_t kDenseLimit = std::size_t{1} << 20;

  DpEntry* slot(DpState s);
  DpEntry compute(DpState s);

  ProbProfile profile_;
  int theta_;
  CostFunction cost_;
  std::vector<double> fcache_;
  bool dense_;
  std::vector<DpEntry> dense_entries_;
  std::vector<bool> dense_known_;
  std::unordered_map<std::uint64_t, DpEntry> sparse_;
  std::size_t solved_ = 0;
};

/// Builds the table and solves the root. Throws LimitError past
/// kMaxDpNodes and DomainError unless 1 <= θ <= n.
DpTable solve_dp(const ProbProfile& profile, int theta, const CostFunction& cost);

/// A Markov ordering strategy: one transmitter per residual state. Optimal
/// strategies need no more, since the expected cost of the rest of the
/// computation depends on the history only through the state.
class PolicyTree {
 public:
  PolicyTree() = default;
  PolicyTree(int n, int theta) : n_(n), theta_(theta) {}

  int n() const { return n_; }
  int theta() const { return theta_; }
  DpState root() const { return DpState{NodeSet::full(n_), theta_}; }

  /// Throws DomainError if the state is terminal or `node` is not in it.
  void set(DpState s, NodeId node);
  std::optional<NodeId> choice(DpState s) const;
  const std::map<DpState, NodeId>& choices() const { return choices_; }

  /// Non-terminal states reachable from the root, depth first with the bit-0
  /// child first. Throws DomainError if a reachable state has no choice.
  std::vector<DpState> reachable() const;

  friend bool operator==(const PolicyTree&, const PolicyTree&) = default;

 private:
  int n_ = 0;
  int theta_ = 0;
  std::map<DpState, NodeId> choices_;
};

/// The (k+1)-th lowest id among the remaining nodes, k = |S| − θ. The
/// profile is sorted, so that is the (k+1)-th least likely node to hold a
/// one, equal probabilities ordered by id.
NodeId rule_choice(DpState s);

/// The k-th least likely rule. Depends on the profile only through its
/// order, so only n is needed.
PolicyTree rule_policy(int n, int theta);
PolicyTree rule_policy(const ProbProfile& profile, int theta);

/// Always the first node of `order` that has not transmitted yet.
PolicyTree static_order_policy(int n, int theta, const std::vector<NodeId>& order);

/// The lowest-id DP minimizer at each reachable state.
PolicyTree dp_policy(DpTable& table);

/// Exact expected cost of a policy. Throws DomainError if the policy is
/// malformed; a terminal root costs 0.
double policy_cost(const PolicyTree& policy, const ProbProfile& profile, const CostFunction& cost);

struct RuleViolation {
  DpState state;
  NodeId rule_node = 0;
  NodeSet argmin;
  double rule_cost = 0.0;
  double best_cost = 0.0;
};

struct RuleCheck {
  bool holds = true;
  std::size_t states_checked = 0;
  std::optional<RuleViolation> violation;
};

/// Checks rule_choice ∈ argmin at every non-terminal state reachable from
/// (all nodes, θ) under any strategy.
RuleCheck verify_rule(const ProbProfile& profile, int theta, const CostFunction& cost);

/// Which bound of the induction hypothesis an entry tests.
///  A:  T ≤ f(pᵢ) − f(p_{k+1})
///  B:  S¹ ≤ (1−p_{k+1})f(pᵢ) − (1−pᵢ)f(p_{k+1})      (i ≥ k+2)
///  C:  S² ≤ p_{k+1}f(pᵢ) − pᵢf(p_{k+1})              (i ≤ k)
///  BridgeB: T ≤ S¹ + p_{k+1}f(pᵢ) − pᵢf(p_{k+1})     (i ≥ k+2)
///  BridgeC: T ≤ S² + (1−p_{k+1})f(pᵢ) − (1−pᵢ)f(p_{k+1})  (i ≤ k)
enum class Inequality { A, B, C, BridgeB, BridgeC };
inline constexpr int kInequalityCount = 5;

const char* to_string(Inequality kind);

struct InequalityEntry {
  Inequality kind = Inequality::A;
  /// The node set Xᵐ the quantities are defined on; k and i are ranks in it.
  NodeSet subset;
  int k = 0;
  int i = 0;
  double value = 0.0;
  double bound = 0.0;
  double slack() const { return bound - value; }
};

struct InequalityReport {
  std::size_t checked = 0;
  std::size_t profiles = 0;
  /// Smallest slack per Inequality, +inf if none were checked.
  std::array<double, kInequalityCount> min_slack;
  std::array<std::size_t, kInequalityCount> counts{};
  std::optional<InequalityEntry> worst;
  /// Every evaluated entry, only when requested.
  std::vector<InequalityEntry> entries;

  InequalityReport();
  double min_overall_slack() const;
  bool holds(double tol = 1e-9) const { return min_overall_slack() >= -tol; }
  void merge(const InequalityReport& other);
};

/// Evaluates all five inequalities for every subset of the profile's nodes
/// and every valid (k, i). Covers every threshold at once, since the
/// residual problems of Π_θ are the thresholds of the subsets.
InequalityReport check_appendix_inequalities(const ProbProfile& profile, const CostFunction& cost,
                                             bool keep_entries = false);

/// The same over `samples` random sorted profiles of n nodes.
InequalityReport check_appendix_inequalities(int n, const CostFunction& cost, int samples, std::uint64_t seed);

/// Pulse model: one symbol is signalled by a unit-energy pulse, the other by
/// silence.
struct PulseMapping {
  /// The bit value a pulse stands for.
  int pulse_symbol = 1;
  /// Expected energy per transmission, min(p, 1−p).
  double energy = 0.0;
};

/// Pulse for a one when p <= 1/2, otherwise pulse for a zero.
PulseMapping pulse_mapping(double p);

void to_json(nlohmann::json& j, const DpState& s);
void to_json(nlohmann::json& j, const PolicyTree& policy);
PolicyTree policy_from_json(const nlohmann::json& j);

}  // namespace colloq::ordering
