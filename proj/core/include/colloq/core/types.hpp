#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace colloq {

/// Nodes are numbered 1..n in the order of the sorted probability profile.
using NodeId = int;

/// An immutable subset of node ids {1..32}, stored as a bitmask.
///
/// Removing a node never re-indexes the others: node 3 is node 3 in every
/// subset that contains it.
class NodeSet {
 public:
  static constexpr int kMaxNodes = 32;

  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr NodeSet full(int n) {
    return NodeSet(n >= kMaxNodes ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1));
  }
  static NodeSet of(std::span<const NodeId> ids);

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(NodeId id) const { return (bits_ >> (id - 1)) & 1u; }

  constexpr NodeSet without(NodeId id) const { return NodeSet(bits_ & ~(std::uint32_t{1} << (id - 1))); }
  constexpr NodeSet with(NodeId id) const { return NodeSet(bits_ | (std::uint32_t{1} << (id - 1))); }

  /// The rank-th smallest id in the set, rank counted from 1. Returns 0 when
  /// rank is out of range.
  NodeId nth(int rank) const;

  std::vector<NodeId> ids() const;

  friend constexpr bool operator==(NodeSet, NodeSet) = default;
  friend constexpr auto operator<=>(NodeSet, NodeSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Bernoulli parameters p₁ ≤ p₂ ≤ … ≤ pₙ, one per node.
class ProbProfile {
 public:
  ProbProfile() = default;
  /// Throws DomainError unless every entry is in [0,1] and the list is
  /// non-decreasing.
  explicit ProbProfile(std::vector<double> probs);

  int size() const { return static_cast<int>(probs_.size()); }
  /// Probability that node `id` (1-based) measures a one.
  double p(NodeId id) const { return probs_[static_cast<std::size_t>(id - 1)]; }
  std::span<const double> probs() const { return probs_; }
  NodeSet all() const { return NodeSet::full(size()); }

  friend bool operator==(const ProbProfile&, const ProbProfile&) = default;

 private:
  std::vector<double> probs_;
};

/// A profile built from unsorted user input together with the mapping back
/// to the caller's numbering.
struct RankedProfile {
  ProbProfile profile;
  /// original_ids[r-1] is the caller's 1-based id of the node with rank r.
  std::vector<int> original_ids;
};

/// Sorts the input (stable, so equal probabilities keep their input order)
/// and records where each entry came from.
RankedProfile rank_profile(std::vector<double> unsorted);

namespace fn {
struct Threshold {
  int theta;
};
struct Delta {
  int theta;
};
struct Interval {
  int a;
  int b;
};
struct Parity {};
struct Max {
  std::vector<int> alphabet;
};
struct GeneralThreshold {
  int theta;
  std::vector<int> alphabet;
};
}  // namespace fn

/// Which symmetric function of the n measurements is computed.
class FunctionSpec {
 public:
  using Kind = std::variant<fn::Threshold, fn::Delta, fn::Interval, fn::Parity, fn::Max, fn::GeneralThreshold>;

  static FunctionSpec threshold(int n, int theta);
  static FunctionSpec and_of(int n) { return threshold(n, n); }
  static FunctionSpec or_of(int n) { return threshold(n, 1); }
  static FunctionSpec delta(int n, int theta);
  static FunctionSpec interval(int n, int a, int b);
  static FunctionSpec parity(int n);
  static FunctionSpec max(std::vector<int> alphabet);
  static FunctionSpec max_uniform(int n, int m) { return max(std::vector<int>(static_cast<std::size_t>(n), m)); }
  static FunctionSpec general_threshold(int theta, std::vector<int> alphabet);

  int n() const { return n_; }
  const Kind& kind() const { return kind_; }
  std::string_view kind_name() const;

  /// Largest value node `id` can measure (1 for Boolean kinds).
  int alphabet(NodeId id) const;
  std::vector<int> alphabets() const;
  bool boolean() const;

  /// Function value at a single measurement column.
  int evaluate(std::span<const int> column) const;

  friend bool operator==(const FunctionSpec& a, const FunctionSpec& b);

 private:
  FunctionSpec(int n, Kind kind) : n_(n), kind_(std::move(kind)) {}

  int n_ = 0;
  Kind kind_;
};

/// One measurement per node: values[i-1] ∈ {0..m_i}.
struct MeasurementVector {
  std::vector<int> values;

  int size() const { return static_cast<int>(values.size()); }
  int sum() const;
  /// Throws DomainError if the dimension or an alphabet bound is violated.
  void check_against(const FunctionSpec& spec) const;

  friend bool operator==(const MeasurementVector&, const MeasurementVector&) = default;
  friend auto operator<=>(const MeasurementVector&, const MeasurementVector&) = default;
};

/// Broadcast history of a single instance: who sent which symbol, in order.
class Transcript {
 public:
  struct Entry {
    NodeId node;
    int symbol;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  explicit Transcript(int n) : n_(n) {}

  /// Throws DomainError on a repeated node, an id outside 1..n, or a
  /// transcript that would exceed n entries.
  void append(NodeId node, int symbol);

  int n() const { return n_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  NodeSet speakers() const;

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  int n_;
  std::vector<Entry> entries_;
};

enum class CostKind { Unit, BinaryEntropy, PulseMin };

std::string_view to_string(CostKind kind);
/// Accepts "unit", "entropy"/"binary_entropy", "pulse"/"pulse_min".
CostKind parse_cost_kind(std::string_view name);

/// Per-transmission cost f(p) used by the ordering dynamic programs,
/// optionally transformed as scale·f(p) + offset.
struct CostFunction {
  CostKind kind = CostKind::Unit;
  double scale = 1.0;
  double offset = 0.0;

  constexpr CostFunction() = default;
  constexpr CostFunction(CostKind k) : kind(k) {}  // NOLINT(google-explicit-constructor)
  constexpr CostFunction(CostKind k, double s, double o) : kind(k), scale(s), offset(o) {}

  double operator()(double p) const;
};

/// Worst violation of the two structural hypotheses of the ordering rule:
/// symmetry f(p) = f(1-p), and f(p)/p non-increasing on (0,1].
struct CostHypothesisCheck {
  double max_asymmetry = 0.0;
  double max_ratio_increase = 0.0;
  bool holds(double tol = 1e-12) const { return max_asymmetry <= tol && max_ratio_increase <= tol; }
};

CostHypothesisCheck check_cost_hypotheses(const CostFunction& f, int grid_points = 10000);

}  // namespace colloq
