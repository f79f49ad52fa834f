#pragma once

// Worst-case broadcast complexity of symmetric functions, together with the
// two constructions that certify it: Kraft-feasible codeword lengths for
// the upper bound and fooling sets for the lower bound.

#include "colloq/core/math.hpp"
#include "colloq/core/types.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace colloq::worstcase {

/// Enumerative operations refuse more nodes or more candidate columns than
/// this.
inline constexpr int kMaxEnumNodes = 20;
inline constexpr std::size_t kMaxEnumColumns = std::size_t{1} << 20;

/// Per-instance bits, amortized over long blocks.
struct ComplexityResult {
  double lower_bits = 0.0;
  double upper_bits = 0.0;
  bool exact = false;
};

/// Closed-form complexity. Exact for threshold (AND, OR), delta and general
/// threshold functions; a lower/upper pair for interval and MAX. Parity is
/// not covered and throws DomainError, as does MAX over a non-uniform
/// alphabet.
ComplexityResult complexity(const FunctionSpec& spec);

/// Interval bounds with the a+b <= n / a+b > n case split.
ComplexityResult interval_bounds(int a, int b, int n);

/// log₂(mn+1) <= C(MAX_m) <= log₂ C(n+m, m).
ComplexityResult max_bounds(int m, int n);

/// Exact count of fooling columns for a delta function: the number of
/// columns of weight θ-1, θ or θ+1. Throws if it disagrees with the
/// displayed closed form C(n+1,θ) + C(n,θ+1).
BigInt delta_fooling_count(int n, int theta);

/// ∏ᵢ (1 + Y + … + Y^{mᵢ}): coefficient j counts alphabet vectors with sum j.
class GenPoly {
 public:
  explicit GenPoly(std::span<const int> alphabet);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  /// Zero outside 0..degree().
  const BigInt& coefficient(int j) const;
  std::span<const BigInt> coefficients() const { return coeffs_; }

 private:
  std::vector<BigInt> coeffs_;
};

/// [Y^θ] + [Y^{θ-1}] of the generating polynomial.
BigInt gen_threshold_fooling_count(int theta, std::span<const int> alphabet);

/// The same count by the negative-binomial route:
/// ∏(1 - Y^{mᵢ+1}) · Σₖ C(n+k-1, n-1) Yᵏ. Independent of GenPoly.
BigInt gen_threshold_count_series(int theta, std::span<const int> alphabet);

struct FoolingSet {
  std::vector<MeasurementVector> columns;

  std::size_t size() const { return columns.size(); }
  /// Per-instance lower bound log₂|columns|; the block family has
  /// |columns|^N members.
  double lower_bound_bits() const;
};

struct FoolingCheck {
  bool valid = true;
  /// The first pair that violates both fooling clauses.
  std::optional<std::pair<MeasurementVector, MeasurementVector>> witness;
};

/// Single-column fooling test: every distinct pair either has different
/// function values or admits a single-coordinate swap (in either direction)
/// that changes the value.
FoolingCheck is_fooling_set(const FunctionSpec& spec, std::span<const MeasurementVector> columns);

/// Every column of the measurement alphabet, in lexicographic order.
/// Throws LimitError past kMaxEnumColumns.
std::vector<MeasurementVector> enumerate_columns(const FunctionSpec& spec);

/// The weight-class fooling sets used for the lower bounds:
///  threshold θ: weights {θ-1, θ};     delta θ: {θ-1, θ, θ+1};
///  interval, a+b <= n: {a-1, b, b+1}; a+b > n: {a-1, a, b+1};
///  general threshold: vectors summing to θ-1 or θ;
///  MAX: the zero column and every j·eᵢ.
FoolingSet max_fooling_set(const FunctionSpec& spec);

/// Codeword length assigned to blocks of node n with the given symbol
/// counts.
struct CodeLength {
  int zeros = 0;
  int ones = 0;
  /// log₂ of the number of blocks sharing these counts, C(N, ones).
  double log2_multiplicity = 0.0;
  double length = 0.0;
  /// length plus the residual worst-case bits needed by nodes 1..n-1.
  double total_cost = 0.0;
};

struct CodeLengthPlan {
  int n = 0;
  int theta = 0;
  int block_length = 0;
  std::vector<CodeLength> entries;

  /// Σ over all 2^N blocks of 2^{-length}.
  double kraft_sum() const;
  double worst_case_total() const;
  /// The same plan with every length rounded up to an integer.
  CodeLengthPlan rounded() const;
};

/// Idealized lengths
///   l = N·log₂C(n+1,θ) − w⁰·log₂C(n,θ) − w¹·log₂C(n,θ−1)
/// for node n's first transmission under a Boolean threshold function.
CodeLengthPlan kraft_plan(int n, int theta, int block_length);

/// h(a,b,n) from the recursion h(a,b,n) = h(a-1,b-1,n-1) + h(a,b,n-1),
/// seeded with the exact threshold and delta values and constant functions.
BigInt interval_recursion_value(int a, int b, int n);

/// log₂ of interval_recursion_value.
double interval_recursion_upper(int a, int b, int n);

/// (b-a+1)·C(n,a-1) / C(n+1,b+1): the additive slack of the a+b <= n
/// upper bound relative to its leading term.
double interval_residual_ratio(int a, int b, int n);

}  // namespace colloq::worstcase
