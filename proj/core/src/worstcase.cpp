#include "colloq/worstcase.hpp"

#include "colloq/core/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

namespace colloq::worstcase {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kExactTol = 1e-9;

ComplexityResult make_result(double lower, double upper) {
  return ComplexityResult{lower, upper, std::abs(upper - lower) <= kExactTol};
}

ComplexityResult exact_result(double bits) { return ComplexityResult{bits, bits, true}; }

void check_enum_nodes(int n) {
  if (n > kMaxEnumNodes) {
    throw LimitError("column enumeration is limited to n <= " + std::to_string(kMaxEnumNodes) + " nodes");
  }
}

/// Boolean columns whose weight lies in `weights`, ordered by their bitmask
/// (node 1 is the lowest bit).
std::vector<MeasurementVector> boolean_columns_with_weights(int n, const std::set<int>& weights) {
  check_enum_nodes(n);
  std::vector<MeasurementVector> out;
  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (!weights.contains(std::popcount(mask))) continue;
    MeasurementVector col;
    col.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) col.values[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1u);
    out.push_back(std::move(col));
  }
  return out;
}

/// Calls visit(column) for every vector in ∏{0..mᵢ}, first coordinate
/// varying slowest.
template <class Visit>
void for_each_column(const std::vector<int>& alphabet, Visit&& visit) {
  std::vector<int> column(alphabet.size(), 0);
  while (true) {
    visit(column);
    int pos = static_cast<int>(column.size()) - 1;
    while (pos >= 0 && column[static_cast<std::size_t>(pos)] == alphabet[static_cast<std::size_t>(pos)]) {
      column[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
    ++column[static_cast<std::size_t>(pos)];
  }
}

std::size_t column_count(const std::vector<int>& alphabet) {
  std::size_t count = 1;
  for (int m : alphabet) {
    count *= static_cast<std::size_t>(m) + 1;
    if (count > kMaxEnumColumns) {
      throw LimitError("column enumeration is limited to " + std::to_string(kMaxEnumColumns) + " candidate columns");
    }
  }
  return count;
}

int uniform_alphabet(const std::vector<int>& alphabet) {
  const int m = alphabet.front();
  if (!std::all_of(alphabet.begin(), alphabet.end(), [m](int v) { return v == m; })) {
    throw DomainError("MAX bounds are defined for a uniform alphabet m_1 = ... = m_n");
  }
  return m;
}

BigInt interval_h(int a, int b, int m, std::map<std::tuple<int, int, int>, BigInt>& memo) {
  const int lo = std::max(a, 0);
  const int hi = std::min(b, m);
  if (lo > hi) return 1;                  // constant 0
  if (lo == 0 && hi == m) return 1;       // constant 1
  if (lo == 0) return binom(m + 1, hi + 1);  // complement of the threshold hi+1
  if (hi == m) return binom(m + 1, lo);      // threshold lo
  if (lo == hi) return binom(m, lo - 1) + binom(m, lo) + binom(m, lo + 1);
  const auto key = std::make_tuple(lo, hi, m);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  BigInt value = interval_h(lo - 1, hi - 1, m - 1, memo) + interval_h(lo, hi, m - 1, memo);
  memo.emplace(key, value);
  return value;
}

}  // namespace

ComplexityResult interval_bounds(int a, int b, int n) {
  if (!(a >= 1 && a <= b && b <= n)) throw DomainError("interval requires 1 <= a <= b <= n");
  const BigInt width = b - a + 1;
  if (a + b <= n) {
    const BigInt lead = binom(n + 1, b + 1);
    const BigInt tail = binom(n, a - 1);
    return make_result(log2_big(lead + tail), log2_big(lead + width * tail));
  }
  const BigInt lead = binom(n + 1, a);
  const BigInt tail = binom(n, b + 1);
  return make_result(log2_big(lead + tail), log2_big(lead + width * tail));
}

ComplexityResult max_bounds(int m, int n) {
  if (m < 1 || n < 1) throw DomainError("MAX requires m >= 1 and n >= 1");
  return make_result(std::log2(static_cast<double>(m) * n + 1.0), log2_binom(n + m, m));
}

BigInt delta_fooling_count(int n, int theta) {
  if (!(theta >= 1 && theta <= n)) throw DomainError("delta requires 1 <= theta <= n");
  const BigInt by_weights = binom(n, theta - 1) + binom(n, theta) + binom(n, theta + 1);
  const BigInt displayed = binom(n + 1, theta) + binom(n, theta + 1);
  if (by_weights != displayed) throw Error("delta fooling count disagrees with its closed form");
  return by_weights;
}

ComplexityResult complexity(const FunctionSpec& spec) {
  const int n = spec.n();
  return std::visit(Overloaded{
                        [&](const fn::Threshold& t) { return exact_result(log2_binom(n + 1, t.theta)); },
                        [&](const fn::Delta& d) { return exact_result(log2_big(delta_fooling_count(n, d.theta))); },
                        [&](const fn::Interval& iv) { return interval_bounds(iv.a, iv.b, n); },
                        [&](const fn::Parity&) -> ComplexityResult {
                          throw DomainError("worst-case complexity is not provided for parity");
                        },
                        [&](const fn::Max& m) { return max_bounds(uniform_alphabet(m.alphabet), n); },
                        [&](const fn::GeneralThreshold& g) {
                          return exact_result(log2_big(gen_threshold_fooling_count(g.theta, g.alphabet)));
                        },
                    },
                    spec.kind());
}

GenPoly::GenPoly(std::span<const int> alphabet) : coeffs_{1} {
  for (int m : alphabet) {
    if (m < 0) throw DomainError("GenPoly: alphabet sizes must be non-negative");
    std::vector<BigInt> next(coeffs_.size() + static_cast<std::size_t>(m));
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      for (int s = 0; s <= m; ++s) next[j + static_cast<std::size_t>(s)] += coeffs_[j];
    }
    coeffs_ = std::move(next);
  }
}

const BigInt& GenPoly::coefficient(int j) const {
  static const BigInt zero = 0;
  if (j < 0 || j > degree()) return zero;
  return coeffs_[static_cast<std::size_t>(j)];
}

BigInt gen_threshold_fooling_count(int theta, std::span<const int> alphabet) {
  const int total = std::accumulate(alphabet.begin(), alphabet.end(), 0);
  if (!(theta >= 1 && theta <= total)) throw DomainError("general threshold requires 1 <= theta <= sum of m_i");
  const GenPoly poly(alphabet);
  return poly.coefficient(theta) + poly.coefficient(theta - 1);
}

BigInt gen_threshold_count_series(int theta, std::span<const int> alphabet) {
  const int total = std::accumulate(alphabet.begin(), alphabet.end(), 0);
  if (!(theta >= 1 && theta <= total)) throw DomainError("general threshold requires 1 <= theta <= sum of m_i");
  const int n = static_cast<int>(alphabet.size());
  // Numerator ∏(1 - Y^{mᵢ+1}), truncated at degree θ.
  std::vector<BigInt> numerator(static_cast<std::size_t>(theta) + 1);
  numerator[0] = 1;
  for (int m : alphabet) {
    const auto shift = static_cast<std::size_t>(m) + 1;
    for (std::size_t j = numerator.size(); j-- > shift;) numerator[j] -= numerator[j - shift];
  }
  // 1/(1-Y)^n = Σₖ C(n+k-1, n-1) Yᵏ.
  auto coefficient = [&](int t) {
    BigInt c = 0;
    for (int j = 0; j <= t; ++j) c += numerator[static_cast<std::size_t>(j)] * binom(n + t - j - 1, n - 1);
    return c;
  };
  return coefficient(theta) + coefficient(theta - 1);
}

double FoolingSet::lower_bound_bits() const {
  if (columns.empty()) return 0.0;
  return std::log2(static_cast<double>(columns.size()));
}

FoolingCheck is_fooling_set(const FunctionSpec& spec, std::span<const MeasurementVector> columns) {
  for (const auto& c : columns) c.check_against(spec);
  {
    std::set<MeasurementVector> seen(columns.begin(), columns.end());
    if (seen.size() != columns.size()) throw DomainError("is_fooling_set: columns must be distinct");
  }
  std::vector<int> values(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) values[i] = spec.evaluate(columns[i].values);

  std::vector<int> scratch(static_cast<std::size_t>(spec.n()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = i + 1; j < columns.size(); ++j) {
      if (values[i] != values[j]) continue;
      const auto& x = columns[i].values;
      const auto& y = columns[j].values;
      bool separated = false;
      for (std::size_t r = 0; r < x.size() && !separated; ++r) {
        if (x[r] == y[r]) continue;
        scratch = x;
        scratch[r] = y[r];
        if (spec.evaluate(scratch) != values[i]) {
          separated = true;
          break;
        }
        scratch = y;
        scratch[r] = x[r];
        if (spec.evaluate(scratch) != values[i]) separated = true;
      }
      if (!separated) return FoolingCheck{false, std::make_pair(columns[i], columns[j])};
    }
  }
  return FoolingCheck{};
}

std::vector<MeasurementVector> enumerate_columns(const FunctionSpec& spec) {
  check_enum_nodes(spec.n());
  const auto alphabet = spec.alphabets();
  std::vector<MeasurementVector> out;
  out.reserve(column_count(alphabet));
  for_each_column(alphabet, [&](const std::vector<int>& col) { out.push_back(MeasurementVector{col}); });
  return out;
}

FoolingSet max_fooling_set(const FunctionSpec& spec) {
  const int n = spec.n();
  return std::visit(
      Overloaded{
          [&](const fn::Threshold& t) { return FoolingSet{boolean_columns_with_weights(n, {t.theta - 1, t.theta})}; },
          [&](const fn::Delta& d) {
            return FoolingSet{boolean_columns_with_weights(n, {d.theta - 1, d.theta, d.theta + 1})};
          },
          [&](const fn::Interval& iv) {
            if (iv.a + iv.b <= n) return FoolingSet{boolean_columns_with_weights(n, {iv.a - 1, iv.b, iv.b + 1})};
            return FoolingSet{boolean_columns_with_weights(n, {iv.a - 1, iv.a, iv.b + 1})};
          },
          [&](const fn::Parity&) -> FoolingSet { throw DomainError("max_fooling_set: parity is not supported"); },
          [&](const fn::Max& m) {
            check_enum_nodes(n);
            FoolingSet set;
            set.columns.push_back(MeasurementVector{std::vector<int>(static_cast<std::size_t>(n), 0)});
            const int top = *std::max_element(m.alphabet.begin(), m.alphabet.end());
            for (int value = 1; value <= top; ++value) {
              for (int i = 0; i < n; ++i) {
                if (value > m.alphabet[static_cast<std::size_t>(i)]) continue;
                MeasurementVector col{std::vector<int>(static_cast<std::size_t>(n), 0)};
                col.values[static_cast<std::size_t>(i)] = value;
                set.columns.push_back(std::move(col));
              }
            }
            return set;
          },
          [&](const fn::GeneralThreshold& g) {
            check_enum_nodes(n);
            column_count(g.alphabet);
            FoolingSet set;
            for_each_column(g.alphabet, [&](const std::vector<int>& col) {
              const int s = std::accumulate(col.begin(), col.end(), 0);
              if (s == g.theta || s == g.theta - 1) set.columns.push_back(MeasurementVector{col});
            });
            return set;
          },
      },
      spec.kind());
}

double CodeLengthPlan::kraft_sum() const {
  long double sum = 0.0L;
  for (const auto& e : entries) {
    sum += std::exp2(static_cast<long double>(e.log2_multiplicity) - static_cast<long double>(e.length));
  }
  return static_cast<double>(sum);
}

double CodeLengthPlan::worst_case_total() const {
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, e.total_cost);
  return worst;
}

CodeLengthPlan CodeLengthPlan::rounded() const {
  CodeLengthPlan out = *this;
  for (auto& e : out.entries) {
    const double residual = e.total_cost - e.length;
    e.length = std::ceil(e.length - 1e-9);
    e.total_cost = e.length + residual;
  }
  return out;
}

CodeLengthPlan kraft_plan(int n, int theta, int block_length) {
  if (!(theta >= 1 && theta <= n)) throw DomainError("kraft_plan requires 1 <= theta <= n");
  if (block_length < 1) throw DomainError("kraft_plan requires block length N >= 1");
  const double full = log2_binom(n + 1, theta);
  const double after_zero = log2_binom(n, theta);      // nodes 1..n-1 still need θ ones
  const double after_one = log2_binom(n, theta - 1);   // nodes 1..n-1 need θ-1 ones
  CodeLengthPlan plan{n, theta, block_length, {}};
  plan.entries.reserve(static_cast<std::size_t>(block_length) + 1);
  for (int ones = 0; ones <= block_length; ++ones) {
    const int zeros = block_length - ones;
    CodeLength e;
    e.zeros = zeros;
    e.ones = ones;
    e.log2_multiplicity = log2_binom(block_length, ones);
    e.length = block_length * full - zeros * after_zero - ones * after_one;
    e.total_cost = e.length + zeros * after_zero + ones * after_one;
    plan.entries.push_back(e);
  }
  return plan;
}

BigInt interval_recursion_value(int a, int b, int n) {
  if (!(a >= 1 && a <= b && b <= n)) throw DomainError("interval requires 1 <= a <= b <= n");
  std::map<std::tuple<int, int, int>, BigInt> memo;
  return interval_h(a, b, n, memo);
}

double interval_recursion_upper(int a, int b, int n) { return log2_big(interval_recursion_value(a, b, n)); }

double interval_residual_ratio(int a, int b, int n) {
  if (!(a >= 1 && a <= b && b <= n)) throw DomainError("interval requires 1 <= a <= b <= n");
  const BigRational ratio(BigInt(b - a + 1) * binom(n, a - 1), binom(n + 1, b + 1));
  return ratio.convert_to<double>();
}

}  // namespace colloq::worstcase
