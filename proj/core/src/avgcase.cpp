#include "colloq/avgcase.hpp"

#include "colloq/core/error.hpp"
#include "colloq/core/math.hpp"
#include "colloq/core/rng.hpp"
#include "colloq/huffman.hpp"

#include <algorithm>
#include <cmath>

namespace colloq::avgcase {

namespace {

void check_params(int n, int theta, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("average-case analysis requires 0 < p < 1");
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(theta >= 1 && theta <= n)) throw DomainError("threshold requires 1 <= theta <= n");
}

/// C(i,j) pʲ (1-p)^{i-j} in double precision.
double binomial_term(int i, int j, double p) {
  double c = 1.0;
  for (int t = 1; t <= j; ++t) c = c * (i - j + t) / t;
  return c * std::pow(p, j) * std::pow(1.0 - p, i - j);
}

using Poly = std::vector<BigRational>;

Poly derivative(const Poly& a) {
  Poly out(a.size() > 1 ? a.size() - 1 : 1, BigRational(0));
  for (std::size_t k = 1; k < a.size(); ++k) out[k - 1] = a[k] * static_cast<long>(k);
  return out;
}

/// p'(x)·(1-x) + e·p(x).
Poly quotient_step(const Poly& p, int e) {
  const Poly dp = derivative(p);
  Poly out(std::max(p.size(), dp.size() + 1), BigRational(0));
  for (std::size_t k = 0; k < dp.size(); ++k) {
    out[k] += dp[k];
    out[k + 1] -= dp[k];
  }
  for (std::size_t k = 0; k < p.size(); ++k) out[k] += p[k] * e;
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

BigRational evaluate(const Poly& a, const BigRational& x) {
  BigRational acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Doubles are dyadic rationals; this recovers one exactly.
BigRational exact(double x) {
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  BigRational r(scaled);
  const int shift = exponent - 53;
  BigInt two_pow = BigInt(1) << std::abs(shift);
  if (shift >= 0) return r * BigRational(two_pow);
  return r / BigRational(two_pow);
}

BigRational power(const BigRational& base, int k) {
  BigRational acc = 1;
  for (int t = 0; t < k; ++t) acc *= base;
  return acc;
}

}  // namespace

double r_series(int n, int theta, double p) {
  check_params(n, theta, p);
  double total = 0.0;
  for (int i = theta; i <= n - 1; ++i) {
    for (int j = 0; j <= theta - 1; ++j) total += binomial_term(i, j, p);
  }
  return total;
}

double r_recursion(int n, int theta, double p) {
  check_params(n, theta, p);
  double r = 0.0;
  for (int t = 1; t <= theta; ++t) {
    double added = 0.0;
    for (int i = t; i <= n - 1; ++i) added += binomial_term(i, t - 1, p);
    double removed = 0.0;
    for (int j = 0; j <= t - 2; ++j) removed += binomial_term(t - 1, j, p);
    r += added - removed;
  }
  return r;
}

double r_bound(int theta, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("bound requires 0 < p < 1");
  return theta * (1.0 - p) / p;
}

AnalyticCost analytic_cost(int n, int theta, double p, std::uint64_t block_length) {
  check_params(n, theta, p);
  if (block_length < 1) throw DomainError("block length N must be >= 1");
  const double h = binary_entropy(p);
  const auto N = static_cast<double>(block_length);
  AnalyticCost out;
  out.r = r_series(n, theta, p);
  out.total_bits = theta * N * h + N * h * out.r;
  out.rate = out.total_bits / N;
  out.bound_rate = theta * h / p;
  return out;
}

DiscardRun simulate_discard(int n, int theta, double p, std::uint64_t block_length, std::uint64_t seed,
                            DiscardMode mode) {
  check_params(n, theta, p);
  if (block_length < 1) throw DomainError("block length N must be >= 1");
  const auto N = static_cast<std::size_t>(block_length);
  const double h = binary_entropy(p);

  DiscardRun run;
  run.n = n;
  run.theta = theta;
  run.p = p;
  run.block_length = block_length;
  run.mode = mode;
  run.analytic_rate = analytic_cost(n, theta, p, block_length).rate;

  Rng rng(seed);
  std::vector<std::uint8_t> x(N * static_cast<std::size_t>(n));
  for (int node = n; node >= 1; --node) {
    for (std::size_t j = 0; j < N; ++j) x[static_cast<std::size_t>(node - 1) * N + j] = rng.bernoulli(p) ? 1 : 0;
  }
  auto bit = [&](int node, std::size_t j) { return x[static_cast<std::size_t>(node - 1) * N + j]; };

  const huffman::SubblockCoder coder;
  huffman::BitWriter stream;
  std::vector<int> sender_ones(N, 0);
  for (int node = n; node >= 1; --node) {
    std::vector<std::uint8_t> bits;
    for (std::size_t j = 0; j < N; ++j) {
      if (sender_ones[j] < theta) bits.push_back(bit(node, j));
    }
    run.undetermined.push_back(bits.size());
    if (mode == DiscardMode::Huffman) coder.encode(bits, stream);
    std::size_t r = 0;
    for (std::size_t j = 0; j < N; ++j) {
      if (sender_ones[j] < theta) sender_ones[j] += bits[r++];
    }
  }

  // Receiver: rebuilds every count from what it heard, never from x.
  std::vector<int> heard(N, 0);
  if (mode == DiscardMode::Huffman) {
    huffman::BitReader reader(stream);
    for (int node = n; node >= 1; --node) {
      std::vector<std::size_t> open;
      for (std::size_t j = 0; j < N; ++j) {
        if (heard[j] < theta) open.push_back(j);
      }
      const auto bits = coder.decode(open.size(), reader);
      for (std::size_t r = 0; r < open.size(); ++r) heard[open[r]] += bits[r];
    }
    if (!reader.exhausted()) throw Error("receiver did not consume the whole broadcast");
    run.total_bits = static_cast<double>(stream.size());
  } else {
    double total = 0.0;
    for (std::uint64_t count : run.undetermined) total += static_cast<double>(count) * h;
    run.total_bits = total;
    heard = sender_ones;
  }

  for (std::size_t j = 0; j < N; ++j) {
    int ones = 0;
    for (int node = 1; node <= n; ++node) ones += bit(node, j);
    if ((heard[j] >= theta) != (ones >= theta)) ++run.errors;
  }
  run.rate = run.total_bits / static_cast<double>(block_length);
  return run;
}

std::vector<double> default_taylor_grid() {
  std::vector<double> grid;
  for (int j = 1; j <= 63; ++j) grid.push_back(j / 64.0);
  return grid;
}

TaylorReport check_taylor_identity(int theta_max, const std::vector<double>& grid) {
  if (theta_max < 1 || theta_max > 8) throw DomainError("Taylor check supports 1 <= theta <= 8");
  for (double x : grid) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("Taylor grid points must lie in (0,1)");
  }
  TaylorReport report;
  report.theta_max = theta_max;
  for (int theta = 1; theta <= theta_max; ++theta) {
    // g_θ = x^θ / (1-x), kept as numerator / (1-x)^e.
    Poly numerator(static_cast<std::size_t>(theta) + 1, BigRational(0));
    numerator[static_cast<std::size_t>(theta)] = 1;
    int e = 1;
    for (int d = 0; d < theta - 1; ++d) numerator = quotient_step(numerator, e++);

    BigInt factorial = 1;
    for (int t = 2; t <= theta - 1; ++t) factorial *= t;

    // (θ-1)!(1 − (1-x)^θ) expanded by the binomial theorem.
    Poly expected(static_cast<std::size_t>(theta) + 1, BigRational(0));
    for (int k = 1; k <= theta; ++k) {
      const BigRational c(binom(theta, k) * factorial);
      expected[static_cast<std::size_t>(k)] = (k % 2 == 1) ? c : BigRational(-c);
    }
    Poly trimmed = numerator;
    while (trimmed.size() > 1 && trimmed.back() == 0) trimmed.pop_back();
    if (e != theta || trimmed != expected) report.polynomial_identity = false;

    for (double xd : grid) {
      const BigRational x = exact(xd);
      const BigRational one_minus = BigRational(1) - x;
      const BigRational lhs = evaluate(numerator, x) / power(one_minus, e);
      const BigRational rhs = BigRational(factorial) * (BigRational(1) / power(one_minus, theta) - BigRational(1));
      const BigRational diff = lhs > rhs ? lhs - rhs : rhs - lhs;
      report.max_abs_error = std::max(report.max_abs_error, diff.convert_to<double>());
      ++report.points;
    }
  }
  return report;
}

}  // namespace colloq::avgcase
