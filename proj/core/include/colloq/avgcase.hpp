#pragma once

// Average-case block computation of Π_θ with i.i.d. Bernoulli(p) nodes:
// nodes speak in reverse order and each one drops the instances that
// already hold θ ones.

#include <cstdint>
#include <vector>

namespace colloq::avgcase {

struct AnalyticCost {
  /// θ·N·H(p) + N·H(p)·R_θⁿ.
  double total_bits = 0.0;
  /// total_bits / N.
  double rate = 0.0;
  /// θ·H(p)/p.
  double bound_rate = 0.0;
  double r = 0.0;
};

/// Throws DomainError unless 0 < p < 1, 1 <= θ <= n and N >= 1.
AnalyticCost analytic_cost(int n, int theta, double p, std::uint64_t block_length);

/// R_θⁿ = Σ_{i=θ}^{n-1} Σ_{j=0}^{θ-1} C(i,j) pʲ (1-p)^{i-j}, summed directly.
double r_series(int n, int theta, double p);

/// The same value through the recursion in θ, starting from R₀ⁿ = 0:
///   R_θ = R_{θ-1} + Σ_{i=θ}^{n-1} C(i,θ-1) p^{θ-1}(1-p)^{i-θ+1}
///                 − Σ_{j=0}^{θ-2} C(θ-1,j) pʲ(1-p)^{θ-1-j}.
double r_recursion(int n, int theta, double p);

/// θ(1-p)/p.
double r_bound(int theta, double p);

enum class DiscardMode {
  /// H(p) bits per surviving instance.
  Idealized,
  /// Real SubblockCoder bit streams, decoded by a separate receiver pass.
  Huffman,
};

struct DiscardRun {
  int n = 0;
  int theta = 0;
  double p = 0.0;
  std::uint64_t block_length = 0;
  DiscardMode mode = DiscardMode::Idealized;
  /// Instances still undetermined when each node speaks, in speaking order
  /// n, n-1, …, 1: the realizations of N − Z.
  std::vector<std::uint64_t> undetermined;
  double total_bits = 0.0;
  double rate = 0.0;
  double analytic_rate = 0.0;
  /// Instances whose recovered function value differs from the truth.
  std::uint64_t errors = 0;
};

/// Draws the block node-major (node n first, all N instances per node) so the
/// sample does not depend on the mode.
DiscardRun simulate_discard(int n, int theta, double p, std::uint64_t block_length, std::uint64_t seed,
                            DiscardMode mode = DiscardMode::Idealized);

struct TaylorReport {
  int theta_max = 0;
  std::size_t points = 0;
  /// max |g_θ^{(θ-1)}(x) − (θ-1)!((1-x)^{-θ} − 1)| over the grid, evaluated
  /// exactly and then rounded.
  double max_abs_error = 0.0;
  /// Whether the differentiated numerator equals (θ-1)!(1 − (1-x)^θ) as a
  /// polynomial, for every θ.
  bool polynomial_identity = true;
};

/// θ_max <= 8; every x must lie in (0,1).
TaylorReport check_taylor_identity(int theta_max, const std::vector<double>& grid);

/// x = j/64 for j = 1..63.
std::vector<double> default_taylor_grid();

}  // namespace colloq::avgcase
