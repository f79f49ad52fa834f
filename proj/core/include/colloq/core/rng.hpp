#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace colloq {

/// Seeded generator with platform-independent derived draws.
///
/// The engine is mt19937_64, whose output sequence is fixed by the
/// standard. Uniform reals and Bernoulli draws are derived here rather than
/// through <random> distributions, whose algorithms are
/// implementation-defined, so identical seeds give identical samples on
/// every toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer on [lo, hi] (inclusive), by rejection.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  /// n independent uniforms on [lo, hi), sorted non-decreasing.
  std::vector<double> sorted_uniforms(std::size_t n, double lo = 0.0, double hi = 1.0);

 private:
  std::mt19937_64 engine_;
};

}  // namespace colloq
