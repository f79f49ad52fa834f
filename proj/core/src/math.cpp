#include "colloq/core/math.hpp"

#include "colloq/core/error.hpp"

#include <cmath>
#include <string>

namespace colloq {

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("binary_entropy: p must lie in [0,1], got " + std::to_string(p));
  }
  if (p == 0.0 || p == 1.0) return 0.0;
  const double q = 1.0 - p;
  return -p * std::log2(p) - q * std::log2(q);
}

BigInt binom(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

double log2_big(const BigInt& value) {
  if (value <= 0) throw DomainError("log2_big: argument must be positive");
  const auto msb = static_cast<long>(boost::multiprecision::msb(value));
  if (msb < 1000) return std::log2(value.convert_to<double>());
  // Keep the top 64 bits as mantissa and add the shift back.
  const long shift = msb - 63;
  const BigInt top = value >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

}  // namespace colloq
