#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace colloq {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Binary entropy in bits, with 0·log₂0 taken as 0. Throws DomainError
/// outside [0,1].
double binary_entropy(double p);

/// Exact binomial coefficient; zero when k < 0 or k > n.
BigInt binom(int n, int k);

/// log₂ of a strictly positive integer. Accurate to double precision for
/// values far beyond the double range.
double log2_big(const BigInt& value);

/// Integer-valued log₂ sums are frequent enough to deserve a shorthand.
inline double log2_binom(int n, int k) { return log2_big(binom(n, k)); }

}  // namespace colloq
