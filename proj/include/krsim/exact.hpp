#pragma once
// Arbitrary-precision integers and rationals for the exact identity checks.

#include <boost/multiprecision/cpp_int.hpp>

namespace krsim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_binomial(long n, long r) {
  if (r < 0 || n < 0 || r > n) return 0;
  BigInt out = 1;
  for (long j = 1; j <= r; ++j) {
    out *= n - r + j;
    out /= j;
  }
  return out;
}

}  // namespace krsim
