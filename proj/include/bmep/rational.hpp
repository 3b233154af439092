#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace bmep {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// 2^e as an arbitrary-precision integer, e >= 0.
inline Int pow2(int e) {
  Int v = 1;
  return v << e;
}

inline bool is_power_of_two(const Int& v) {
  if (v <= 0) return false;
  Int m = v & (v - 1);
  return m == 0;
}

/// Exponent k with v == 2^k. Caller must check is_power_of_two first.
inline int log2_exact(const Int& v) {
  int k = 0;
  Int w = v;
  while (w > 1) {
    w >>= 1;
    ++k;
  }
  return k;
}

/// Parses "p", "p/q", or a decimal string like "-0.125" into an exact rational.
Rational rational_from_string(const std::string& text);

/// "p" or "p/q" in canonical form (positive denominator, gcd 1).
std::string rational_to_string(const Rational& r);

}  // namespace bmep
