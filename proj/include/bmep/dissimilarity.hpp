#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmep/rational.hpp"

namespace bmep {

/// Symmetric nonnegative matrix of pairwise distances, stored as the upper
/// triangle in PairIndex order.
struct DissimilarityMatrix {
  int n = 0;
  std::vector<Rational> d;

  Rational at(int i, int j) const;

  static DissimilarityMatrix from_upper(int n, std::vector<Rational> entries);
};

/// File format: first token n, then either C(n,2) upper-triangle entries in
/// PairIndex order or n*n entries in row-major square layout (validated for
/// symmetry and a zero diagonal). Entries are rationals "p/q" or decimal
/// strings, converted exactly.
DissimilarityMatrix parse_dissimilarity(const std::string& text);
std::string format_dissimilarity(const DissimilarityMatrix& m);

/// Seeded random instance: entries k/1000 with k drawn as mt19937_64 output
/// mod 10^6, filled in PairIndex order. The same seed always yields the same
/// matrix on every platform.
DissimilarityMatrix random_dissimilarity(int n, std::uint64_t seed);

}  // namespace bmep
