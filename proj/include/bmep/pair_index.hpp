#pragma once

#include <string>
#include <utility>

#include "bmep/errors.hpp"

namespace bmep {

/// C(n,2), the number of unordered leaf pairs.
inline int num_pairs(int n) { return n * (n - 1) / 2; }

/// Rank of the pair {i,j} (1-based labels) in the lexicographic order
/// (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n). Accepts i,j in either order.
inline int pair_rank(int i, int j, int n) {
  if (i == j || i < 1 || j < 1 || i > n || j > n)
    throw DomainError("pair_rank: labels must be distinct and in 1..n");
  if (i > j) std::swap(i, j);
  return num_pairs(n) - num_pairs(n - i + 1) + (j - i) - 1;
}

/// Inverse of pair_rank: the pair {i,j} with i<j at the given rank.
inline std::pair<int, int> pair_unrank(int rank, int n) {
  if (rank < 0 || rank >= num_pairs(n)) throw DomainError("pair_unrank: rank out of range");
  int i = 1;
  while (rank >= n - i) {
    rank -= n - i;
    ++i;
  }
  return {i, i + 1 + rank};
}

inline std::string pair_name(int rank, int n) {
  auto [i, j] = pair_unrank(rank, n);
  return "x_" + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace bmep
