#pragma once

#include <string>
#include <vector>

#include "bmep/rational.hpp"
#include "bmep/tree.hpp"

namespace bmep {

/// Scaled integer BME coordinates x_ij = 2^(n-2-l), one entry per leaf pair
/// in PairIndex order. Every entry is a power of two in [1, 2^(n-3)], and
/// each leaf's row sum is 2^(n-2).
struct VertexVector {
  int n = 0;
  std::vector<Int> x;

  bool operator==(const VertexVector& o) const { return n == o.n && x == o.x; }
};

/// Unscaled coordinates c_ij = x_ij / 2^(n-2) = 1/2^l.
struct PauplinVector {
  int n = 0;
  std::vector<Rational> c;
};

VertexVector vertex_vector(const BinaryTree& t);

PauplinVector unscale(const VertexVector& v);
VertexVector rescale(const PauplinVector& p);

/// Recovers the unique tree with the given coordinate vector, by repeated
/// cherry collapse on the recovered l-values; the reconstruction is verified
/// by recomputing its vertex vector. Throws NotAVertex when no tree matches.
BinaryTree tree_from_vertex_vector(const VertexVector& v);

Rational inner_product(const VertexVector& v, const std::vector<Rational>& d);
Rational inner_product(const PauplinVector& p, const std::vector<Rational>& d);

/// Text form: "n=<n>" header line, then one line of space-separated integers.
std::string vertex_vector_to_text(const VertexVector& v);
/// JSON form with explicit pair labels: {"n":..., "x":{"x_1_2":...,...}}.
std::string vertex_vector_to_json(const VertexVector& v);

}  // namespace bmep
