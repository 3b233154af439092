#pragma once

#include <map>
#include <string>
#include <vector>

#include "bmep/coords.hpp"
#include "bmep/matrix.hpp"
#include "bmep/rational.hpp"
#include "bmep/tree.hpp"

namespace bmep {

enum class Relation { LessEq, GreaterEq, Equal };

struct ConstraintTag {
  enum class Kind { Caterpillar, IntersectingCherry, CyclicOrdering, AdHoc };
  Kind kind = Kind::AdHoc;
  std::vector<int> labels;  // Caterpillar {a,b}; IntersectingCherry {a,b,c}
                            // with b shared; CyclicOrdering: canonical cycle

  std::string to_string() const;
  bool operator==(const ConstraintTag& o) const {
    return kind == o.kind && labels == o.labels;
  }
};

/// Sparse exact linear functional over pair coordinates with a relation.
/// Right-hand sides use the scaled integer convention; unscaled_rhs() gives
/// the Pauplin-coordinate view (divide by 2^(n-2)).
struct LinearConstraint {
  int n = 0;
  std::map<int, Rational> coeffs;  // pair rank -> coefficient
  Relation rel = Relation::LessEq;
  Rational rhs;
  ConstraintTag tag;

  Rational evaluate(const VertexVector& v) const;
  Rational evaluate(const std::vector<Rational>& x) const;
  bool satisfied(const Rational& value) const;
  bool tight(const Rational& value) const { return value == rhs; }
  Rational unscaled_rhs() const { return rhs / pow2(n - 2); }
  std::vector<Rational> dense_coeffs() const;
};

/// x_ab >= 1: tight exactly on caterpillars with a and b in the two end
/// cherries.
LinearConstraint caterpillar_inequality(int a, int b, int n);

/// x_ab + x_bc - x_ac <= 2^(n-3), b the shared leaf: tight exactly on trees
/// with cherry {a,b} or cherry {b,c}.
LinearConstraint intersecting_cherry_inequality(int a, int b, int c, int n);

/// Sum of the five consecutive-pair coordinates around the cycle <= 13; only
/// established for n=5. Rotations/reflections of a cycle give the identical
/// constraint.
LinearConstraint cyclic_ordering_inequality(const std::vector<int>& cycle);

/// Family generators, deduplicated and deterministically ordered.
std::vector<LinearConstraint> all_caterpillar_constraints(int n);
std::vector<LinearConstraint> all_intersecting_cherry_constraints(int n);
std::vector<LinearConstraint> all_cyclic_constraints();  // n = 5

/// Drops constraints that cut the same face: representatives are compared
/// after reduction modulo the row-sum equalities and positive scaling. At
/// n=4 the eighteen nominal family members collapse to the three facets;
/// for n >= 5 the families are already distinct.
std::vector<LinearConstraint> dedup_equivalent_constraints(
    int n, const std::vector<LinearConstraint>& constraints);

/// The n row-sum identities sum_{j != i} x_ij = 2^(n-2) as Equal constraints.
std::vector<LinearConstraint> row_sum_equalities(int n);

/// Lexicographically minimal representative over rotations and reflections.
std::vector<int> canonical_cycle(std::vector<int> cycle);

struct FaceCertificate {
  LinearConstraint constraint;
  std::vector<BinaryTree> tight_trees;
  std::vector<VertexVector> tight_vectors;
  int affine_dim = -1;
};

/// Partitions vertices into tight/slack by exact evaluation and computes the
/// affine dimension of the tight set. Throws ValidityError (naming the tree)
/// if any vertex violates the constraint.
FaceCertificate tight_vertices(const LinearConstraint& k,
                               const std::vector<std::pair<BinaryTree, VertexVector>>& vertices);

/// The tight set generated combinatorially, without evaluating coordinates.
std::vector<BinaryTree> predicted_tight_set(const LinearConstraint& k, int n);

/// The C(n-1,2) x C(n,2) projection matrix that maps the face of trees with
/// cherry {1,3} inside the caterpillar facet P^n_12 onto P^(n-1)_12:
/// leaf-3 columns are dropped, leaf-1 columns map with coefficient 1, and the
/// remaining columns map with coefficient 1/2, all with labels above 2
/// shifted down by one.
ExactMatrix caterpillar_projection_matrix(int n = 5);

/// Text form `<tag> : <coef>*x_<i>_<j> [+ ...] <rel> <rhs>`, one per line.
std::string format_constraint_line(const LinearConstraint& k);
LinearConstraint parse_constraint_line(const std::string& line, int n);

}  // namespace bmep
