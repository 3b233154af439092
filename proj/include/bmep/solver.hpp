#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bmep/constraint.hpp"
#include "bmep/coords.hpp"
#include "bmep/dissimilarity.hpp"
#include "bmep/lp.hpp"
#include "bmep/rational.hpp"
#include "bmep/tree.hpp"

namespace bmep {

enum class SolveStatus { Optimal, LocalOptimum, Incumbent };

struct SolveStats {
  long long nodes = 0;
  long long lp_solves = 0;
  long long lp_iterations = 0;
  double wall_ms = 0;
  std::string note;
};

struct SolveResult {
  BinaryTree best_tree;
  Rational scaled_value;   // d . x(t), scaled integer coordinates
  Rational pauplin_value;  // d . c(t) = scaled / 2^(n-2)
  SolveStatus status = SolveStatus::Optimal;
  SolveStats stats;
};

/// d . x(t) in the scaled convention.
Rational tree_objective_scaled(const BinaryTree& t, const DissimilarityMatrix& d);

/// Exhaustive minimum over all (2n-5)!! trees; ties broken by canonical key.
/// Refuses n beyond the enumeration cap.
SolveResult brute_force_bme(const DissimilarityMatrix& d, int cap = 10);

/// Steepest-descent NNI walk from `start`; deterministic (neighbor ties by
/// canonical key), strictly decreasing, status LocalOptimum.
SolveResult nni_local_search(const DissimilarityMatrix& d, const BinaryTree& start);

/// The facet relaxation: row-sum equalities, box bounds 1 <= x <= 2^(n-3)
/// (the caterpillar family is the lower box), all intersecting-cherry
/// constraints, and for n=5 the twelve cyclic-ordering constraints.
struct RelaxationLP {
  int n = 0;
  std::vector<Rational> objective;             // d in PairIndex order
  std::vector<LinearConstraint> equalities;    // n row-sum identities
  std::vector<LinearConstraint> inequalities;  // families, incl. caterpillar
  struct BoundFix {
    int pair_rank;
    Rational lo, hi;
  };
  std::vector<BoundFix> branching_fixes;

  static RelaxationLP standard(const DissimilarityMatrix& d);
};

struct RelaxSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> point;
  std::vector<int> tight_constraints;  // indices into lp.inequalities
  long long iterations = 0;
};

/// Exact simplex over the relaxation; single-variable constraints fold into
/// the variable boxes. The value is a valid lower bound for the BME optimum.
/// Lazy mode starts from the equalities and boxes alone and separates the
/// most-violated family constraint per round; it reaches the same optimum.
RelaxSolution lp_solve(const RelaxationLP& lp, bool lazy = false);

struct BnbConfig {
  int small_n = 6;  // close nodes by constrained enumeration at this size
  std::optional<long long> max_nodes;
  std::optional<double> time_limit_s;
  bool lazy_constraints = false;  // grow cherry cuts only as they are violated
  int enumeration_cap = 10;
  // Replaces the relaxation's inequality set when present. Every constraint
  // must hold at every tree vertex, or the bound-based pruning is unsound.
  std::optional<std::vector<LinearConstraint>> inequalities_override;
};

/// Exact global BME optimum by LP-based branch and bound: nodes prune on the
/// relaxation bound, close when the LP point is a recognized tree vertex, and
/// branch by splitting a coordinate's box between adjacent powers of two.
SolveResult branch_and_bound(const DissimilarityMatrix& d, const BnbConfig& config = {});

/// All trees displaying the given disjoint cherries (see
/// enumerate_trees_with_cherries); exposed here as the solver's node-closure
/// primitive.
std::vector<BinaryTree> enumerate_constrained_trees(
    int n, const std::vector<std::pair<int, int>>& fixed_cherries);

}  // namespace bmep
