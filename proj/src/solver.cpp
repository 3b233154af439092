#include "bmep/solver.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "bmep/errors.hpp"
#include "bmep/pair_index.hpp"

namespace bmep {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool constant_objective(const DissimilarityMatrix& d) {
  for (const Rational& x : d.d)
    if (x != d.d.front()) return false;
  return true;
}

}  // namespace

Rational tree_objective_scaled(const BinaryTree& t, const DissimilarityMatrix& d) {
  if (t.leaf_count() != d.n) throw DomainError("tree_objective_scaled: n mismatch");
  return inner_product(vertex_vector(t), d.d);
}

SolveResult brute_force_bme(const DissimilarityMatrix& d, int cap) {
  if (d.n > cap)
    throw DomainError("brute_force_bme: n exceeds the enumeration cap " + std::to_string(cap) +
                      "; use branch_and_bound");
  auto start = Clock::now();
  auto trees = enumerate_trees(d.n, cap);
  std::optional<Rational> best, worst;
  std::size_t best_index = 0;
  for (std::size_t k = 0; k < trees.size(); ++k) {
    Rational value = tree_objective_scaled(trees[k], d);
    if (!best || value < *best) {
      best = value;  // enumeration is key-sorted, so '<' keeps the key-minimal tie
      best_index = k;
    }
    if (!worst || value > *worst) worst = value;
  }
  SolveResult res{trees[best_index], *best, *best / pow2(d.n - 2), SolveStatus::Optimal, {}};
  if (*best == *worst)
    res.stats.note = "objective constant on all trees (row-sum identity)";
  res.stats.wall_ms = ms_since(start);
  return res;
}

SolveResult nni_local_search(const DissimilarityMatrix& d, const BinaryTree& start) {
  if (start.leaf_count() != d.n) throw DomainError("nni_local_search: n mismatch");
  auto t0 = Clock::now();
  BinaryTree current = start;
  Rational value = tree_objective_scaled(current, d);
  long long steps = 0;
  for (;;) {
    std::optional<Rational> best_neighbor;
    std::optional<BinaryTree> best_tree;
    for (const auto& u : nni_neighbors(current)) {
      Rational v = tree_objective_scaled(u, d);
      if (!best_neighbor || v < *best_neighbor) {
        best_neighbor = v;
        best_tree = u;
      }
    }
    if (!best_neighbor || *best_neighbor >= value) break;
    current = *best_tree;
    value = *best_neighbor;
    ++steps;
  }
  SolveResult res{current, value, value / pow2(d.n - 2), SolveStatus::LocalOptimum, {}};
  res.stats.nodes = steps;
  res.stats.wall_ms = ms_since(t0);
  return res;
}

RelaxationLP RelaxationLP::standard(const DissimilarityMatrix& d) {
  RelaxationLP lp;
  lp.n = d.n;
  lp.objective = d.d;
  lp.equalities = row_sum_equalities(d.n);
  for (auto& k : all_caterpillar_constraints(d.n)) lp.inequalities.push_back(std::move(k));
  for (auto& k : all_intersecting_cherry_constraints(d.n))
    lp.inequalities.push_back(std::move(k));
  if (d.n == 5)
    for (auto& k : all_cyclic_constraints()) lp.inequalities.push_back(std::move(k));
  return lp;
}

namespace {

// Builds the ExactLp for a relaxation, folding single-variable constraints
// (the caterpillar family and branching fixes) into the variable boxes.
// `active` selects which inequalities participate; nullptr means all.
struct BuiltLp {
  ExactLp lp;
  std::vector<int> row_to_inequality;  // LP row index -> lp.inequalities index
};

BuiltLp build_lp(const RelaxationLP& relax, const std::vector<char>* active) {
  const int nv = num_pairs(relax.n);
  BuiltLp built{ExactLp(nv), {}};
  built.lp.set_objective(relax.objective);
  std::vector<Rational> lo(nv, Rational(1));
  std::vector<Rational> hi(nv, Rational(pow2(relax.n - 3)));

  auto tighten = [&](int var, Relation rel, const Rational& rhs) {
    switch (rel) {
      case Relation::GreaterEq:
        lo[var] = std::max(lo[var], rhs);
        break;
      case Relation::LessEq:
        hi[var] = std::min(hi[var], rhs);
        break;
      case Relation::Equal:
        lo[var] = std::max(lo[var], rhs);
        hi[var] = std::min(hi[var], rhs);
        break;
    }
  };

  for (std::size_t k = 0; k < relax.inequalities.size(); ++k) {
    const LinearConstraint& c = relax.inequalities[k];
    if (active && !(*active)[k]) continue;
    if (c.coeffs.size() == 1 && c.coeffs.begin()->second == 1) {
      tighten(c.coeffs.begin()->first, c.rel, c.rhs);
      continue;
    }
    std::vector<std::pair<int, Rational>> terms(c.coeffs.begin(), c.coeffs.end());
    if (c.rel == Relation::GreaterEq) {
      for (auto& [var, coeff] : terms) coeff = -coeff;
      built.lp.add_le_row(terms, -c.rhs);
    } else if (c.rel == Relation::LessEq) {
      built.lp.add_le_row(terms, c.rhs);
    } else {
      built.lp.add_eq_row(terms, c.rhs);
    }
    built.row_to_inequality.push_back(static_cast<int>(k));
  }
  for (const auto& eq : relax.equalities) {
    std::vector<std::pair<int, Rational>> terms(eq.coeffs.begin(), eq.coeffs.end());
    built.lp.add_eq_row(terms, eq.rhs);
    built.row_to_inequality.push_back(-1);
  }
  for (const auto& fix : relax.branching_fixes) {
    lo[fix.pair_rank] = std::max(lo[fix.pair_rank], fix.lo);
    hi[fix.pair_rank] = std::min(hi[fix.pair_rank], fix.hi);
  }
  for (int v = 0; v < nv; ++v) {
    built.lp.set_lower_bound(v, lo[v]);
    built.lp.set_upper_bound(v, hi[v]);
  }
  return built;
}

RelaxSolution solve_relaxation(const RelaxationLP& relax, bool lazy) {
  RelaxSolution out;
  if (!lazy) {
    BuiltLp built = build_lp(relax, nullptr);
    LpResult res = built.lp.solve();
    out.status = res.status;
    out.iterations = res.iterations;
    if (res.status != LpStatus::Optimal) return out;
    out.value = res.value;
    out.point = std::move(res.point);
    for (int row : res.tight_rows)
      if (built.row_to_inequality[row] >= 0)
        out.tight_constraints.push_back(built.row_to_inequality[row]);
    return out;
  }

  // Lazy mode: start from the equalities and boxes, then add the most
  // violated family constraint until the point is family-feasible.
  std::vector<char> active(relax.inequalities.size(), 0);
  for (;;) {
    BuiltLp built = build_lp(relax, &active);
    LpResult res = built.lp.solve();
    out.status = res.status;
    out.iterations += res.iterations;
    if (res.status != LpStatus::Optimal) return out;
    int worst = -1;
    Rational worst_violation = 0;
    for (std::size_t k = 0; k < relax.inequalities.size(); ++k) {
      if (active[k]) continue;
      const LinearConstraint& c = relax.inequalities[k];
      Rational value = c.evaluate(res.point);
      Rational violation = c.rel == Relation::GreaterEq ? c.rhs - value : value - c.rhs;
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = static_cast<int>(k);
      }
    }
    if (worst < 0) {
      out.value = res.value;
      out.point = std::move(res.point);
      for (int row : res.tight_rows)
        if (built.row_to_inequality[row] >= 0)
          out.tight_constraints.push_back(built.row_to_inequality[row]);
      return out;
    }
    active[worst] = 1;
  }
}

}  // namespace

RelaxSolution lp_solve(const RelaxationLP& lp, bool lazy) {
  return solve_relaxation(lp, lazy);
}

std::vector<BinaryTree> enumerate_constrained_trees(
    int n, const std::vector<std::pair<int, int>>& fixed_cherries) {
  return enumerate_trees_with_cherries(n, fixed_cherries);
}

namespace {

struct BnbNode {
  // pair rank -> (lo, hi), both powers of two; absent means the full box.
  std::map<int, std::pair<Rational, Rational>> box;
};

// Pairs pinned to the top value 2^(n-3) are cherry fixes.
std::vector<std::pair<int, int>> cherry_fixes_of(const BnbNode& node, int n) {
  std::vector<std::pair<int, int>> out;
  const Rational top(pow2(n - 3));
  for (const auto& [rank, bounds] : node.box)
    if (bounds.first == bounds.second && bounds.first == top)
      out.push_back(pair_unrank(rank, n));
  return out;
}

bool cherry_fixes_disjoint(const std::vector<std::pair<int, int>>& fixes) {
  std::vector<int> used;
  for (auto [a, b] : fixes) {
    for (int x : {a, b})
      if (std::find(used.begin(), used.end(), x) != used.end()) return false;
    used.push_back(a);
    used.push_back(b);
  }
  return true;
}

// floor(log2(v)) for rational v >= 1.
int floor_log2(const Rational& v) {
  int k = 0;
  while (Rational(pow2(k + 1)) <= v) ++k;
  return k;
}

}  // namespace

SolveResult branch_and_bound(const DissimilarityMatrix& d, const BnbConfig& config) {
  const int n = d.n;
  if (n < 4) throw DomainError("branch_and_bound: n must be >= 4");
  auto t0 = Clock::now();
  SolveStats stats;

  std::vector<int> identity_spine(n);
  for (int k = 0; k < n; ++k) identity_spine[k] = k + 1;
  if (constant_objective(d)) {
    // Row sums make every tree tie; report the canonical-key-minimal tree
    // (for n beyond the enumeration cap, a deterministic caterpillar).
    const bool enumerable = n <= config.enumeration_cap;
    BinaryTree best = enumerable ? enumerate_trees(n, config.enumeration_cap).front()
                                 : make_caterpillar(identity_spine);
    Rational value = tree_objective_scaled(best, d);
    SolveResult res{best, value, value / pow2(n - 2), SolveStatus::Optimal, {}};
    res.stats.note = enumerable
                         ? "objective constant on all trees (row-sum identity)"
                         : "objective constant on all trees (row-sum identity); "
                           "returned the spine-ordered caterpillar";
    res.stats.wall_ms = ms_since(t0);
    return res;
  }

  // Deterministic warm start.
  SolveResult incumbent = nni_local_search(d, make_caterpillar(identity_spine));
  BinaryTree best_tree = incumbent.best_tree;
  Rational best_value = incumbent.scaled_value;

  auto offer = [&](const BinaryTree& t, const Rational& value) {
    if (value < best_value ||
        (value == best_value && t.canonical_key() < best_tree.canonical_key())) {
      best_value = value;
      best_tree = t;
    }
  };

  RelaxationLP relax = RelaxationLP::standard(d);
  if (config.inequalities_override) {
    relax.inequalities = *config.inequalities_override;
    for (const auto& k : relax.inequalities)
      if (k.n != n) throw DomainError("branch_and_bound: constraint n mismatch");
  }
  const Rational top(pow2(n - 3));

  std::vector<BnbNode> stack;
  stack.push_back(BnbNode{});
  bool budget_hit = false;
  std::string budget_note;

  while (!stack.empty()) {
    if (config.max_nodes && stats.nodes >= *config.max_nodes) {
      budget_hit = true;
      budget_note = "node budget exhausted";
      break;
    }
    if (config.time_limit_s && ms_since(t0) > *config.time_limit_s * 1000.0) {
      budget_hit = true;
      budget_note = "time limit exceeded";
      break;
    }
    BnbNode node = std::move(stack.back());
    stack.pop_back();
    ++stats.nodes;

    auto fixes = cherry_fixes_of(node, n);
    if (!cherry_fixes_disjoint(fixes)) continue;  // intersecting cherries: no tree

    // Small-core closure: the fixed cherries leave few free leaves, so finish
    // by enumeration over the trees displaying them (a superset of this
    // node's trees, which is sound for a global incumbent).
    if (n - static_cast<int>(fixes.size()) <= config.small_n) {
      for (const auto& t : enumerate_trees_with_cherries(n, fixes))
        offer(t, tree_objective_scaled(t, d));
      continue;
    }

    relax.branching_fixes.clear();
    for (const auto& [rank, bounds] : node.box)
      relax.branching_fixes.push_back({rank, bounds.first, bounds.second});
    RelaxSolution lp = solve_relaxation(relax, config.lazy_constraints);
    ++stats.lp_solves;
    stats.lp_iterations += lp.iterations;
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status != LpStatus::Optimal)
      throw DomainError("branch_and_bound: relaxation must be bounded");
    if (lp.value >= best_value) continue;  // the incumbent already attains this

    // Recognize a powers-of-two tree vertex: then the node is solved exactly.
    {
      bool integral = true;
      for (const Rational& x : lp.point)
        if (denominator(x) != 1) {
          integral = false;
          break;
        }
      if (integral) {
        VertexVector v;
        v.n = n;
        for (const Rational& x : lp.point) v.x.push_back(numerator(x));
        try {
          BinaryTree t = tree_from_vertex_vector(v);
          offer(t, lp.value);
          continue;
        } catch (const NotAVertex&) {
        }
      }
    }

    // Branch on the pair whose LP value is most fractional in log2, i.e.
    // deepest between adjacent powers of two; ties by pair rank.
    int branch_rank = -1;
    Rational branch_score = 0;
    int branch_k = 0;
    for (int r = 0; r < num_pairs(n); ++r) {
      const Rational& v = lp.point[r];
      int k = floor_log2(v);
      Rational score = std::min(v - Rational(pow2(k)), Rational(pow2(k + 1)) - v);
      if (score > branch_score) {
        branch_score = score;
        branch_rank = r;
        branch_k = k;
      }
    }
    auto box_of = [&](int rank) {
      auto it = node.box.find(rank);
      return it != node.box.end() ? it->second : std::make_pair(Rational(1), top);
    };
    if (branch_rank < 0) {
      // Every coordinate is an exact power of two but the vector is not a
      // tree: split the first unpinned pair at the top of its box.
      for (int r = 0; r < num_pairs(n) && branch_rank < 0; ++r) {
        auto [lo, hi] = box_of(r);
        if (lo < hi) {
          branch_rank = r;
          branch_k = floor_log2(hi) - 1;
        }
      }
      if (branch_rank < 0) continue;  // fully pinned non-vertex: no tree here
    }

    auto [lo, hi] = box_of(branch_rank);
    const Rational split_hi(pow2(branch_k));      // child 2: x <= 2^k
    const Rational split_lo(pow2(branch_k + 1));  // child 1: x >= 2^(k+1)
    BnbNode below = node, above = node;
    below.box[branch_rank] = {lo, std::min(hi, split_hi)};
    above.box[branch_rank] = {std::max(lo, split_lo), hi};
    stack.push_back(std::move(below));
    stack.push_back(std::move(above));  // explore the cherry side first
  }

  SolveResult res{best_tree, best_value, best_value / pow2(n - 2),
                  budget_hit ? SolveStatus::Incumbent : SolveStatus::Optimal, stats};
  res.stats.wall_ms = ms_since(t0);
  if (budget_hit) res.stats.note = budget_note;
  return res;
}

}  // namespace bmep
