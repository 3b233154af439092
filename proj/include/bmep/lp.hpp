#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bmep/rational.hpp"

namespace bmep {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> point;   // structural variables
  std::vector<int> tight_rows;   // original row indices satisfied with equality
  long long iterations = 0;      // simplex pivots + bound flips
};

/// Exact-rational LP  min c.x  s.t.  rows, lo <= x <= hi  solved by a
/// two-phase bounded-variable primal simplex with Bland's anti-cycling rule
/// (least-index entering; least-variable-index leaving among the ratio-test
/// ties). Every variable needs a finite lower or upper bound.
class ExactLp {
 public:
  explicit ExactLp(int num_vars);

  void set_objective(std::vector<Rational> c);
  void set_lower_bound(int var, Rational lo);
  void set_upper_bound(int var, std::optional<Rational> hi);

  /// terms are (variable, coefficient) pairs; duplicate variables accumulate.
  void add_le_row(const std::vector<std::pair<int, Rational>>& terms, Rational rhs);
  void add_eq_row(const std::vector<std::pair<int, Rational>>& terms, Rational rhs);

  int num_vars() const { return nvars_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  LpResult solve() const;

 private:
  struct Row {
    std::vector<std::pair<int, Rational>> terms;
    Rational rhs;
    bool is_eq = false;
  };
  int nvars_;
  std::vector<Rational> objective_;
  std::vector<Rational> lower_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<Row> rows_;
};

}  // namespace bmep
