#include "bmep/lp.hpp"

#include <algorithm>

#include "bmep/errors.hpp"

namespace bmep {

ExactLp::ExactLp(int num_vars)
    : nvars_(num_vars),
      objective_(num_vars, Rational(0)),
      lower_(num_vars, Rational(0)),
      upper_(num_vars) {}

void ExactLp::set_objective(std::vector<Rational> c) {
  if (static_cast<int>(c.size()) != nvars_) throw DomainError("ExactLp: objective size");
  objective_ = std::move(c);
}

void ExactLp::set_lower_bound(int var, Rational lo) { lower_.at(var) = std::move(lo); }

void ExactLp::set_upper_bound(int var, std::optional<Rational> hi) {
  upper_.at(var) = std::move(hi);
}

void ExactLp::add_le_row(const std::vector<std::pair<int, Rational>>& terms, Rational rhs) {
  rows_.push_back({terms, std::move(rhs), false});
}

void ExactLp::add_eq_row(const std::vector<std::pair<int, Rational>>& terms, Rational rhs) {
  rows_.push_back({terms, std::move(rhs), true});
}

namespace {

// Dense working state for the tableau simplex. Columns are structural
// variables, then one slack per <= row, then artificials.
struct Tableau {
  int m = 0;
  int ncols = 0;
  std::vector<std::vector<Rational>> t;        // m x ncols
  std::vector<Rational> beta;                  // current basic values
  std::vector<int> basis;                      // row -> column
  std::vector<Rational> lower;                 // per column
  std::vector<std::optional<Rational>> upper;  // per column
  std::vector<char> at_upper;                  // nonbasic rest position
  std::vector<char> is_basic;
  std::vector<char> is_artificial;
  long long iterations = 0;

  Rational nonbasic_value(int j) const {
    return at_upper[j] ? *upper[j] : lower[j];
  }

  void pivot(int r, int j, std::vector<Rational>& z) {
    Rational piv = t[r][j];
    for (int c = 0; c < ncols; ++c)
      if (t[r][c] != 0) t[r][c] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == r || t[i][j] == 0) continue;
      Rational f = t[i][j];
      for (int c = 0; c < ncols; ++c)
        if (t[r][c] != 0) t[i][c] -= f * t[r][c];
    }
    if (z[j] != 0) {
      Rational f = z[j];
      for (int c = 0; c < ncols; ++c)
        if (t[r][c] != 0) z[c] -= f * t[r][c];
    }
  }

  // One phase of the bounded-variable simplex with Bland's rule. `allowed`
  // filters the columns that may enter.
  // Returns false when the phase detects unboundedness.
  bool run(std::vector<Rational>& z, const std::vector<char>& allowed) {
    for (;;) {
      int enter = -1;
      int direction = 0;
      for (int j = 0; j < ncols; ++j) {
        if (is_basic[j] || !allowed[j]) continue;
        if (upper[j] && lower[j] == *upper[j]) continue;  // fixed
        if (!at_upper[j] && z[j] < 0) {
          enter = j;
          direction = 1;
          break;
        }
        if (at_upper[j] && z[j] > 0) {
          enter = j;
          direction = -1;
          break;
        }
      }
      if (enter < 0) return true;  // optimal for this phase

      // Ratio test: the entering variable moves by theta in `direction`;
      // basic variable i changes by -direction*t[i][enter]*theta.
      std::optional<Rational> theta;
      int block_row = -1;
      bool block_at_upper = false;
      if (upper[enter]) {
        theta = *upper[enter] - lower[enter];
      }
      for (int i = 0; i < m; ++i) {
        const Rational& coeff = t[i][enter];
        if (coeff == 0) continue;
        Rational delta = direction > 0 ? coeff : Rational(-coeff);
        int var = basis[i];
        std::optional<Rational> limit;
        bool hits_upper = false;
        if (delta > 0) {
          limit = (beta[i] - lower[var]) / delta;
        } else if (upper[var]) {
          limit = (*upper[var] - beta[i]) / -delta;
          hits_upper = true;
        }
        if (!limit) continue;
        if (!theta || *limit < *theta ||
            (*limit == *theta && block_row >= 0 && var < basis[block_row])) {
          theta = std::move(*limit);
          block_row = i;
          block_at_upper = hits_upper;
        }
      }
      if (!theta) return false;  // unbounded in this direction

      ++iterations;
      if (*theta != 0) {
        for (int i = 0; i < m; ++i)
          if (t[i][enter] != 0) beta[i] -= Rational(direction) * t[i][enter] * *theta;
      }
      if (block_row < 0) {
        // Bound flip: the entering variable runs to its other bound.
        at_upper[enter] = !at_upper[enter];
        continue;
      }
      int leave = basis[block_row];
      Rational enter_value = nonbasic_value(enter) + Rational(direction) * *theta;
      is_basic[leave] = 0;
      at_upper[leave] = block_at_upper;
      is_basic[enter] = 1;
      basis[block_row] = enter;
      beta[block_row] = std::move(enter_value);
      pivot(block_row, enter, z);
    }
  }

  // Reduced costs z_j = c_j - c_B . B^-1 A_j for the current basis.
  std::vector<Rational> reduced_costs(const std::vector<Rational>& costs) const {
    std::vector<Rational> z = costs;
    for (int i = 0; i < m; ++i) {
      const Rational& cb = costs[basis[i]];
      if (cb == 0) continue;
      for (int c = 0; c < ncols; ++c)
        if (t[i][c] != 0) z[c] -= cb * t[i][c];
    }
    return z;
  }
};

}  // namespace

LpResult ExactLp::solve() const {
  const int m = static_cast<int>(rows_.size());
  int nslack = 0;
  for (const Row& row : rows_)
    if (!row.is_eq) ++nslack;

  Tableau tab;
  tab.m = m;
  tab.ncols = nvars_ + nslack + m;  // artificial columns at the end, one per row
  tab.t.assign(m, std::vector<Rational>(tab.ncols, Rational(0)));
  tab.lower.assign(tab.ncols, Rational(0));
  tab.upper.assign(tab.ncols, std::nullopt);
  tab.at_upper.assign(tab.ncols, 0);
  tab.is_basic.assign(tab.ncols, 0);
  tab.is_artificial.assign(tab.ncols, 0);
  tab.basis.assign(m, -1);
  tab.beta.assign(m, Rational(0));

  for (int j = 0; j < nvars_; ++j) {
    tab.lower[j] = lower_[j];
    tab.upper[j] = upper_[j];
    if (tab.upper[j] && *tab.upper[j] < tab.lower[j]) {
      LpResult res;
      res.status = LpStatus::Infeasible;
      return res;
    }
  }

  // Initial nonbasic position: every structural variable at its lower bound.
  std::vector<Rational> x0(nvars_);
  for (int j = 0; j < nvars_; ++j) x0[j] = tab.lower[j];

  int slack_col = nvars_;
  std::vector<int> slack_of_row(m, -1);
  for (int i = 0; i < m; ++i) {
    const Row& row = rows_[i];
    Rational lhs0 = 0;
    for (const auto& [var, coeff] : row.terms) {
      tab.t[i][var] += coeff;
      lhs0 += coeff * x0[var];
    }
    Rational residual = row.rhs - lhs0;
    if (!row.is_eq) {
      int s = slack_col++;
      slack_of_row[i] = s;
      tab.t[i][s] = 1;
      if (residual >= 0) {
        // Slack starts basic and feasible.
        tab.basis[i] = s;
        tab.beta[i] = residual;
        tab.is_basic[s] = 1;
        continue;
      }
    }
    // Equality row, or a <= row infeasible at the initial point: seed an
    // artificial. Negate the row if needed so the basis column is +1 and the
    // tableau stays B^-1 A from the start.
    if (residual < 0) {
      for (int c = 0; c < tab.ncols; ++c)
        if (tab.t[i][c] != 0) tab.t[i][c] = -tab.t[i][c];
      residual = -residual;
    }
    int a = nvars_ + nslack + i;
    tab.t[i][a] = 1;
    tab.basis[i] = a;
    tab.beta[i] = residual;
    tab.is_basic[a] = 1;
    tab.is_artificial[a] = 1;
  }

  const int total_cols = tab.ncols;
  std::vector<char> allow_all(total_cols, 1);
  std::vector<char> allow_real(total_cols, 1);
  for (int j = 0; j < total_cols; ++j)
    if (tab.is_artificial[j]) allow_real[j] = 0;

  // Phase 1: minimize the sum of artificials.
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i)
    if (tab.is_artificial[tab.basis[i]]) need_phase1 = true;
  if (need_phase1) {
    std::vector<Rational> phase1_costs(total_cols, Rational(0));
    for (int j = 0; j < total_cols; ++j)
      if (tab.is_artificial[j]) phase1_costs[j] = 1;
    auto z = tab.reduced_costs(phase1_costs);
    if (!tab.run(z, allow_all))
      throw DomainError("ExactLp: phase 1 unbounded (internal error)");
    Rational infeasibility = 0;
    for (int i = 0; i < m; ++i)
      if (tab.is_artificial[tab.basis[i]]) infeasibility += tab.beta[i];
    if (infeasibility != 0) {
      LpResult res;
      res.status = LpStatus::Infeasible;
      res.iterations = tab.iterations;
      return res;
    }
    // Pivot zero-valued artificials out of the basis where possible, then
    // freeze every artificial at zero.
    for (int i = 0; i < m; ++i) {
      if (!tab.is_artificial[tab.basis[i]]) continue;
      int pivot_col = -1;
      for (int c = 0; c < nvars_ + nslack; ++c)
        if (!tab.is_basic[c] && tab.t[i][c] != 0) {
          pivot_col = c;
          break;
        }
      if (pivot_col >= 0) {
        // Zero-step basis swap: no variable moves, so the entering column
        // becomes basic at its current (bound) value and the artificial
        // leaves at zero.
        int old = tab.basis[i];
        std::vector<Rational> dummy(total_cols, Rational(0));
        Rational enter_value = tab.nonbasic_value(pivot_col);
        tab.is_basic[old] = 0;
        tab.at_upper[old] = 0;
        tab.is_basic[pivot_col] = 1;
        tab.basis[i] = pivot_col;
        tab.beta[i] = std::move(enter_value);
        tab.pivot(i, pivot_col, dummy);
      }
    }
    for (int j = 0; j < total_cols; ++j)
      if (tab.is_artificial[j]) tab.upper[j] = Rational(0);
  }

  // Phase 2 on the real objective.
  std::vector<Rational> costs(total_cols, Rational(0));
  for (int j = 0; j < nvars_; ++j) costs[j] = objective_[j];
  auto z = tab.reduced_costs(costs);
  if (!tab.run(z, allow_real)) {
    LpResult res;
    res.status = LpStatus::Unbounded;
    res.iterations = tab.iterations;
    return res;
  }

  LpResult res;
  res.status = LpStatus::Optimal;
  res.iterations = tab.iterations;
  std::vector<Rational> full(total_cols);
  for (int j = 0; j < total_cols; ++j)
    if (!tab.is_basic[j]) full[j] = tab.nonbasic_value(j);
  for (int i = 0; i < m; ++i) full[tab.basis[i]] = tab.beta[i];
  res.point.assign(full.begin(), full.begin() + nvars_);
  res.value = 0;
  for (int j = 0; j < nvars_; ++j)
    if (objective_[j] != 0) res.value += objective_[j] * full[j];
  for (int i = 0; i < m; ++i) {
    if (rows_[i].is_eq || full[slack_of_row[i]] == 0) res.tight_rows.push_back(i);
  }
  return res;
}

}  // namespace bmep
