#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bmep/lp.hpp"
#include "bmep/pair_index.hpp"
#include "bmep/solver.hpp"

using namespace bmep;

TEST_CASE("two-variable warmup") {
  // min -x - 2y  s.t.  x + y <= 4, x <= 3, y <= 2, x,y >= 0.
  ExactLp lp(2);
  lp.set_objective({Rational(-1), Rational(-2)});
  lp.set_upper_bound(0, Rational(3));
  lp.set_upper_bound(1, Rational(2));
  lp.add_le_row({{0, Rational(1)}, {1, Rational(1)}}, Rational(4));
  auto res = lp.solve();
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == -6);  // x=2, y=2
  CHECK(res.point == std::vector<Rational>{Rational(2), Rational(2)});
  CHECK(res.tight_rows == std::vector<int>{0});
}

TEST_CASE("equality rows and fractional optimum") {
  // min x + y  s.t.  2x + y = 3, x - y <= 0, 0 <= x,y <= 5.
  ExactLp lp(2);
  lp.set_objective({Rational(1), Rational(1)});
  lp.set_upper_bound(0, Rational(5));
  lp.set_upper_bound(1, Rational(5));
  lp.add_eq_row({{0, Rational(2)}, {1, Rational(1)}}, Rational(3));
  lp.add_le_row({{0, Rational(1)}, {1, Rational(-1)}}, Rational(0));
  auto res = lp.solve();
  REQUIRE(res.status == LpStatus::Optimal);
  // On 2x+y=3 the objective x+y = 3-x decreases in x; x<=y forces x <= 1.
  CHECK(res.value == 2);
  CHECK(res.point == std::vector<Rational>{Rational(1), Rational(1)});
}

TEST_CASE("infeasible and unbounded detection") {
  ExactLp lp(1);
  lp.set_upper_bound(0, Rational(1));
  lp.add_le_row({{0, Rational(1)}}, Rational(-5));  // x <= -5 vs x >= 0
  CHECK(lp.solve().status == LpStatus::Infeasible);

  ExactLp lp2(1);
  lp2.set_objective({Rational(-1)});  // min -x with x unbounded above
  lp2.add_le_row({{0, Rational(-1)}}, Rational(0));
  CHECK(lp2.solve().status == LpStatus::Unbounded);

  ExactLp lp3(1);
  lp3.set_lower_bound(0, Rational(3));
  lp3.set_upper_bound(0, Rational(2));
  CHECK(lp3.solve().status == LpStatus::Infeasible);
}

TEST_CASE("degenerate rows terminate (Bland)") {
  // Several redundant tight rows around the optimum.
  ExactLp lp(2);
  lp.set_objective({Rational(-1), Rational(-1)});
  lp.set_upper_bound(0, Rational(1));
  lp.set_upper_bound(1, Rational(1));
  lp.add_le_row({{0, Rational(1)}, {1, Rational(1)}}, Rational(2));
  lp.add_le_row({{0, Rational(2)}, {1, Rational(2)}}, Rational(4));
  lp.add_le_row({{0, Rational(1)}}, Rational(1));
  lp.add_le_row({{1, Rational(1)}}, Rational(1));
  auto res = lp.solve();
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == -2);
  CHECK(res.tight_rows.size() == 4);
}

TEST_CASE("relaxation at n=4 is exact (full facet set)") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto d = random_dissimilarity(4, seed);
    auto relax = RelaxationLP::standard(d);
    auto sol = lp_solve(relax);
    REQUIRE(sol.status == LpStatus::Optimal);
    auto brute = brute_force_bme(d);
    CHECK(sol.value == brute.scaled_value);
  }
}

TEST_CASE("relaxation at n=5 with all 52 facet constraints is exact") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto d = random_dissimilarity(5, seed);
    auto relax = RelaxationLP::standard(d);
    CHECK(relax.inequalities.size() == 10 + 30 + 12);
    auto sol = lp_solve(relax);
    REQUIRE(sol.status == LpStatus::Optimal);
    auto brute = brute_force_bme(d);
    CHECK(sol.value == brute.scaled_value);
  }
}

TEST_CASE("relaxation at n=6 and n=7 lower-bounds the optimum; gaps reported") {
  for (int n : {6, 7}) {
    int gaps = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto d = random_dissimilarity(n, seed);
      auto sol = lp_solve(RelaxationLP::standard(d));
      REQUIRE(sol.status == LpStatus::Optimal);
      auto brute = brute_force_bme(d);
      CHECK(sol.value <= brute.scaled_value);
      if (sol.value < brute.scaled_value) ++gaps;
    }
    // The family subset is a relaxation, not an exact description, for n > 5;
    // its quality is an empirical question, so the gap count is reported
    // rather than asserted.
    MESSAGE("n=", n, " family relaxation strict-gap instances: ", gaps, "/10");
  }
}

TEST_CASE("lazy constraint generation reaches the full-relaxation optimum") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int n : {5, 6}) {
      auto d = random_dissimilarity(n, seed);
      auto relax = RelaxationLP::standard(d);
      auto full = lp_solve(relax);
      auto lazy = lp_solve(relax, true);
      REQUIRE(full.status == LpStatus::Optimal);
      REQUIRE(lazy.status == LpStatus::Optimal);
      CHECK(full.value == lazy.value);
    }
  }
}

TEST_CASE("lower-bound soundness against constrained enumeration, n=6") {
  // With a cherry pinned, the LP bound must stay below the best tree that
  // displays the cherry.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto d = random_dissimilarity(6, seed);
    auto relax = RelaxationLP::standard(d);
    relax.branching_fixes.push_back(
        {pair_rank(1, 2, 6), Rational(pow2(3)), Rational(pow2(3))});
    auto sol = lp_solve(relax);
    REQUIRE(sol.status == LpStatus::Optimal);
    std::optional<Rational> best;
    for (const auto& t : enumerate_constrained_trees(6, {{1, 2}})) {
      Rational v = tree_objective_scaled(t, d);
      if (!best || v < *best) best = v;
    }
    CHECK(sol.value <= *best);
  }
}
