#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "bmep/constraint.hpp"
#include "bmep/pair_index.hpp"

using namespace bmep;

namespace {

long long factorial(int k) {
  long long v = 1;
  for (int x = 2; x <= k; ++x) v *= x;
  return v;
}

long long double_factorial(int k) {
  long long v = 1;
  for (int x = k; x >= 2; x -= 2) v *= x;
  return v;
}

std::vector<std::pair<BinaryTree, VertexVector>> vertex_table(int n) {
  std::vector<std::pair<BinaryTree, VertexVector>> out;
  for (const auto& t : enumerate_trees(n)) out.emplace_back(t, vertex_vector(t));
  return out;
}

std::set<std::string> keys(const std::vector<BinaryTree>& trees) {
  std::set<std::string> out;
  for (const auto& t : trees) out.insert(t.canonical_key());
  return out;
}

}  // namespace

TEST_CASE("caterpillar inequality: validity and tight counts") {
  for (int n : {5, 6, 7}) {
    auto table = vertex_table(n);
    auto cert = tight_vertices(caterpillar_inequality(1, 2, n), table);
    CHECK(static_cast<long long>(cert.tight_trees.size()) == factorial(n - 2));
    for (const auto& t : cert.tight_trees) {
      CHECK(is_caterpillar(t));
      CHECK(path_internal_nodes(t, 1, 2) == n - 2);
    }
  }
  // All 15 n=5 vertices satisfy x_12 >= 1.
  auto table5 = vertex_table(5);
  auto k = caterpillar_inequality(1, 2, 5);
  for (const auto& [t, v] : table5) CHECK(k.satisfied(k.evaluate(v)));
  CHECK_THROWS_AS(caterpillar_inequality(2, 2, 5), DomainError);
}

TEST_CASE("intersecting-cherry inequality: rhs, validity, tight counts") {
  CHECK(intersecting_cherry_inequality(1, 2, 3, 5).rhs == 4);
  CHECK(intersecting_cherry_inequality(1, 2, 3, 6).rhs == 8);
  CHECK(intersecting_cherry_inequality(1, 2, 3, 4).rhs == 2);
  for (int n : {5, 6, 7}) {
    auto table = vertex_table(n);
    auto cert = tight_vertices(intersecting_cherry_inequality(1, 2, 3, n), table);
    CHECK(static_cast<long long>(cert.tight_trees.size()) ==
          2 * double_factorial(2 * n - 7));
    for (const auto& t : cert.tight_trees) {
      auto cs = cherries(t);
      bool has12 = std::find(cs.begin(), cs.end(), std::pair<int, int>{1, 2}) != cs.end();
      bool has23 = std::find(cs.begin(), cs.end(), std::pair<int, int>{2, 3}) != cs.end();
      CHECK(has12 != has23);  // intersecting cherries never coexist
    }
  }
  CHECK_THROWS_AS(intersecting_cherry_inequality(1, 1, 3, 5), DomainError);
}

TEST_CASE("tight_vertices: P_5 certificates have facet dimension 4") {
  auto table = vertex_table(5);
  auto cherry = tight_vertices(intersecting_cherry_inequality(1, 2, 3, 5), table);
  CHECK(cherry.tight_trees.size() == 6);
  CHECK(cherry.affine_dim == 4);
  auto cat = tight_vertices(caterpillar_inequality(1, 2, 5), table);
  CHECK(cat.tight_trees.size() == 6);
  CHECK(cat.affine_dim == 4);
  auto cyc = tight_vertices(cyclic_ordering_inequality({1, 2, 3, 4, 5}), table);
  CHECK(cyc.tight_trees.size() == 5);
  CHECK(cyc.affine_dim == 4);
  // 9 slack for the cherry facet.
  CHECK(table.size() - cherry.tight_trees.size() == 9);
}

TEST_CASE("tight_vertices raises ValidityError on a violated constraint") {
  auto table = vertex_table(5);
  LinearConstraint bogus;
  bogus.n = 5;
  bogus.coeffs[pair_rank(1, 2, 5)] = 1;
  bogus.rel = Relation::LessEq;
  bogus.rhs = 2;  // cherries {1,2} reach 4
  bogus.tag = {ConstraintTag::Kind::AdHoc, {}};
  CHECK_THROWS_AS(tight_vertices(bogus, table), ValidityError);
}

TEST_CASE("cyclic-ordering inequality: canonicalization and tight set") {
  auto k = cyclic_ordering_inequality({1, 2, 3, 4, 5});
  CHECK(k.rhs == 13);
  // Rotations and reflections give the identical constraint.
  auto k2 = cyclic_ordering_inequality({3, 4, 5, 1, 2});
  auto k3 = cyclic_ordering_inequality({5, 4, 3, 2, 1});
  CHECK(k.coeffs == k2.coeffs);
  CHECK(k.coeffs == k3.coeffs);
  CHECK(k.tag == k2.tag);

  auto table = vertex_table(5);
  int tight = 0;
  for (const auto& [t, v] : table) {
    Rational value = k.evaluate(v);
    CHECK(value <= 13);
    if (value == 13) {
      CHECK(coplanar_with_cycle(t, {1, 2, 3, 4, 5}));
      ++tight;
    } else {
      CHECK(value <= 12);  // non-coplanar trees reach at most 12
      CHECK_FALSE(coplanar_with_cycle(t, {1, 2, 3, 4, 5}));
    }
  }
  CHECK(tight == 5);
  CHECK_THROWS_AS(cyclic_ordering_inequality({1, 2, 3, 4}), DomainError);
  CHECK_THROWS_AS(cyclic_ordering_inequality({1, 2, 3, 4, 4}), DomainError);
}

TEST_CASE("unscaled right-hand sides divide by 2^(n-2)") {
  // In Pauplin coordinates the n=4 cherry inequality reads
  // c_ab + c_bc - c_ac <= 1/2.
  CHECK(intersecting_cherry_inequality(1, 2, 3, 4).unscaled_rhs() == Rational(1, 2));
  CHECK(intersecting_cherry_inequality(1, 2, 3, 5).unscaled_rhs() == Rational(1, 2));
  CHECK(caterpillar_inequality(1, 2, 5).unscaled_rhs() == Rational(1, 8));
  CHECK(cyclic_ordering_inequality({1, 2, 3, 4, 5}).unscaled_rhs() == Rational(13, 8));
}

TEST_CASE("family counts") {
  CHECK(all_caterpillar_constraints(5).size() == 10);
  CHECK(all_caterpillar_constraints(6).size() == 15);
  CHECK(all_intersecting_cherry_constraints(5).size() == 30);
  CHECK(all_intersecting_cherry_constraints(6).size() == 60);
  CHECK(all_cyclic_constraints().size() == 12);
}

TEST_CASE("validity of every family constraint at every vertex, n<=7") {
  for (int n = 4; n <= 7; ++n) {
    auto table = vertex_table(n);
    std::vector<LinearConstraint> all = all_caterpillar_constraints(n);
    for (auto& k : all_intersecting_cherry_constraints(n)) all.push_back(k);
    if (n == 5)
      for (auto& k : all_cyclic_constraints()) all.push_back(k);
    for (const auto& k : all) {
      for (const auto& [t, v] : table) {
        CHECK(k.satisfied(k.evaluate(v)));
      }
    }
  }
}

TEST_CASE("predicted_tight_set matches evaluated tight sets, n<=7") {
  for (int n : {5, 6, 7}) {
    auto table = vertex_table(n);
    std::vector<LinearConstraint> families;
    families.push_back(caterpillar_inequality(1, 2, n));
    families.push_back(caterpillar_inequality(2, 4, n));
    families.push_back(intersecting_cherry_inequality(1, 2, 3, n));
    families.push_back(intersecting_cherry_inequality(4, 3, 1, n));
    if (n == 5) {
      families.push_back(cyclic_ordering_inequality({1, 2, 3, 4, 5}));
      families.push_back(cyclic_ordering_inequality({2, 1, 4, 3, 5}));
    }
    for (const auto& k : families) {
      auto cert = tight_vertices(k, table);
      CHECK(keys(cert.tight_trees) == keys(predicted_tight_set(k, n)));
    }
  }
  // Exhaustive agreement for the full families at n=5.
  auto table5 = vertex_table(5);
  std::vector<LinearConstraint> all5 = all_caterpillar_constraints(5);
  for (auto& k : all_intersecting_cherry_constraints(5)) all5.push_back(k);
  for (auto& k : all_cyclic_constraints()) all5.push_back(k);
  for (const auto& k : all5)
    CHECK(keys(tight_vertices(k, table5).tight_trees) == keys(predicted_tight_set(k, 5)));
}

TEST_CASE("predicted tight counts from the closed-form formulas") {
  CHECK(predicted_tight_set(intersecting_cherry_inequality(1, 2, 3, 6), 6).size() == 30);
  CHECK(predicted_tight_set(caterpillar_inequality(1, 2, 6), 6).size() == 24);
  LinearConstraint adhoc;
  adhoc.n = 5;
  adhoc.coeffs[0] = 1;
  adhoc.tag = {ConstraintTag::Kind::AdHoc, {}};
  CHECK_THROWS_AS(predicted_tight_set(adhoc, 5), DomainError);
}

TEST_CASE("n=4 families deduplicate to the three facets") {
  std::vector<LinearConstraint> all = all_caterpillar_constraints(4);
  for (auto& k : all_intersecting_cherry_constraints(4)) all.push_back(k);
  CHECK(all.size() == 6 + 12);
  CHECK(dedup_equivalent_constraints(4, all).size() == 3);

  std::vector<LinearConstraint> all5 = all_caterpillar_constraints(5);
  for (auto& k : all_intersecting_cherry_constraints(5)) all5.push_back(k);
  for (auto& k : all_cyclic_constraints()) all5.push_back(k);
  CHECK(dedup_equivalent_constraints(5, all5).size() == 52);
}

TEST_CASE("n=5 family tight sets are pairwise distinct") {
  auto table = vertex_table(5);
  std::vector<LinearConstraint> all = all_caterpillar_constraints(5);
  for (auto& k : all_intersecting_cherry_constraints(5)) all.push_back(k);
  for (auto& k : all_cyclic_constraints()) all.push_back(k);
  std::set<std::set<std::string>> tight_sets;
  for (const auto& k : all) tight_sets.insert(keys(tight_vertices(k, table).tight_trees));
  CHECK(tight_sets.size() == 52);
}

TEST_CASE("caterpillar projection matrix for n=5 matches the printed matrix") {
  ExactMatrix A = caterpillar_projection_matrix(5);
  REQUIRE(A.rows() == 6);
  REQUIRE(A.cols() == 10);
  ExactMatrix want(6, 10);
  want.at(0, 0) = 1;
  want.at(1, 2) = 1;
  want.at(2, 3) = 1;
  want.at(3, 5) = Rational(1, 2);
  want.at(4, 6) = Rational(1, 2);
  want.at(5, 9) = Rational(1, 2);
  CHECK(A == want);
}

TEST_CASE("projection maps the P^5_123 face bijectively onto the P_4 bottom edge") {
  ExactMatrix A = caterpillar_projection_matrix(5);
  // Tight vertices of P^5_123: caterpillars with ends 1,2 and leaf 3 in the
  // cherry with leaf 1.
  std::vector<BinaryTree> face;
  for (const auto& t : predicted_tight_set(caterpillar_inequality(1, 2, 5), 5)) {
    auto cs = cherries(t);
    if (std::find(cs.begin(), cs.end(), std::pair<int, int>{1, 3}) != cs.end())
      face.push_back(t);
  }
  REQUIRE(face.size() == 2);  // (n-3)! = 2

  // Their images must be exactly the two P_4 caterpillar-edge vertices
  // (trees with l(1,2) = 2).
  std::set<std::vector<Rational>> want;
  for (const auto& t : enumerate_trees(4)) {
    if (path_internal_nodes(t, 1, 2) != 2) continue;
    auto v = vertex_vector(t);
    std::vector<Rational> p(v.x.begin(), v.x.end());
    want.insert(p);
  }
  REQUIRE(want.size() == 2);

  std::set<std::vector<Rational>> got;
  for (const auto& t : face) {
    auto v = vertex_vector(t);
    std::vector<Rational> p(v.x.begin(), v.x.end());
    got.insert(matvec(A, p));
  }
  CHECK(got == want);
}

TEST_CASE("spot check: projection of the cherry-{1,3} caterpillar") {
  ExactMatrix A = caterpillar_projection_matrix(5);
  auto t = make_caterpillar({1, 3, 4, 5, 2});
  auto v = vertex_vector(t);
  std::vector<Rational> p(v.x.begin(), v.x.end());
  auto image = matvec(A, p);
  // The image is the n=4 tree with cherries {1,3},{2,4}.
  auto target = vertex_vector(parse_newick("((1,3),(2,4));"));
  std::vector<Rational> q(target.x.begin(), target.x.end());
  CHECK(image == q);
}

TEST_CASE("constraint line format round trips") {
  std::vector<LinearConstraint> samples = {
      caterpillar_inequality(2, 5, 6),
      intersecting_cherry_inequality(1, 4, 3, 6),
      cyclic_ordering_inequality({2, 1, 4, 3, 5}),
  };
  for (const auto& k : samples) {
    auto line = format_constraint_line(k);
    auto back = parse_constraint_line(line, k.n);
    CHECK(back.coeffs == k.coeffs);
    CHECK(back.rhs == k.rhs);
    CHECK(back.rel == k.rel);
    CHECK(back.tag == k.tag);
  }
  CHECK(format_constraint_line(intersecting_cherry_inequality(1, 2, 3, 5)) ==
        "cherry[1,2,3] : 1*x_1_2 - 1*x_1_3 + 1*x_2_3 <= 4");
  CHECK_THROWS_AS(parse_constraint_line("nonsense", 5), ParseError);
}
