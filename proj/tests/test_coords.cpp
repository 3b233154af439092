#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "bmep/coords.hpp"
#include "bmep/pair_index.hpp"

using namespace bmep;

namespace {

Int row_sum(const VertexVector& v, int leaf) {
  Int sum = 0;
  for (int j = 1; j <= v.n; ++j)
    if (j != leaf) sum += v.x[pair_rank(leaf, j, v.n)];
  return sum;
}

}  // namespace

TEST_CASE("pair_rank matches the lexicographic ordering") {
  CHECK(pair_rank(1, 2, 5) == 0);
  CHECK(pair_rank(1, 5, 5) == 3);
  CHECK(pair_rank(2, 3, 5) == 4);
  CHECK(pair_rank(4, 5, 5) == 9);
  CHECK(pair_rank(5, 4, 5) == 9);
  for (int n : {4, 5, 6, 7}) {
    for (int r = 0; r < num_pairs(n); ++r) {
      auto [i, j] = pair_unrank(r, n);
      CHECK(pair_rank(i, j, n) == r);
    }
  }
  CHECK_THROWS_AS(pair_rank(2, 2, 5), DomainError);
}

TEST_CASE("vertex_vector of the n=4 quartet") {
  auto t = parse_newick("((1,2),(3,4));");
  auto v = vertex_vector(t);
  // Direct evaluation of 2^(2-l): cherries at distance 1, cross pairs at 2.
  std::vector<Int> want = {2, 1, 1, 1, 1, 2};
  CHECK(v.x == want);
}

TEST_CASE("vertex_vector of the n=5 caterpillar with cherries {1,2},{4,5}") {
  auto t = make_caterpillar({1, 2, 3, 4, 5});
  auto v = vertex_vector(t);
  auto at = [&](int i, int j) { return v.x[pair_rank(i, j, 5)]; };
  CHECK(at(1, 2) == 4);
  CHECK(at(4, 5) == 4);
  CHECK(at(1, 3) == 2);
  CHECK(at(2, 3) == 2);
  CHECK(at(3, 4) == 2);
  CHECK(at(3, 5) == 2);
  CHECK(at(1, 4) == 1);
  CHECK(at(1, 5) == 1);
  CHECK(at(2, 4) == 1);
  CHECK(at(2, 5) == 1);
  for (int leaf = 1; leaf <= 5; ++leaf) CHECK(row_sum(v, leaf) == 8);
}

TEST_CASE("row-sum identity and totals for n<=7") {
  for (int n = 3; n <= 7; ++n) {
    const Int want_row = pow2(n - 2);
    const Int want_total = Int(n) * pow2(n - 3);
    for (const auto& t : enumerate_trees(n)) {
      auto v = vertex_vector(t);
      Int total = 0;
      for (const auto& xi : v.x) total += xi;
      CHECK(total == want_total);
      for (int leaf = 1; leaf <= n; ++leaf) CHECK(row_sum(v, leaf) == want_row);
    }
  }
}

TEST_CASE("entry bounds: max iff cherry, min iff maximal distance") {
  for (const auto& t : enumerate_trees(6)) {
    auto v = vertex_vector(t);
    auto cs = cherries(t);
    for (int r = 0; r < num_pairs(6); ++r) {
      auto [i, j] = pair_unrank(r, 6);
      CHECK(v.x[r] >= 1);
      CHECK(v.x[r] <= pow2(3));
      bool is_cherry =
          std::find(cs.begin(), cs.end(), std::pair<int, int>{i, j}) != cs.end();
      CHECK((v.x[r] == pow2(3)) == is_cherry);
      CHECK((v.x[r] == 1) == (path_internal_nodes(t, i, j) == 4));
    }
  }
}

TEST_CASE("vertex_vector is injective for n<=7") {
  for (int n = 5; n <= 7; ++n) {
    std::set<std::vector<Int>> seen;
    for (const auto& t : enumerate_trees(n)) CHECK(seen.insert(vertex_vector(t).x).second);
  }
}

TEST_CASE("all 15 n=5 vertex vectors are distinct") {
  std::set<std::vector<Int>> seen;
  for (const auto& t : enumerate_trees(5)) seen.insert(vertex_vector(t).x);
  CHECK(seen.size() == 15);
}

TEST_CASE("unscale/rescale round trip") {
  auto t = parse_newick("((1,2),(3,4));");
  auto v = vertex_vector(t);
  auto p = unscale(v);
  std::vector<Rational> want = {Rational(1, 2), Rational(1, 4), Rational(1, 4),
                                Rational(1, 4), Rational(1, 4), Rational(1, 2)};
  CHECK(p.c == want);
  CHECK(rescale(p) == v);

  auto cat = make_caterpillar({1, 2, 3, 4, 5});
  auto pv = unscale(vertex_vector(cat));
  CHECK(pv.c[pair_rank(1, 2, 5)] == Rational(1, 2));
  for (const auto& ci : pv.c) {
    CHECK(ci > 0);
    CHECK(ci <= Rational(1, 2));
  }
  CHECK(rescale(pv) == vertex_vector(cat));
}

TEST_CASE("tree_from_vertex_vector round trips all trees, n<=7") {
  for (int n = 4; n <= 7; ++n)
    for (const auto& t : enumerate_trees(n)) {
      auto back = tree_from_vertex_vector(vertex_vector(t));
      CHECK(back == t);
    }
}

TEST_CASE("tree_from_vertex_vector rejects non-vertices") {
  // Cherries {1,2} and {1,3} cannot coexist; brute force over the 3 vertices
  // confirms no tree matches.
  VertexVector bad1{4, {Int(2), Int(2), Int(1), Int(1), Int(1), Int(1)}};
  for (const auto& t : enumerate_trees(4)) CHECK_FALSE(vertex_vector(t) == bad1);
  CHECK_THROWS_AS(tree_from_vertex_vector(bad1), NotAVertex);

  // Violates the row-sum identity; no tree attains it.
  VertexVector bad2{4, std::vector<Int>(6, Int(1))};
  CHECK_THROWS_AS(tree_from_vertex_vector(bad2), NotAVertex);

  // Non-power-of-two entry.
  VertexVector bad3{4, {Int(3), Int(1), Int(1), Int(1), Int(1), Int(2)}};
  CHECK_THROWS_AS(tree_from_vertex_vector(bad3), NotAVertex);

  // Entry out of range for n=4.
  VertexVector bad4{4, {Int(4), Int(1), Int(1), Int(1), Int(1), Int(2)}};
  CHECK_THROWS_AS(tree_from_vertex_vector(bad4), NotAVertex);
}

TEST_CASE("inner_product") {
  auto t = parse_newick("((1,2),(3,4));");
  auto v = vertex_vector(t);
  std::vector<Rational> ones(6, Rational(1));
  CHECK(inner_product(v, ones) == 8);

  std::vector<Rational> zero(6, Rational(0));
  CHECK(inner_product(v, zero) == 0);

  // Indicator of pair {1,2} picks out x_12 = 4 on a tree with that cherry.
  auto cat = make_caterpillar({1, 2, 3, 4, 5});
  std::vector<Rational> indicator(10, Rational(0));
  indicator[pair_rank(1, 2, 5)] = 1;
  CHECK(inner_product(vertex_vector(cat), indicator) == 4);

  CHECK_THROWS_AS(inner_product(v, indicator), DomainError);
}

TEST_CASE("vertex vector text and json forms") {
  auto t = parse_newick("((1,2),(3,4));");
  auto v = vertex_vector(t);
  CHECK(vertex_vector_to_text(v) == "n=4\n2 1 1 1 1 2\n");
  CHECK(vertex_vector_to_json(v).find("\"x_1_2\":\"2\"") != std::string::npos);
}
