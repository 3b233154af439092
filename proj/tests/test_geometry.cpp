#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "bmep/constraint.hpp"
#include "bmep/pair_index.hpp"
#include "bmep/polytope.hpp"

using namespace bmep;

namespace {

VPolytope tree_polytope(int n) {
  VPolytope v;
  v.ambient_dim = num_pairs(n);
  for (const auto& t : enumerate_trees(n)) {
    auto x = vertex_vector(t);
    std::vector<Rational> p(x.x.begin(), x.x.end());
    v.vertices.push_back(std::move(p));
  }
  // insertion order: canonical tree key (enumeration order)
  return v;
}

VPolytope simplex4() {
  VPolytope v;
  v.ambient_dim = 5;
  for (int k = 0; k < 5; ++k) {
    std::vector<Rational> p(5, Rational(0));
    p[k] = 1;
    v.vertices.push_back(std::move(p));
  }
  return v;
}

LinRow to_le_row(const LinearConstraint& k) {
  LinRow row;
  row.a = k.dense_coeffs();
  row.b = k.rhs;
  if (k.rel == Relation::GreaterEq) {
    for (Rational& c : row.a) c = -c;
    row.b = -row.b;
  }
  return row;
}

// Independent face-lattice enumeration, bottom-up: the closure of a vertex
// set S is the set of vertices lying on every facet that contains S; faces
// are exactly the closures reachable by joining faces with vertices.
std::map<int, long long> join_face_counts(const VPolytope& v, const HPolytope& h) {
  IncidenceStructure inc = vertex_facet_incidence(v, h);
  const int nv = inc.num_vertices, nf = inc.num_facets;
  auto closure = [&](const std::set<int>& s) -> std::set<int> {
    std::vector<int> facets;
    for (int f = 0; f < nf; ++f) {
      bool all = true;
      for (int i : s)
        if (!inc.tight[i][f]) {
          all = false;
          break;
        }
      if (all) facets.push_back(f);
    }
    if (facets.empty()) return {};  // only the improper face contains S
    std::set<int> out;
    for (int i = 0; i < nv; ++i) {
      bool all = true;
      for (int f : facets)
        if (!inc.tight[i][f]) {
          all = false;
          break;
        }
      if (all) out.insert(i);
    }
    return out;
  };

  std::set<std::set<int>> faces;
  std::vector<std::set<int>> work;
  for (int i = 0; i < nv; ++i) {
    auto c = closure({i});
    if (!c.empty() && faces.insert(c).second) work.push_back(c);
  }
  while (!work.empty()) {
    auto s = work.back();
    work.pop_back();
    for (int i = 0; i < nv; ++i) {
      if (s.count(i)) continue;
      auto grown = s;
      grown.insert(i);
      auto c = closure(grown);
      if (!c.empty() && faces.insert(c).second) work.push_back(c);
    }
  }
  std::map<int, long long> counts;
  for (const auto& face : faces) {
    std::vector<std::vector<Rational>> pts;
    for (int i : face) pts.push_back(v.vertices[i]);
    ++counts[affine_dimension(pts)];
  }
  return counts;
}

}  // namespace

TEST_CASE("affine dimensions of the tree polytopes match C(n,2)-n") {
  CHECK(affine_dimension(tree_polytope(4).vertices) == 2);
  CHECK(affine_dimension(tree_polytope(5).vertices) == 5);
  CHECK(affine_dimension(tree_polytope(6).vertices) == 9);
  CHECK(affine_dimension({{Rational(3), Rational(7)}}) == 0);
  CHECK_THROWS_AS(affine_dimension({}), DomainError);
}

TEST_CASE("affine_dimension is permutation- and translation-invariant") {
  auto pts = tree_polytope(5).vertices;
  auto shuffled = pts;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(affine_dimension(shuffled) == affine_dimension(pts));
  for (auto& p : shuffled)
    for (auto& c : p) c += 17;
  CHECK(affine_dimension(shuffled) == affine_dimension(pts));
}

TEST_CASE("hull of P_3 is a point") {
  auto h = hull_facets(tree_polytope(3));
  CHECK(h.facets.empty());
  CHECK(h.equalities.size() == 3);
}

TEST_CASE("hull of P_4: 3 facets; vertex recovery round trips") {
  auto v = tree_polytope(4);
  auto h = hull_facets(v);
  CHECK(h.facets.size() == 3);
  CHECK(h.equalities.size() == 4);  // ambient 6, dim 2
  auto back = enumerate_h_vertices(h);
  auto want = v.vertices;
  std::sort(want.begin(), want.end());
  CHECK(back == want);
}

TEST_CASE("hull of the 4-simplex and B(3)") {
  auto s = simplex4();
  auto hs = hull_facets(s);
  CHECK(hs.facets.size() == 5);
  auto back = enumerate_h_vertices(hs);
  auto want = s.vertices;
  std::sort(want.begin(), want.end());
  CHECK(back == want);

  auto b3 = birkhoff_vertices(3);
  CHECK(b3.vertices.size() == 6);
  CHECK(affine_dimension(b3.vertices) == 4);
  auto hb = hull_facets(b3);
  CHECK(hb.facets.size() == 9);
  CHECK(enumerate_h_vertices(hb) == b3.vertices);
}

TEST_CASE("birkhoff_vertices bounds") {
  CHECK(birkhoff_vertices(2).vertices.size() == 2);
  CHECK(affine_dimension(birkhoff_vertices(2).vertices) == 1);
  CHECK(birkhoff_vertices(4).vertices.size() == 24);
  CHECK_THROWS_AS(birkhoff_vertices(1), DomainError);
  CHECK_THROWS_AS(birkhoff_vertices(6), DomainError);
}

TEST_CASE("B(4): 16 facets in dimension 9, each vertex on 12") {
  // The nonnegativity conditions x_rc >= 0 are exactly the facets; a 4x4
  // permutation matrix has 12 zero cells.
  auto b4 = birkhoff_vertices(4);
  CHECK(affine_dimension(b4.vertices) == 9);
  auto h = hull_facets(b4);
  CHECK(h.facets.size() == 16);
  auto inc = vertex_facet_incidence(b4, h);
  for (int c : inc.facets_per_vertex) CHECK(c == 12);
}

TEST_CASE("hull of P_5: 52 facets classified 10 + 30 + 12") {
  auto v = tree_polytope(5);
  auto h = hull_facets(v);
  REQUIRE(h.facets.size() == 52);

  // Map each family constraint to its canonical form modulo the row-sum
  // equalities; every hull facet must match exactly one family member.
  std::map<LinRow, ConstraintTag::Kind> families;
  for (const auto& k : all_caterpillar_constraints(5))
    families[canonical_inequality(to_le_row(k), h.equalities)] = k.tag.kind;
  for (const auto& k : all_intersecting_cherry_constraints(5))
    families[canonical_inequality(to_le_row(k), h.equalities)] = k.tag.kind;
  for (const auto& k : all_cyclic_constraints())
    families[canonical_inequality(to_le_row(k), h.equalities)] = k.tag.kind;
  REQUIRE(families.size() == 52);

  std::map<ConstraintTag::Kind, int> counts;
  for (const auto& facet : h.facets) {
    auto it = families.find(facet);
    REQUIRE(it != families.end());
    ++counts[it->second];
  }
  CHECK(counts[ConstraintTag::Kind::Caterpillar] == 10);
  CHECK(counts[ConstraintTag::Kind::IntersectingCherry] == 30);
  CHECK(counts[ConstraintTag::Kind::CyclicOrdering] == 12);

  auto recovered = enumerate_h_vertices(h);
  auto expected = v.vertices;
  std::sort(expected.begin(), expected.end());
  CHECK(recovered == expected);
}

TEST_CASE("hull of P_4 equals the deduplicated families") {
  auto v = tree_polytope(4);
  auto h = hull_facets(v);
  std::set<LinRow> family_forms;
  for (const auto& k : all_caterpillar_constraints(4))
    family_forms.insert(canonical_inequality(to_le_row(k), h.equalities));
  for (const auto& k : all_intersecting_cherry_constraints(4))
    family_forms.insert(canonical_inequality(to_le_row(k), h.equalities));
  CHECK(family_forms.size() == 3);  // 6 + 12 nominal members collapse to 3
  std::set<LinRow> hull_forms(h.facets.begin(), h.facets.end());
  CHECK(family_forms == hull_forms);
}

TEST_CASE("f-vectors: triangle, 4-simplex, B(3)") {
  CHECK(f_vector(tree_polytope(4)) == std::vector<long long>{3, 3});
  CHECK(f_vector(simplex4()) == std::vector<long long>{5, 10, 10, 5});
  // Nine tetrahedral facets: 9*4/2 = 18 triangles, and the edge graph is K6.
  CHECK(f_vector(birkhoff_vertices(3)) == std::vector<long long>{6, 15, 18, 9});
}

TEST_CASE("f-vector of P_5: endpoints, Euler relation, join cross-check") {
  auto v = tree_polytope(5);
  auto f = f_vector(v);
  REQUIRE(f.size() == 5);
  CHECK(f.front() == 15);
  CHECK(f.back() == 52);
  long long euler = 0;
  for (std::size_t k = 0; k < f.size(); ++k) euler += (k % 2 ? -1 : 1) * f[k];
  CHECK(euler == 1 + (f.size() % 2 ? 1 : -1) * 1);  // 1 + (-1)^(d-1)

  auto h = hull_facets(v);
  auto joined = join_face_counts(v, h);
  for (std::size_t k = 0; k < f.size(); ++k)
    CHECK(joined[static_cast<int>(k)] == f[k]);
}

TEST_CASE("incidence: simplex misses one facet per vertex, B(3) lies on 6 of 9") {
  auto s = simplex4();
  auto inc = vertex_facet_incidence(s, hull_facets(s));
  for (int c : inc.facets_per_vertex) CHECK(c == 4);

  auto b3 = birkhoff_vertices(3);
  auto incb = vertex_facet_incidence(b3, hull_facets(b3));
  for (int c : incb.facets_per_vertex) CHECK(c == 6);
  CHECK(incb.num_facets == 9);

  auto v5 = tree_polytope(5);
  auto h5 = hull_facets(v5);
  auto inc5 = vertex_facet_incidence(v5, h5);
  std::multiset<int> sizes(inc5.vertices_per_facet.begin(), inc5.vertices_per_facet.end());
  CHECK(std::count(sizes.begin(), sizes.end(), 6) == 40);  // 10 caterpillar + 30 cherry
  CHECK(std::count(sizes.begin(), sizes.end(), 5) == 12);  // cyclic
}

TEST_CASE("facet subpolytopes of P_5 vs Birkhoff and the simplex") {
  auto table = [] {
    std::vector<std::pair<BinaryTree, VertexVector>> out;
    for (const auto& t : enumerate_trees(5)) out.emplace_back(t, vertex_vector(t));
    return out;
  }();
  auto face_polytope = [&](const LinearConstraint& k) {
    auto cert = tight_vertices(k, table);
    VPolytope v;
    v.ambient_dim = num_pairs(5);
    for (const auto& vec : cert.tight_vectors) {
      std::vector<Rational> p(vec.x.begin(), vec.x.end());
      v.vertices.push_back(std::move(p));
    }
    std::sort(v.vertices.begin(), v.vertices.end());
    return v;
  };

  auto b3 = birkhoff_vertices(3);
  auto hb3 = hull_facets(b3);
  auto s4 = simplex4();
  auto hs4 = hull_facets(s4);

  auto cat = face_polytope(caterpillar_inequality(1, 2, 5));
  auto hcat = hull_facets(cat);
  CHECK(combinatorially_equivalent(cat, hcat, b3, hb3).has_value());

  auto cherry = face_polytope(intersecting_cherry_inequality(1, 2, 3, 5));
  auto hcherry = hull_facets(cherry);
  CHECK(combinatorially_equivalent(cherry, hcherry, b3, hb3).has_value());

  auto cyc = face_polytope(cyclic_ordering_inequality({1, 2, 3, 4, 5}));
  auto hcyc = hull_facets(cyc);
  CHECK(combinatorially_equivalent(cyc, hcyc, s4, hs4).has_value());

  // Different vertex counts: 6 vs 5.
  CHECK_FALSE(combinatorially_equivalent(b3, hb3, s4, hs4).has_value());

  // Reflexive and symmetric on these instances.
  CHECK(combinatorially_equivalent(b3, hb3, b3, hb3).has_value());
  CHECK(combinatorially_equivalent(s4, hs4, cyc, hcyc).has_value());

  // The witness really is an incidence-preserving bijection.
  auto witness = combinatorially_equivalent(cat, hcat, b3, hb3);
  REQUIRE(witness.has_value());
  std::set<int> image(witness->begin(), witness->end());
  CHECK(image.size() == 6);
}

TEST_CASE("clade-face dimension formula and scan") {
  // A single cherry on n=5 leaves a copy of P_4: dimension 2, facet needs 4.
  CHECK(clade_face_dimension(5, 1, 2) == 2);
  CHECK(clade_face_dimension(6, 2, 4) == 2);
  CHECK_THROWS_AS(clade_face_dimension(5, 1, 1), DomainError);
  CHECK_THROWS_AS(clade_face_dimension(5, 0, 0), DomainError);
  auto report = no_clade_facet_scan(50);
  CHECK(report.hits == 0);
  CHECK(report.combos_checked > 0);
}

TEST_CASE("the n=5 cherry clade-face is a triangle inside the cherry facet") {
  auto table = [] {
    std::vector<std::pair<BinaryTree, VertexVector>> out;
    for (const auto& t : enumerate_trees(5)) out.emplace_back(t, vertex_vector(t));
    return out;
  }();
  // Trees with cherry {1,2}: 3 of them, affinely a triangle, all tight on
  // the intersecting-cherry facet for (1,2,3).
  auto k = intersecting_cherry_inequality(1, 2, 3, 5);
  std::vector<std::vector<Rational>> clade_pts;
  for (const auto& [t, v] : table) {
    auto cs = cherries(t);
    if (std::find(cs.begin(), cs.end(), std::pair<int, int>{1, 2}) == cs.end()) continue;
    CHECK(k.tight(k.evaluate(v)));
    clade_pts.emplace_back(v.x.begin(), v.x.end());
  }
  CHECK(clade_pts.size() == 3);
  CHECK(affine_dimension(clade_pts) == 2);
}

TEST_CASE("H and V text representations round trip") {
  auto v = tree_polytope(4);
  auto h = hull_facets(v);
  auto h2 = h_rep_from_text(h_rep_to_text(h));
  CHECK(h2.equalities == h.equalities);
  CHECK(h2.facets == h.facets);
  auto v2 = v_rep_from_text(v_rep_to_text(v));
  CHECK(v2.vertices == v.vertices);
  CHECK(v2.ambient_dim == v.ambient_dim);
}

TEST_CASE("hull budget exhaustion checkpoints and resumes") {
  auto v = tree_polytope(5);
  std::string path = "hull_checkpoint_test.json";
  std::remove(path.c_str());

  HullOptions tight_budget;
  tight_budget.max_pair_tests = 40;
  tight_budget.checkpoint_path = path;
  CHECK_THROWS_AS(hull_facets(v, tight_budget), BudgetExceeded);

  HullOptions resume;
  resume.checkpoint_path = path;
  resume.resume = true;
  auto resumed = hull_facets(v, resume);
  auto fresh = hull_facets(v);
  CHECK(resumed.facets == fresh.facets);
  CHECK(resumed.equalities == fresh.equalities);
  std::remove(path.c_str());
}
