#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bmep/matrix.hpp"
#include "bmep/rational.hpp"

namespace bmep {

/// One linear row a.x (<=|=) b; the relation is implied by context
/// (equalities vs facets in HPolytope).
struct LinRow {
  std::vector<Rational> a;
  Rational b;

  bool operator==(const LinRow& o) const { return a == o.a && b == o.b; }
  bool operator<(const LinRow& o) const {
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

struct VPolytope {
  int ambient_dim = 0;
  std::vector<std::vector<Rational>> vertices;
};

struct HPolytope {
  int ambient_dim = 0;
  std::vector<LinRow> equalities;         // a.x = b, reduced row echelon rows
  std::vector<LinRow> facets;             // a.x <= b, canonical + sorted
};

struct IncidenceStructure {
  int num_vertices = 0;
  int num_facets = 0;
  std::vector<std::vector<bool>> tight;   // [vertex][facet]
  std::vector<int> facets_per_vertex;
  std::vector<int> vertices_per_facet;
};

struct HullOptions {
  std::optional<std::uint64_t> max_pair_tests;  // adjacency-test budget
  std::string checkpoint_path;                  // written when set
  bool resume = false;                          // load checkpoint_path first
  std::function<void(int processed, int total, std::size_t rays)> progress;
};

/// Complete irredundant facet list of conv(vertices) via incremental double
/// description run in the affine hull. Facet functionals are reduced modulo
/// the affine-hull equalities, made integer-primitive, and sorted.
/// Throws BudgetExceeded when max_pair_tests runs out (after writing the
/// checkpoint if a path is configured).
HPolytope hull_facets(const VPolytope& v, const HullOptions& options = {});

/// Vertex enumeration of an H-polytope (must be bounded). Used to round-trip
/// hull computations.
std::vector<std::vector<Rational>> enumerate_h_vertices(const HPolytope& h);

/// Face counts by dimension 0..d-1, from the vertex-facet incidence closure.
std::vector<long long> f_vector(const VPolytope& v, const HullOptions& options = {});

IncidenceStructure vertex_facet_incidence(const VPolytope& v, const HPolytope& h);

/// Searches for a vertex bijection inducing a facet bijection that preserves
/// incidence. Returns the witness (image of each vertex of p, as indices into
/// q's vertices) or nullopt. Throws BudgetExceeded when the backtracking
/// budget runs out.
std::optional<std::vector<int>> combinatorially_equivalent(
    const VPolytope& pv, const HPolytope& ph, const VPolytope& qv, const HPolytope& qh,
    std::uint64_t max_backtrack_nodes = 10'000'000);

/// The k! flattened k-by-k permutation matrices (row-major); the Birkhoff
/// polytope B(k) of dimension (k-1)^2. Requires 2 <= k <= 5.
VPolytope birkhoff_vertices(int k);

/// Dimension of the face of P_n spanned by trees displaying k disjoint clades
/// with y total leaves: that face is a copy of P_{n-y+k}, so the dimension is
/// C(m,2)-m with m = n-y+k.
long long clade_face_dimension(long long n, long long k, long long y);

struct CladeScanReport {
  long long combos_checked = 0;
  long long hits = 0;  // clade faces whose dimension equals the facet dimension
};

/// Scans every admissible (n,k,y) with 4 <= n <= n_max and asserts the
/// clade-face dimension never equals C(n,2)-n-1.
CladeScanReport no_clade_facet_scan(int n_max);

/// Reduces an inequality functional modulo equality rows (which must be in
/// reduced row echelon form) and scales it to a primitive integer vector.
LinRow canonical_inequality(LinRow row, const std::vector<LinRow>& equalities);

/// {"vertices":m, "facets":k, "tight":[[...]], "facets_per_vertex":[...],
/// "vertices_per_facet":[...]}.
std::string incidence_to_json(const IncidenceStructure& inc);

/// cdd-style text formats; H rows are stored as "b -a" meaning b + a.x >= 0,
/// equalities flagged through a linearity line.
std::string h_rep_to_text(const HPolytope& h);
HPolytope h_rep_from_text(const std::string& text);
std::string v_rep_to_text(const VPolytope& v);
VPolytope v_rep_from_text(const std::string& text);

}  // namespace bmep
