#include "bmep/polytope.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bmep/errors.hpp"

namespace bmep {

namespace {

// ---------------------------------------------------------------------------
// Small fixed-width bitsets over constraint indices
// ---------------------------------------------------------------------------

using Bits = std::vector<std::uint64_t>;

Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, std::size_t k) { b[k / 64] |= std::uint64_t{1} << (k % 64); }
bool test_bit(const Bits& b, std::size_t k) { return b[k / 64] >> (k % 64) & 1; }

Bits bits_and(const Bits& x, const Bits& y) {
  Bits out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] & y[k];
  return out;
}

bool bits_subset(const Bits& sub, const Bits& super) {
  for (std::size_t k = 0; k < sub.size(); ++k)
    if (sub[k] & ~super[k]) return false;
  return true;
}

int popcount(const Bits& b) {
  int c = 0;
  for (std::uint64_t w : b) c += __builtin_popcountll(w);
  return c;
}

// ---------------------------------------------------------------------------
// Integer vector helpers
// ---------------------------------------------------------------------------

using IntVec = std::vector<Int>;

void normalize_primitive(IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  if (g > 1)
    for (Int& x : v) x /= g;
}

Int dot(const IntVec& a, const IntVec& b) {
  Int sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0 && b[k] != 0) sum += a[k] * b[k];
  return sum;
}

// Clears denominators of a rational row, returning a primitive integer row
// with the same orientation.
IntVec to_integer_row(const std::vector<Rational>& row) {
  Int lcm = 1;
  for (const Rational& x : row) {
    Int den = denominator(x);
    lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
  }
  IntVec out;
  out.reserve(row.size());
  for (const Rational& x : row) out.push_back(numerator(x) * (lcm / denominator(x)));
  normalize_primitive(out);
  return out;
}

// ---------------------------------------------------------------------------
// Double description core
//
// Enumerates the extreme rays of the cone {y : C y <= 0} by inserting the
// rows of C one at a time, starting from lineality = R^D. Rays are primitive
// integer vectors tagged with the set of processed rows they satisfy with
// equality; two rays combine across the new hyperplane only when adjacent
// (no third ray's zero set contains the intersection of theirs).
// ---------------------------------------------------------------------------

struct DdRay {
  IntVec v;
  Bits zero;
};

struct DdState {
  std::vector<IntVec> lineality;
  std::vector<DdRay> rays;
  std::size_t next_row = 0;
};

struct DdBudget {
  std::optional<std::uint64_t> max_pair_tests;
  std::uint64_t used_pair_tests = 0;
};

nlohmann::json state_to_json(const DdState& state) {
  nlohmann::json j;
  j["next_row"] = state.next_row;
  nlohmann::json lin = nlohmann::json::array();
  for (const IntVec& l : state.lineality) {
    nlohmann::json row = nlohmann::json::array();
    for (const Int& x : l) row.push_back(x.str());
    lin.push_back(std::move(row));
  }
  j["lineality"] = std::move(lin);
  nlohmann::json rays = nlohmann::json::array();
  for (const DdRay& r : state.rays) {
    nlohmann::json jr;
    nlohmann::json v = nlohmann::json::array();
    for (const Int& x : r.v) v.push_back(x.str());
    jr["v"] = std::move(v);
    jr["zero"] = r.zero;
    rays.push_back(std::move(jr));
  }
  j["rays"] = std::move(rays);
  return j;
}

DdState state_from_json(const nlohmann::json& j, std::size_t num_rows) {
  DdState state;
  state.next_row = j.at("next_row").get<std::size_t>();
  for (const auto& row : j.at("lineality")) {
    IntVec l;
    for (const auto& x : row) l.emplace_back(x.get<std::string>());
    state.lineality.push_back(std::move(l));
  }
  for (const auto& jr : j.at("rays")) {
    DdRay r;
    for (const auto& x : jr.at("v")) r.v.emplace_back(x.get<std::string>());
    r.zero = jr.at("zero").get<Bits>();
    if (r.zero.size() != make_bits(num_rows).size())
      throw DomainError("dd checkpoint: bitset width mismatch");
    state.rays.push_back(std::move(r));
  }
  return state;
}

void write_checkpoint(const std::string& path, const DdState& state) {
  std::ofstream out(path + ".tmp");
  out << state_to_json(state).dump();
  out.close();
  std::rename((path + ".tmp").c_str(), path.c_str());
}

// Inserts one constraint row into the state.
void dd_insert_row(DdState& state, const std::vector<IntVec>& rows, DdBudget& budget,
                   const std::string& checkpoint_path) {
  const std::size_t r = state.next_row;
  const IntVec& c = rows[r];
  const std::size_t num_rows = rows.size();

  // Lineality reduction: if some lineality vector leaves the hyperplane,
  // spend it to zero the others and seed one strictly feasible ray.
  int hit = -1;
  for (std::size_t k = 0; k < state.lineality.size(); ++k)
    if (dot(c, state.lineality[k]) != 0) {
      hit = static_cast<int>(k);
      break;
    }
  if (hit >= 0) {
    IntVec pivot = state.lineality[hit];
    state.lineality.erase(state.lineality.begin() + hit);
    const Int alpha = dot(c, pivot);
    for (IntVec& l : state.lineality) {
      Int beta = dot(c, l);
      if (beta == 0) continue;
      for (std::size_t k = 0; k < l.size(); ++k) l[k] = alpha * l[k] - beta * pivot[k];
      normalize_primitive(l);
    }
    const Int mag = boost::multiprecision::abs(alpha);
    const int sign = alpha > 0 ? 1 : -1;
    for (DdRay& ray : state.rays) {
      Int beta = dot(c, ray.v);
      if (beta != 0) {
        for (std::size_t k = 0; k < ray.v.size(); ++k)
          ray.v[k] = mag * ray.v[k] - Int(sign) * beta * pivot[k];
        normalize_primitive(ray.v);
      }
      set_bit(ray.zero, r);
    }
    DdRay seeded;
    seeded.v = pivot;
    if (alpha > 0)
      for (Int& x : seeded.v) x = -x;
    seeded.zero = make_bits(num_rows);
    for (std::size_t j = 0; j < r; ++j) set_bit(seeded.zero, j);
    state.rays.push_back(std::move(seeded));
    state.next_row = r + 1;
    return;
  }

  std::vector<Int> vals(state.rays.size());
  std::vector<std::size_t> neg, zer, pos;
  for (std::size_t k = 0; k < state.rays.size(); ++k) {
    vals[k] = dot(c, state.rays[k].v);
    if (vals[k] < 0)
      neg.push_back(k);
    else if (vals[k] == 0)
      zer.push_back(k);
    else
      pos.push_back(k);
  }

  // Combine adjacent (feasible, violating) pairs while the full ray list is
  // still intact; the adjacency test scans every current ray.
  std::vector<DdRay> born;
  if (!pos.empty() && !neg.empty()) {
    // Quick necessary condition on the common zero count; D - |lineality|
    // is the pointed dimension.
    const int need = static_cast<int>(c.size() - state.lineality.size()) - 2;
    for (std::size_t p : neg) {
      for (std::size_t q : pos) {
        ++budget.used_pair_tests;
        if (budget.max_pair_tests && budget.used_pair_tests > *budget.max_pair_tests) {
          if (!checkpoint_path.empty()) write_checkpoint(checkpoint_path, state);
          throw BudgetExceeded("double description: adjacency-test budget exhausted at row " +
                               std::to_string(r));
        }
        Bits common = bits_and(state.rays[p].zero, state.rays[q].zero);
        if (popcount(common) < need) continue;
        bool adjacent = true;
        for (std::size_t w = 0; w < state.rays.size() && adjacent; ++w) {
          if (w == p || w == q) continue;
          if (bits_subset(common, state.rays[w].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        DdRay fresh;
        const Int a = vals[q], b = -vals[p];  // both positive
        fresh.v.resize(c.size());
        for (std::size_t k = 0; k < c.size(); ++k)
          fresh.v[k] = a * state.rays[p].v[k] + b * state.rays[q].v[k];
        normalize_primitive(fresh.v);
        fresh.zero = common;
        set_bit(fresh.zero, r);
        born.push_back(std::move(fresh));
      }
    }
  }

  std::vector<DdRay> next;
  next.reserve(neg.size() + zer.size() + born.size());
  for (std::size_t k : neg) next.push_back(std::move(state.rays[k]));
  for (std::size_t k : zer) {
    set_bit(state.rays[k].zero, r);
    next.push_back(std::move(state.rays[k]));
  }
  for (DdRay& ray : born) next.push_back(std::move(ray));
  state.rays = std::move(next);
  state.next_row = r + 1;
}

// Vertex enumeration of {x : A x <= b} (all rows <=). The region must be
// bounded; a surviving ray with homogeneous coordinate 0 raises DomainError.
std::vector<std::vector<Rational>> dd_vertices(const std::vector<std::vector<Rational>>& A,
                                               const std::vector<Rational>& b,
                                               const HullOptions& options) {
  if (A.empty()) throw DomainError("dd_vertices: no constraints");
  const std::size_t d = A[0].size();
  const std::size_t D = d + 1;

  // Homogenize: rows c.(t,x) <= 0 with c = (-b_i, A_i); plus t >= 0.
  std::vector<IntVec> rows;
  {
    IntVec trow(D, Int(0));
    trow[0] = -1;
    rows.push_back(std::move(trow));
  }
  for (std::size_t i = 0; i < A.size(); ++i) {
    std::vector<Rational> row(D);
    row[0] = -b[i];
    for (std::size_t k = 0; k < d; ++k) row[k + 1] = A[i][k];
    rows.push_back(to_integer_row(row));
  }

  DdState state;
  if (options.resume && !options.checkpoint_path.empty()) {
    std::ifstream in(options.checkpoint_path);
    if (in) {
      nlohmann::json j;
      in >> j;
      state = state_from_json(j, rows.size());
    }
  }
  if (state.next_row == 0 && state.lineality.empty() && state.rays.empty()) {
    for (std::size_t k = 0; k < D; ++k) {
      IntVec e(D, Int(0));
      e[k] = 1;
      state.lineality.push_back(std::move(e));
    }
  }

  DdBudget budget;
  budget.max_pair_tests = options.max_pair_tests;
  while (state.next_row < rows.size()) {
    dd_insert_row(state, rows, budget, options.checkpoint_path);
    if (!options.checkpoint_path.empty()) write_checkpoint(options.checkpoint_path, state);
    if (options.progress)
      options.progress(static_cast<int>(state.next_row), static_cast<int>(rows.size()),
                       state.rays.size());
  }
  if (!state.lineality.empty())
    throw DomainError("dd_vertices: feasible region has lineality (not a polytope)");

  std::vector<std::vector<Rational>> vertices;
  std::set<std::vector<Rational>> seen;
  for (const DdRay& ray : state.rays) {
    if (ray.v[0] == 0) throw DomainError("dd_vertices: region is unbounded");
    if (ray.v[0] < 0) throw DomainError("dd_vertices: inconsistent homogeneous sign");
    std::vector<Rational> x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = Rational(ray.v[k + 1], ray.v[0]);
    if (seen.insert(x).second) vertices.push_back(std::move(x));
  }
  std::sort(vertices.begin(), vertices.end());
  return vertices;
}

// ---------------------------------------------------------------------------
// Affine hull machinery
// ---------------------------------------------------------------------------

struct AffineHull {
  std::vector<Rational> base;      // one point of the hull
  std::vector<int> pivot_cols;     // coordinates that parametrize the hull
  ExactMatrix rref_rows;           // RREF of the difference space (d x D)
  std::vector<LinRow> equalities;  // canonical equality rows
};

AffineHull affine_hull(const std::vector<std::vector<Rational>>& points) {
  const int D = static_cast<int>(points[0].size());
  AffineHull hull;
  hull.base = points[0];
  ExactMatrix diffs(std::max<int>(1, static_cast<int>(points.size()) - 1), D);
  for (std::size_t r = 1; r < points.size(); ++r)
    for (int c = 0; c < D; ++c)
      diffs.at(static_cast<int>(r) - 1, c) = points[r][c] - points[0][c];
  hull.rref_rows = rref(std::move(diffs), &hull.pivot_cols);

  // One equality per non-pivot column j: x_j - sum_k R[k][j] x_{piv_k} = const.
  // A joint RREF over [a | b] afterwards gives each equality a private pivot
  // column, which canonical_inequality relies on.
  std::set<int> pivots(hull.pivot_cols.begin(), hull.pivot_cols.end());
  std::vector<LinRow> raw;
  for (int j = 0; j < D; ++j) {
    if (pivots.count(j)) continue;
    LinRow eq;
    eq.a.assign(D, Rational(0));
    eq.a[j] = 1;
    for (std::size_t k = 0; k < hull.pivot_cols.size(); ++k)
      eq.a[hull.pivot_cols[k]] = -hull.rref_rows.at(static_cast<int>(k), j);
    Rational rhs = 0;
    for (int c = 0; c < D; ++c)
      if (eq.a[c] != 0) rhs += eq.a[c] * points[0][c];
    eq.b = rhs;
    raw.push_back(std::move(eq));
  }
  if (!raw.empty()) {
    ExactMatrix aug(static_cast<int>(raw.size()), D + 1);
    for (std::size_t r = 0; r < raw.size(); ++r) {
      for (int c = 0; c < D; ++c) aug.at(static_cast<int>(r), c) = raw[r].a[c];
      aug.at(static_cast<int>(r), D) = raw[r].b;
    }
    ExactMatrix reduced = rref(std::move(aug), nullptr);
    for (std::size_t r = 0; r < raw.size(); ++r) {
      LinRow eq;
      eq.a.resize(D);
      bool nonzero = false;
      for (int c = 0; c < D; ++c) {
        eq.a[c] = reduced.at(static_cast<int>(r), c);
        nonzero = nonzero || eq.a[c] != 0;
      }
      eq.b = reduced.at(static_cast<int>(r), D);
      if (!nonzero && eq.b != 0)
        throw DomainError("affine_hull: inconsistent equality system");
      if (nonzero) hull.equalities.push_back(std::move(eq));
    }
  }
  return hull;
}

std::vector<Rational> project_to_hull(const AffineHull& hull, const std::vector<Rational>& p) {
  std::vector<Rational> z(hull.pivot_cols.size());
  for (std::size_t k = 0; k < hull.pivot_cols.size(); ++k)
    z[k] = p[hull.pivot_cols[k]] - hull.base[hull.pivot_cols[k]];
  return z;
}

}  // namespace

LinRow canonical_inequality(LinRow row, const std::vector<LinRow>& equalities) {
  // The equality rows each have a leading coordinate (their RREF pivot) that
  // no other equality touches; zero the inequality there.
  for (const LinRow& eq : equalities) {
    int lead = -1;
    for (std::size_t c = 0; c < eq.a.size(); ++c)
      if (eq.a[c] != 0) {
        lead = static_cast<int>(c);
        break;
      }
    if (lead < 0) continue;
    Rational f = row.a[lead] / eq.a[lead];
    if (f == 0) continue;
    for (std::size_t c = 0; c < eq.a.size(); ++c) row.a[c] -= f * eq.a[c];
    row.b -= f * eq.b;
  }
  // Positive scale to a primitive integer vector (the <= orientation pins the
  // sign).
  std::vector<Rational> full = row.a;
  full.push_back(row.b);
  Int lcm = 1;
  for (const Rational& x : full) {
    Int den = denominator(x);
    lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
  }
  Int g = 0;
  for (const Rational& x : full) g = boost::multiprecision::gcd(g, numerator(x) * (lcm / denominator(x)));
  Rational scale = g == 0 ? Rational(1) : Rational(lcm, g);
  for (Rational& x : row.a) x *= scale;
  row.b *= scale;
  return row;
}

HPolytope hull_facets(const VPolytope& v, const HullOptions& options) {
  if (v.vertices.empty()) throw DomainError("hull_facets: no vertices");
  HPolytope h;
  h.ambient_dim = v.ambient_dim;
  AffineHull hull = affine_hull(v.vertices);
  h.equalities = hull.equalities;
  const std::size_t d = hull.pivot_cols.size();
  if (d == 0) return h;  // a single point: equalities only

  // Work in the projected frame, centered so the origin is interior; the
  // polar body's vertices are exactly the facets of the hull.
  std::vector<std::vector<Rational>> z;
  z.reserve(v.vertices.size());
  for (const auto& p : v.vertices) z.push_back(project_to_hull(hull, p));
  std::vector<Rational> centroid(d, Rational(0));
  for (const auto& zi : z)
    for (std::size_t k = 0; k < d; ++k) centroid[k] += zi[k];
  for (std::size_t k = 0; k < d; ++k) centroid[k] /= static_cast<int>(z.size());

  std::vector<std::vector<Rational>> A;
  A.reserve(z.size());
  std::vector<Rational> b(z.size(), Rational(1));
  for (auto& zi : z) {
    for (std::size_t k = 0; k < d; ++k) zi[k] -= centroid[k];
    A.push_back(zi);
  }
  auto polar_vertices = dd_vertices(A, b, options);

  for (const auto& u : polar_vertices) {
    LinRow facet;
    facet.a.assign(v.ambient_dim, Rational(0));
    Rational rhs = 1;
    for (std::size_t k = 0; k < d; ++k) {
      facet.a[hull.pivot_cols[k]] = u[k];
      rhs += u[k] * (centroid[k] + hull.base[hull.pivot_cols[k]]);
    }
    facet.b = rhs;
    h.facets.push_back(canonical_inequality(std::move(facet), h.equalities));
  }
  std::sort(h.facets.begin(), h.facets.end());
  h.facets.erase(std::unique(h.facets.begin(), h.facets.end()), h.facets.end());
  return h;
}

std::vector<std::vector<Rational>> enumerate_h_vertices(const HPolytope& h) {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  for (const LinRow& eq : h.equalities) {
    A.push_back(eq.a);
    b.push_back(eq.b);
    std::vector<Rational> neg = eq.a;
    for (Rational& x : neg) x = -x;
    A.push_back(std::move(neg));
    b.push_back(-eq.b);
  }
  for (const LinRow& row : h.facets) {
    A.push_back(row.a);
    b.push_back(row.b);
  }
  return dd_vertices(A, b, {});
}

IncidenceStructure vertex_facet_incidence(const VPolytope& v, const HPolytope& h) {
  if (v.ambient_dim != h.ambient_dim)
    throw DomainError("vertex_facet_incidence: ambient dimension mismatch");
  IncidenceStructure inc;
  inc.num_vertices = static_cast<int>(v.vertices.size());
  inc.num_facets = static_cast<int>(h.facets.size());
  inc.tight.assign(inc.num_vertices, std::vector<bool>(inc.num_facets, false));
  inc.facets_per_vertex.assign(inc.num_vertices, 0);
  inc.vertices_per_facet.assign(inc.num_facets, 0);
  for (int i = 0; i < inc.num_vertices; ++i) {
    for (int f = 0; f < inc.num_facets; ++f) {
      Rational lhs = 0;
      for (std::size_t c = 0; c < h.facets[f].a.size(); ++c)
        if (h.facets[f].a[c] != 0) lhs += h.facets[f].a[c] * v.vertices[i][c];
      if (lhs > h.facets[f].b)
        throw ValidityError("vertex " + std::to_string(i) + " violates facet " +
                            std::to_string(f));
      if (lhs == h.facets[f].b) {
        inc.tight[i][f] = true;
        ++inc.facets_per_vertex[i];
        ++inc.vertices_per_facet[f];
      }
    }
  }
  return inc;
}

std::vector<long long> f_vector(const VPolytope& v, const HullOptions& options) {
  HPolytope h = hull_facets(v, options);
  IncidenceStructure inc = vertex_facet_incidence(v, h);
  const int nv = inc.num_vertices;
  const int d = affine_dimension(v.vertices);
  std::vector<long long> counts(std::max(d, 1), 0);
  if (d == 0) return {};  // a point has no proper faces

  // Faces are intersections of facet vertex sets; close the facet sets under
  // pairwise intersection, then bin by affine dimension.
  std::vector<Bits> facet_sets;
  for (int f = 0; f < inc.num_facets; ++f) {
    Bits s = make_bits(nv);
    for (int i = 0; i < nv; ++i)
      if (inc.tight[i][f]) set_bit(s, i);
    facet_sets.push_back(std::move(s));
  }
  std::set<Bits> seen(facet_sets.begin(), facet_sets.end());
  std::queue<Bits> work;
  for (const Bits& s : facet_sets) work.push(s);
  while (!work.empty()) {
    Bits s = std::move(work.front());
    work.pop();
    for (const Bits& f : facet_sets) {
      Bits t = bits_and(s, f);
      if (popcount(t) == 0 || seen.count(t)) continue;
      seen.insert(t);
      work.push(t);
    }
  }
  for (const Bits& face : seen) {
    std::vector<std::vector<Rational>> pts;
    for (int i = 0; i < nv; ++i)
      if (test_bit(face, i)) pts.push_back(v.vertices[i]);
    int dim = affine_dimension(pts);
    if (dim < d) ++counts[dim];
  }
  return counts;
}

std::optional<std::vector<int>> combinatorially_equivalent(
    const VPolytope& pv, const HPolytope& ph, const VPolytope& qv, const HPolytope& qh,
    std::uint64_t max_backtrack_nodes) {
  IncidenceStructure pi = vertex_facet_incidence(pv, ph);
  IncidenceStructure qi = vertex_facet_incidence(qv, qh);
  const int nv = pi.num_vertices, nf = pi.num_facets;
  if (nv != qi.num_vertices || nf != qi.num_facets) return std::nullopt;
  {
    auto sorted = [](std::vector<int> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted(pi.facets_per_vertex) != sorted(qi.facets_per_vertex)) return std::nullopt;
    if (sorted(pi.vertices_per_facet) != sorted(qi.vertices_per_facet)) return std::nullopt;
  }

  // Pairwise facet-valence fingerprints prune the search; the full incidence
  // check at the bottom certifies the witness.
  auto common = [&](const IncidenceStructure& inc, int a, int b) {
    int c = 0;
    for (int f = 0; f < inc.num_facets; ++f)
      if (inc.tight[a][f] && inc.tight[b][f]) ++c;
    return c;
  };
  std::vector<std::vector<int>> pc(nv, std::vector<int>(nv)), qc(nv, std::vector<int>(nv));
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b) {
      pc[a][b] = common(pi, a, b);
      qc[a][b] = common(qi, a, b);
    }

  std::set<std::vector<bool>> q_facet_sets;
  for (int f = 0; f < nf; ++f) {
    std::vector<bool> s(nv);
    for (int i = 0; i < nv; ++i) s[i] = qi.tight[i][f];
    q_facet_sets.insert(std::move(s));
  }

  std::vector<int> image(nv, -1);
  std::vector<bool> used(nv, false);
  std::uint64_t nodes = 0;

  std::function<bool(int)> place = [&](int a) -> bool {
    if (++nodes > max_backtrack_nodes)
      throw BudgetExceeded("combinatorially_equivalent: backtracking budget exhausted");
    if (a == nv) {
      for (int f = 0; f < nf; ++f) {
        std::vector<bool> s(nv, false);
        for (int i = 0; i < nv; ++i)
          if (pi.tight[i][f]) s[image[i]] = true;
        if (!q_facet_sets.count(s)) return false;
      }
      return true;
    }
    for (int b = 0; b < nv; ++b) {
      if (used[b] || pi.facets_per_vertex[a] != qi.facets_per_vertex[b]) continue;
      bool ok = true;
      for (int prev = 0; prev < a && ok; ++prev)
        if (pc[prev][a] != qc[image[prev]][b]) ok = false;
      if (!ok) continue;
      image[a] = b;
      used[b] = true;
      if (place(a + 1)) return true;
      used[b] = false;
      image[a] = -1;
    }
    return false;
  };
  if (place(0)) return image;
  return std::nullopt;
}

VPolytope birkhoff_vertices(int k) {
  if (k < 2 || k > 5) throw DomainError("birkhoff_vertices: k must be in 2..5");
  VPolytope v;
  v.ambient_dim = k * k;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<Rational> m(k * k, Rational(0));
    for (int r = 0; r < k; ++r) m[r * k + perm[r]] = 1;
    v.vertices.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(v.vertices.begin(), v.vertices.end());
  return v;
}

long long clade_face_dimension(long long n, long long k, long long y) {
  if (k < 1 || y < 2 * k || y > n || n - y + k < 3)
    throw DomainError("clade_face_dimension: need k >= 1, 2k <= y <= n, n-y+k >= 3");
  long long m = n - y + k;
  return m * (m - 1) / 2 - m;
}

CladeScanReport no_clade_facet_scan(int n_max) {
  CladeScanReport report;
  for (long long n = 4; n <= n_max; ++n) {
    const long long facet_dim = n * (n - 1) / 2 - n - 1;
    for (long long k = 1; 2 * k <= n; ++k) {
      for (long long y = 2 * k; y <= n; ++y) {
        if (n - y + k < 3) continue;
        ++report.combos_checked;
        if (clade_face_dimension(n, k, y) == facet_dim) ++report.hits;
      }
    }
  }
  return report;
}

std::string incidence_to_json(const IncidenceStructure& inc) {
  nlohmann::json j;
  j["vertices"] = inc.num_vertices;
  j["facets"] = inc.num_facets;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : inc.tight) {
    nlohmann::json r = nlohmann::json::array();
    for (bool b : row) r.push_back(b ? 1 : 0);
    rows.push_back(std::move(r));
  }
  j["tight"] = std::move(rows);
  j["facets_per_vertex"] = inc.facets_per_vertex;
  j["vertices_per_facet"] = inc.vertices_per_facet;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Text formats (cdd-style): each H row is "b -a1 ... -aD" for b + a.x >= 0.
// ---------------------------------------------------------------------------

std::string h_rep_to_text(const HPolytope& h) {
  std::ostringstream out;
  out << "H-representation\n";
  if (!h.equalities.empty()) {
    out << "linearity " << h.equalities.size();
    for (std::size_t k = 0; k < h.equalities.size(); ++k) out << ' ' << (k + 1);
    out << '\n';
  }
  out << "begin\n";
  out << (h.equalities.size() + h.facets.size()) << ' ' << (h.ambient_dim + 1)
      << " rational\n";
  auto emit = [&](const LinRow& row) {
    // a.x <= b  ->  b - a.x >= 0
    out << rational_to_string(row.b);
    for (const Rational& c : row.a) out << ' ' << rational_to_string(-c);
    out << '\n';
  };
  for (const LinRow& row : h.equalities) emit(row);
  for (const LinRow& row : h.facets) emit(row);
  out << "end\n";
  return out.str();
}

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

HPolytope h_rep_from_text(const std::string& text) {
  auto tokens = tokenize(text);
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw ParseError("h_rep_from_text: truncated input", pos);
    return tokens[pos++];
  };
  if (next() != "H-representation")
    throw ParseError("h_rep_from_text: missing H-representation header", 0);
  std::set<std::size_t> linearity;
  if (pos < tokens.size() && tokens[pos] == "linearity") {
    ++pos;
    std::size_t k = std::stoull(next());
    for (std::size_t i = 0; i < k; ++i) linearity.insert(std::stoull(next()));
  }
  if (next() != "begin") throw ParseError("h_rep_from_text: missing begin", pos);
  std::size_t rows = std::stoull(next());
  std::size_t cols = std::stoull(next());
  if (next() != "rational") throw ParseError("h_rep_from_text: expected rational", pos);
  HPolytope h;
  h.ambient_dim = static_cast<int>(cols - 1);
  for (std::size_t r = 1; r <= rows; ++r) {
    LinRow row;
    row.b = rational_from_string(next());
    row.a.resize(cols - 1);
    for (std::size_t c = 0; c + 1 < cols; ++c) row.a[c] = -rational_from_string(next());
    if (linearity.count(r))
      h.equalities.push_back(std::move(row));
    else
      h.facets.push_back(std::move(row));
  }
  if (next() != "end") throw ParseError("h_rep_from_text: missing end", pos);
  return h;
}

std::string v_rep_to_text(const VPolytope& v) {
  std::ostringstream out;
  out << "V-representation\nbegin\n";
  out << v.vertices.size() << ' ' << (v.ambient_dim + 1) << " rational\n";
  for (const auto& p : v.vertices) {
    out << 1;
    for (const Rational& x : p) out << ' ' << rational_to_string(x);
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

VPolytope v_rep_from_text(const std::string& text) {
  auto tokens = tokenize(text);
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw ParseError("v_rep_from_text: truncated input", pos);
    return tokens[pos++];
  };
  if (next() != "V-representation")
    throw ParseError("v_rep_from_text: missing V-representation header", 0);
  if (next() != "begin") throw ParseError("v_rep_from_text: missing begin", pos);
  std::size_t rows = std::stoull(next());
  std::size_t cols = std::stoull(next());
  if (next() != "rational") throw ParseError("v_rep_from_text: expected rational", pos);
  VPolytope v;
  v.ambient_dim = static_cast<int>(cols - 1);
  for (std::size_t r = 0; r < rows; ++r) {
    if (rational_from_string(next()) != 1)
      throw ParseError("v_rep_from_text: rays are not supported", pos);
    std::vector<Rational> p(cols - 1);
    for (std::size_t c = 0; c + 1 < cols; ++c) p[c] = rational_from_string(next());
    v.vertices.push_back(std::move(p));
  }
  if (next() != "end") throw ParseError("v_rep_from_text: missing end", pos);
  return v;
}

}  // namespace bmep
