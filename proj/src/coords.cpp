#include "bmep/coords.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "bmep/errors.hpp"
#include "bmep/pair_index.hpp"

namespace bmep {

VertexVector vertex_vector(const BinaryTree& t) {
  const int n = t.leaf_count();
  std::vector<int> l = all_path_internal_nodes(t);
  VertexVector v;
  v.n = n;
  v.x.reserve(l.size());
  for (int lv : l) v.x.push_back(pow2(n - 2 - lv));
  return v;
}

PauplinVector unscale(const VertexVector& v) {
  PauplinVector p;
  p.n = v.n;
  const Int scale = pow2(v.n - 2);
  p.c.reserve(v.x.size());
  for (const Int& xi : v.x) p.c.emplace_back(xi, scale);
  return p;
}

VertexVector rescale(const PauplinVector& p) {
  VertexVector v;
  v.n = p.n;
  const Int scale = pow2(p.n - 2);
  v.x.reserve(p.c.size());
  for (const Rational& ci : p.c) {
    Rational xi = ci * scale;
    if (denominator(xi) != 1)
      throw DomainError("rescale: entry is not integral after scaling by 2^(n-2)");
    v.x.push_back(numerator(xi));
  }
  return v;
}

BinaryTree tree_from_vertex_vector(const VertexVector& v) {
  const int n = v.n;
  if (n < 3) throw DomainError("tree_from_vertex_vector: n must be >= 3");
  if (static_cast<int>(v.x.size()) != num_pairs(n))
    throw DomainError("tree_from_vertex_vector: wrong vector length");

  // Recover l_ij = n-2-log2(x_ij); every entry must be a power of two with
  // l in 1..n-2.
  std::map<std::pair<int, int>, int> l;
  for (int r = 0; r < num_pairs(n); ++r) {
    const Int& xi = v.x[r];
    if (!is_power_of_two(xi))
      throw NotAVertex("entry " + pair_name(r, n) + " is not a positive power of two");
    int lv = n - 2 - log2_exact(xi);
    if (lv < 1 || lv > n - 2)
      throw NotAVertex("entry " + pair_name(r, n) + " is outside [1, 2^(n-3)]");
    auto [i, j] = pair_unrank(r, n);
    l[{i, j}] = lv;
  }
  auto lv = [&](int i, int j) -> int& { return l.at({std::min(i, j), std::max(i, j)}); };

  // Repeatedly collapse a cherry {i,j} (l=1): keep i as the pseudo-leaf,
  // drop j, and decrement i's distances (the cherry's internal node is gone).
  // Both members must agree on every distance first.
  std::vector<int> alive;
  for (int x = 1; x <= n; ++x) alive.push_back(x);
  std::vector<std::pair<int, int>> collapses;  // (kept, dropped), in order
  while (alive.size() > 3) {
    int ci = -1, cj = -1;
    for (std::size_t a = 0; a < alive.size() && ci < 0; ++a)
      for (std::size_t b = a + 1; b < alive.size(); ++b)
        if (lv(alive[a], alive[b]) == 1) {
          ci = alive[a];
          cj = alive[b];
          break;
        }
    if (ci < 0) throw NotAVertex("no cherry found among remaining leaves");
    for (int k : alive) {
      if (k == ci || k == cj) continue;
      if (lv(ci, k) != lv(cj, k))
        throw NotAVertex("cherry {" + std::to_string(ci) + "," + std::to_string(cj) +
                         "} members disagree on distance to " + std::to_string(k));
      lv(ci, k) -= 1;
      if (lv(ci, k) < 1) throw NotAVertex("distance underflow while collapsing");
    }
    collapses.emplace_back(ci, cj);
    alive.erase(std::find(alive.begin(), alive.end(), cj));
  }
  for (std::size_t a = 0; a < alive.size(); ++a)
    for (std::size_t b = a + 1; b < alive.size(); ++b)
      if (lv(alive[a], alive[b]) != 1)
        throw NotAVertex("3-leaf core is not a star");

  // Rebuild: start from the star on the surviving labels and re-expand the
  // collapses in reverse (attach the dropped leaf next to the kept one).
  std::vector<std::pair<int, int>> edges;
  int next_internal = n;
  {
    int center = next_internal++;
    for (int x : alive) edges.emplace_back(BinaryTree::leaf_node(x), center);
  }
  for (auto it = collapses.rbegin(); it != collapses.rend(); ++it) {
    auto [kept, dropped] = *it;
    int leaf = BinaryTree::leaf_node(kept);
    auto e = std::find_if(edges.begin(), edges.end(), [&](const std::pair<int, int>& ed) {
      return ed.first == leaf || ed.second == leaf;
    });
    int other = e->first == leaf ? e->second : e->first;
    int w = next_internal++;
    *e = {leaf, w};
    edges.emplace_back(w, other);
    edges.emplace_back(w, BinaryTree::leaf_node(dropped));
  }
  BinaryTree t = BinaryTree::from_edges(n, edges);

  if (!(vertex_vector(t) == v))
    throw NotAVertex("reconstruction mismatch: collapse sequence is not consistent");
  return t;
}

Rational inner_product(const VertexVector& v, const std::vector<Rational>& d) {
  if (d.size() != v.x.size()) throw DomainError("inner_product: dimension mismatch");
  Rational sum = 0;
  for (std::size_t r = 0; r < d.size(); ++r) sum += d[r] * v.x[r];
  return sum;
}

Rational inner_product(const PauplinVector& p, const std::vector<Rational>& d) {
  if (d.size() != p.c.size()) throw DomainError("inner_product: dimension mismatch");
  Rational sum = 0;
  for (std::size_t r = 0; r < d.size(); ++r) sum += d[r] * p.c[r];
  return sum;
}

std::string vertex_vector_to_text(const VertexVector& v) {
  std::string out = "n=" + std::to_string(v.n) + "\n";
  for (std::size_t r = 0; r < v.x.size(); ++r) {
    if (r) out += ' ';
    out += v.x[r].str();
  }
  out += '\n';
  return out;
}

std::string vertex_vector_to_json(const VertexVector& v) {
  nlohmann::json j;
  j["n"] = v.n;
  nlohmann::json entries = nlohmann::json::object();
  for (int r = 0; r < static_cast<int>(v.x.size()); ++r)
    entries[pair_name(r, v.n)] = v.x[r].str();
  j["x"] = std::move(entries);
  return j.dump();
}

}  // namespace bmep
