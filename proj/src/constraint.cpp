#include "bmep/constraint.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "bmep/errors.hpp"
#include "bmep/pair_index.hpp"
#include "bmep/polytope.hpp"

namespace bmep {

std::string ConstraintTag::to_string() const {
  auto join = [&](char sep) {
    std::string out;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (k) out += sep;
      out += std::to_string(labels[k]);
    }
    return out;
  };
  switch (kind) {
    case Kind::Caterpillar:
      return "caterpillar[" + join(',') + "]";
    case Kind::IntersectingCherry:
      return "cherry[" + join(',') + "]";
    case Kind::CyclicOrdering:
      return "cyclic[" + join(',') + "]";
    case Kind::AdHoc:
      return "adhoc";
  }
  return "adhoc";
}

Rational LinearConstraint::evaluate(const VertexVector& v) const {
  if (v.n != n) throw DomainError("LinearConstraint::evaluate: n mismatch");
  Rational sum = 0;
  for (const auto& [rank, coeff] : coeffs) sum += coeff * v.x[rank];
  return sum;
}

Rational LinearConstraint::evaluate(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != num_pairs(n))
    throw DomainError("LinearConstraint::evaluate: dimension mismatch");
  Rational sum = 0;
  for (const auto& [rank, coeff] : coeffs) sum += coeff * x[rank];
  return sum;
}

bool LinearConstraint::satisfied(const Rational& value) const {
  switch (rel) {
    case Relation::LessEq:
      return value <= rhs;
    case Relation::GreaterEq:
      return value >= rhs;
    case Relation::Equal:
      return value == rhs;
  }
  return false;
}

std::vector<Rational> LinearConstraint::dense_coeffs() const {
  std::vector<Rational> out(num_pairs(n), Rational(0));
  for (const auto& [rank, coeff] : coeffs) out[rank] = coeff;
  return out;
}

LinearConstraint caterpillar_inequality(int a, int b, int n) {
  if (a == b) throw DomainError("caterpillar_inequality: leaves must be distinct");
  if (n < 4) throw DomainError("caterpillar_inequality: n must be >= 4");
  LinearConstraint k;
  k.n = n;
  k.coeffs[pair_rank(a, b, n)] = 1;
  k.rel = Relation::GreaterEq;
  k.rhs = 1;
  k.tag = {ConstraintTag::Kind::Caterpillar, {std::min(a, b), std::max(a, b)}};
  return k;
}

LinearConstraint intersecting_cherry_inequality(int a, int b, int c, int n) {
  if (a == b || b == c || a == c)
    throw DomainError("intersecting_cherry_inequality: leaves must be distinct");
  if (n < 4) throw DomainError("intersecting_cherry_inequality: n must be >= 4");
  LinearConstraint k;
  k.n = n;
  k.coeffs[pair_rank(a, b, n)] += 1;
  k.coeffs[pair_rank(b, c, n)] += 1;
  k.coeffs[pair_rank(a, c, n)] -= 1;
  k.rel = Relation::LessEq;
  k.rhs = pow2(n - 3);
  k.tag = {ConstraintTag::Kind::IntersectingCherry, {std::min(a, c), b, std::max(a, c)}};
  return k;
}

std::vector<int> canonical_cycle(std::vector<int> cycle) {
  const std::size_t n = cycle.size();
  std::vector<int> best;
  for (int dir = 0; dir < 2; ++dir) {
    for (std::size_t start = 0; start < n; ++start) {
      std::vector<int> candidate(n);
      for (std::size_t k = 0; k < n; ++k) candidate[k] = cycle[(start + k) % n];
      if (best.empty() || candidate < best) best = candidate;
    }
    std::reverse(cycle.begin(), cycle.end());
  }
  return best;
}

LinearConstraint cyclic_ordering_inequality(const std::vector<int>& cycle) {
  if (cycle.size() != 5)
    throw DomainError("cyclic_ordering_inequality: only established for n=5");
  std::vector<char> seen(6, 0);
  for (int x : cycle) {
    if (x < 1 || x > 5 || seen[x])
      throw DomainError("cyclic_ordering_inequality: cycle must be a permutation of 1..5");
    seen[x] = 1;
  }
  std::vector<int> canon = canonical_cycle(cycle);
  LinearConstraint k;
  k.n = 5;
  for (int p = 0; p < 5; ++p)
    k.coeffs[pair_rank(canon[p], canon[(p + 1) % 5], 5)] += 1;
  k.rel = Relation::LessEq;
  k.rhs = 13;
  k.tag = {ConstraintTag::Kind::CyclicOrdering, canon};
  return k;
}

std::vector<LinearConstraint> all_caterpillar_constraints(int n) {
  std::vector<LinearConstraint> out;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) out.push_back(caterpillar_inequality(a, b, n));
  return out;
}

std::vector<LinearConstraint> all_intersecting_cherry_constraints(int n) {
  std::vector<LinearConstraint> out;
  for (int b = 1; b <= n; ++b)
    for (int a = 1; a <= n; ++a) {
      if (a == b) continue;
      for (int c = a + 1; c <= n; ++c) {
        if (c == b) continue;
        out.push_back(intersecting_cherry_inequality(a, b, c, n));
      }
    }
  return out;
}

std::vector<LinearConstraint> all_cyclic_constraints() {
  std::vector<LinearConstraint> out;
  std::vector<std::vector<int>> seen;
  std::vector<int> rest = {2, 3, 4, 5};
  do {
    std::vector<int> cycle = {1};
    cycle.insert(cycle.end(), rest.begin(), rest.end());
    std::vector<int> canon = canonical_cycle(cycle);
    if (std::find(seen.begin(), seen.end(), canon) == seen.end()) {
      seen.push_back(canon);
      out.push_back(cyclic_ordering_inequality(canon));
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  std::sort(out.begin(), out.end(), [](const LinearConstraint& x, const LinearConstraint& y) {
    return x.tag.labels < y.tag.labels;
  });
  return out;
}

std::vector<LinearConstraint> row_sum_equalities(int n) {
  std::vector<LinearConstraint> out;
  for (int leaf = 1; leaf <= n; ++leaf) {
    LinearConstraint eq;
    eq.n = n;
    for (int j = 1; j <= n; ++j)
      if (j != leaf) eq.coeffs[pair_rank(leaf, j, n)] = 1;
    eq.rel = Relation::Equal;
    eq.rhs = pow2(n - 2);
    eq.tag = {ConstraintTag::Kind::AdHoc, {leaf}};
    out.push_back(std::move(eq));
  }
  return out;
}

std::vector<LinearConstraint> dedup_equivalent_constraints(
    int n, const std::vector<LinearConstraint>& constraints) {
  // Equality rows in RREF, so canonical_inequality gives a unique coset
  // representative per constraint.
  ExactMatrix aug(n, num_pairs(n) + 1);
  {
    auto eqs = row_sum_equalities(n);
    for (int r = 0; r < n; ++r) {
      auto dense = eqs[r].dense_coeffs();
      for (int c = 0; c < num_pairs(n); ++c) aug.at(r, c) = dense[c];
      aug.at(r, num_pairs(n)) = eqs[r].rhs;
    }
  }
  ExactMatrix reduced = rref(std::move(aug), nullptr);
  std::vector<LinRow> eq_rows;
  for (int r = 0; r < n; ++r) {
    LinRow row;
    row.a.resize(num_pairs(n));
    for (int c = 0; c < num_pairs(n); ++c) row.a[c] = reduced.at(r, c);
    row.b = reduced.at(r, num_pairs(n));
    eq_rows.push_back(std::move(row));
  }

  std::vector<LinearConstraint> out;
  std::set<LinRow> seen;
  for (const LinearConstraint& k : constraints) {
    LinRow row;
    row.a = k.dense_coeffs();
    row.b = k.rhs;
    if (k.rel == Relation::GreaterEq) {
      for (Rational& c : row.a) c = -c;
      row.b = -row.b;
    }
    if (seen.insert(canonical_inequality(std::move(row), eq_rows)).second) out.push_back(k);
  }
  return out;
}

FaceCertificate tight_vertices(
    const LinearConstraint& k,
    const std::vector<std::pair<BinaryTree, VertexVector>>& vertices) {
  FaceCertificate cert;
  cert.constraint = k;
  for (const auto& [tree, vec] : vertices) {
    Rational value = k.evaluate(vec);
    if (!k.satisfied(value))
      throw ValidityError("constraint " + k.tag.to_string() + " violated by tree " +
                          format_newick(tree) + " (value " + rational_to_string(value) + ")");
    if (k.tight(value)) {
      cert.tight_trees.push_back(tree);
      cert.tight_vectors.push_back(vec);
    }
  }
  if (!cert.tight_vectors.empty()) {
    std::vector<std::vector<Rational>> pts;
    pts.reserve(cert.tight_vectors.size());
    for (const auto& vec : cert.tight_vectors) {
      std::vector<Rational> p;
      p.reserve(vec.x.size());
      for (const Int& xi : vec.x) p.emplace_back(xi);
      pts.push_back(std::move(p));
    }
    cert.affine_dim = affine_dimension(pts);
  }
  return cert;
}

std::vector<BinaryTree> predicted_tight_set(const LinearConstraint& k, int n) {
  std::vector<BinaryTree> out;
  switch (k.tag.kind) {
    case ConstraintTag::Kind::Caterpillar: {
      const int a = k.tag.labels[0], b = k.tag.labels[1];
      std::vector<int> rest;
      for (int x = 1; x <= n; ++x)
        if (x != a && x != b) rest.push_back(x);
      std::sort(rest.begin(), rest.end());
      do {
        std::vector<int> spine = {a};
        spine.insert(spine.end(), rest.begin(), rest.end());
        spine.push_back(b);
        out.push_back(make_caterpillar(spine));
      } while (std::next_permutation(rest.begin(), rest.end()));
      break;
    }
    case ConstraintTag::Kind::IntersectingCherry: {
      const int a = k.tag.labels[0], b = k.tag.labels[1], c = k.tag.labels[2];
      for (auto& t : enumerate_trees_with_cherries(n, {{a, b}})) out.push_back(std::move(t));
      for (auto& t : enumerate_trees_with_cherries(n, {{b, c}})) out.push_back(std::move(t));
      break;
    }
    case ConstraintTag::Kind::CyclicOrdering: {
      for (const auto& t : enumerate_trees(5))
        if (coplanar_with_cycle(t, k.tag.labels)) out.push_back(t);
      break;
    }
    case ConstraintTag::Kind::AdHoc:
      throw DomainError("predicted_tight_set: unsupported for ad-hoc constraints");
  }
  std::sort(out.begin(), out.end(), [](const BinaryTree& x, const BinaryTree& y) {
    return x.canonical_key() < y.canonical_key();
  });
  return out;
}

ExactMatrix caterpillar_projection_matrix(int n) {
  if (n < 5) throw DomainError("caterpillar_projection_matrix: n must be >= 5");
  const int m = n - 1;
  ExactMatrix A(num_pairs(m), num_pairs(n));
  auto relabel = [](int x) { return x > 2 ? x - 1 : x; };
  for (int col = 0; col < num_pairs(n); ++col) {
    auto [i, j] = pair_unrank(col, n);
    if (i == 3 || j == 3) continue;  // leaf-3 coordinates are discarded
    if (i == 1 || j == 1) {
      int other = i == 1 ? j : i;
      A.at(pair_rank(1, relabel(other), m), col) = 1;
    } else {
      A.at(pair_rank(relabel(i), relabel(j), m), col) = Rational(1, 2);
    }
  }
  return A;
}

std::string format_constraint_line(const LinearConstraint& k) {
  std::ostringstream out;
  out << k.tag.to_string() << " : ";
  bool first = true;
  for (const auto& [rank, coeff] : k.coeffs) {
    if (coeff == 0) continue;
    Rational mag = coeff < 0 ? Rational(-coeff) : coeff;
    if (first) {
      if (coeff < 0) out << "-";
      first = false;
    } else {
      out << (coeff < 0 ? " - " : " + ");
    }
    out << rational_to_string(mag) << "*" << pair_name(rank, k.n);
  }
  switch (k.rel) {
    case Relation::LessEq:
      out << " <= ";
      break;
    case Relation::GreaterEq:
      out << " >= ";
      break;
    case Relation::Equal:
      out << " = ";
      break;
  }
  out << rational_to_string(k.rhs);
  return out.str();
}

namespace {

std::vector<int> parse_tag_labels(const std::string& body, std::size_t at) {
  std::vector<int> labels;
  std::string token;
  for (char ch : body) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      token += ch;
    } else if (ch == ',') {
      if (token.empty()) throw ParseError("constraint tag: empty label", at);
      labels.push_back(std::stoi(token));
      token.clear();
    } else {
      throw ParseError("constraint tag: unexpected character", at);
    }
  }
  if (!token.empty()) labels.push_back(std::stoi(token));
  return labels;
}

}  // namespace

LinearConstraint parse_constraint_line(const std::string& line, int n) {
  const std::size_t colon = line.find(" : ");
  if (colon == std::string::npos) throw ParseError("constraint: missing ' : '", 0);
  std::string tag_text = line.substr(0, colon);
  std::string body = line.substr(colon + 3);

  LinearConstraint k;
  k.n = n;
  if (tag_text == "adhoc") {
    k.tag = {ConstraintTag::Kind::AdHoc, {}};
  } else {
    auto open = tag_text.find('[');
    auto close = tag_text.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open)
      throw ParseError("constraint: malformed tag", 0);
    std::string name = tag_text.substr(0, open);
    std::vector<int> labels =
        parse_tag_labels(tag_text.substr(open + 1, close - open - 1), open);
    if (name == "caterpillar")
      k.tag = {ConstraintTag::Kind::Caterpillar, labels};
    else if (name == "cherry")
      k.tag = {ConstraintTag::Kind::IntersectingCherry, labels};
    else if (name == "cyclic")
      k.tag = {ConstraintTag::Kind::CyclicOrdering, labels};
    else
      throw ParseError("constraint: unknown tag '" + name + "'", 0);
  }

  // Relation splits the body; detect <=, >=, or a bare =.
  std::size_t rel_pos;
  std::size_t rel_len = 2;
  if ((rel_pos = body.find("<=")) != std::string::npos) {
    k.rel = Relation::LessEq;
  } else if ((rel_pos = body.find(">=")) != std::string::npos) {
    k.rel = Relation::GreaterEq;
  } else if ((rel_pos = body.find('=')) != std::string::npos) {
    k.rel = Relation::Equal;
    rel_len = 1;
  } else {
    throw ParseError("constraint: missing relation", colon);
  }
  k.rhs = rational_from_string(body.substr(rel_pos + rel_len));

  std::string terms = body.substr(0, rel_pos);
  std::istringstream in(terms);
  std::string token;
  int sign = 1;
  while (in >> token) {
    if (token == "+") {
      sign = 1;
      continue;
    }
    if (token == "-") {
      sign = -1;
      continue;
    }
    if (token[0] == '-') {
      sign = -1;
      token = token.substr(1);
    }
    auto star = token.find('*');
    if (star == std::string::npos) throw ParseError("constraint term: missing '*'", colon);
    Rational coeff = rational_from_string(token.substr(0, star));
    std::string var = token.substr(star + 1);
    if (var.rfind("x_", 0) != 0) throw ParseError("constraint term: expected x_<i>_<j>", colon);
    auto mid = var.find('_', 2);
    if (mid == std::string::npos) throw ParseError("constraint term: expected x_<i>_<j>", colon);
    int i = std::stoi(var.substr(2, mid - 2));
    int j = std::stoi(var.substr(mid + 1));
    k.coeffs[pair_rank(i, j, n)] += Rational(sign) * coeff;
    sign = 1;
  }
  for (auto it = k.coeffs.begin(); it != k.coeffs.end();)
    it = it->second == 0 ? k.coeffs.erase(it) : std::next(it);
  if (k.coeffs.empty()) throw ParseError("constraint: no terms", colon);
  return k;
}

}  // namespace bmep
