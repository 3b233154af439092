#include "bmep/dissimilarity.hpp"

#include <random>
#include <sstream>

#include "bmep/errors.hpp"
#include "bmep/pair_index.hpp"

namespace bmep {

Rational DissimilarityMatrix::at(int i, int j) const {
  if (i == j) return 0;
  return d[pair_rank(i, j, n)];
}

DissimilarityMatrix DissimilarityMatrix::from_upper(int n, std::vector<Rational> entries) {
  if (n < 3) throw DomainError("DissimilarityMatrix: n must be >= 3");
  if (static_cast<int>(entries.size()) != num_pairs(n))
    throw DomainError("DissimilarityMatrix: expected " + std::to_string(num_pairs(n)) +
                      " entries");
  for (const Rational& x : entries)
    if (x < 0) throw DomainError("DissimilarityMatrix: entries must be nonnegative");
  DissimilarityMatrix m;
  m.n = n;
  m.d = std::move(entries);
  return m;
}

DissimilarityMatrix parse_dissimilarity(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.empty()) throw ParseError("dissimilarity: empty input", 0);
  int n;
  try {
    n = std::stoi(tokens[0]);
  } catch (const std::exception&) {
    throw ParseError("dissimilarity: first token must be n", 0);
  }
  if (n < 3) throw DomainError("dissimilarity: n must be >= 3");
  const std::size_t rest = tokens.size() - 1;
  if (rest == static_cast<std::size_t>(num_pairs(n))) {
    std::vector<Rational> entries;
    entries.reserve(rest);
    for (std::size_t k = 1; k < tokens.size(); ++k)
      entries.push_back(rational_from_string(tokens[k]));
    return DissimilarityMatrix::from_upper(n, std::move(entries));
  }
  if (rest == static_cast<std::size_t>(n) * n) {
    std::vector<Rational> square(rest);
    for (std::size_t k = 0; k < rest; ++k) square[k] = rational_from_string(tokens[k + 1]);
    for (int i = 0; i < n; ++i) {
      if (square[i * n + i] != 0)
        throw DomainError("dissimilarity: diagonal must be zero");
      for (int j = i + 1; j < n; ++j)
        if (square[i * n + j] != square[j * n + i])
          throw DomainError("dissimilarity: matrix is not symmetric at (" +
                            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
    std::vector<Rational> entries;
    entries.reserve(num_pairs(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) entries.push_back(square[i * n + j]);
    return DissimilarityMatrix::from_upper(n, std::move(entries));
  }
  throw ParseError("dissimilarity: expected C(n,2) or n*n entries after n, got " +
                       std::to_string(rest),
                   0);
}

std::string format_dissimilarity(const DissimilarityMatrix& m) {
  std::ostringstream out;
  out << m.n << "\n";
  for (int r = 0; r < num_pairs(m.n); ++r) {
    if (r) out << ' ';
    out << rational_to_string(m.d[r]);
  }
  out << "\n";
  return out.str();
}

DissimilarityMatrix random_dissimilarity(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> entries;
  entries.reserve(num_pairs(n));
  for (int r = 0; r < num_pairs(n); ++r)
    entries.emplace_back(Int(rng() % 1000000), Int(1000));
  return DissimilarityMatrix::from_upper(n, std::move(entries));
}

}  // namespace bmep
