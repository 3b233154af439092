#include "bmep/matrix.hpp"

#include <cctype>

#include "bmep/errors.hpp"

namespace bmep {

namespace {

// Base-10 digits to integer, immune to GMP's leading-zero octal detection.
bool digits_to_int(const std::string& digits, Int& out) {
  if (digits.empty()) return false;
  out = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    out = out * 10 + (c - '0');
  }
  return true;
}

bool signed_digits_to_int(std::string text, Int& out) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text = text.substr(1);
  }
  if (!digits_to_int(text, out)) return false;
  if (negative) out = -out;
  return true;
}

}  // namespace

Rational rational_from_string(const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> Rational {
    throw ParseError("bad rational '" + text + "': " + why, pos);
  };
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) return fail("empty");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    if (s.find('.') != std::string::npos) return fail("mixed '/' and '.'");
    Int num, den;
    if (!signed_digits_to_int(s.substr(0, slash), num) ||
        !signed_digits_to_int(s.substr(slash + 1), den))
      return fail("not an integer fraction");
    if (den == 0) return fail("zero denominator");
    return Rational(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Int value;
    if (!signed_digits_to_int(s, value)) return fail("not an integer");
    return Rational(value, Int(1));
  }
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  bool negative = !head.empty() && head[0] == '-';
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) head = head.substr(1);
  if (head.empty()) head = "0";
  if (tail.empty()) tail = "0";
  Int whole, frac;
  if (!digits_to_int(head, whole) || !digits_to_int(tail, frac)) return fail("not a decimal");
  Int scale = 1;
  for (std::size_t k = 0; k < tail.size(); ++k) scale *= 10;
  Int num = whole * scale + frac;
  if (negative) num = -num;
  return Rational(num, scale);
}

std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::vector<Rational> ExactMatrix::row(int r) const {
  std::vector<Rational> out(cols_);
  for (int c = 0; c < cols_; ++c) out[c] = at(r, c);
  return out;
}

ExactMatrix matmul(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("matmul: dimension mismatch");
  ExactMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Rational& aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

std::vector<Rational> matvec(const ExactMatrix& a, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != a.cols()) throw DomainError("matvec: dimension mismatch");
  std::vector<Rational> out(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    Rational sum = 0;
    for (int j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != 0) sum += a.at(i, j) * x[j];
    out[i] = sum;
  }
  return out;
}

ExactMatrix rref(ExactMatrix m, std::vector<int>* pivot_cols) {
  if (pivot_cols) pivot_cols->clear();
  int lead = 0;
  for (int col = 0; col < m.cols() && lead < m.rows(); ++col) {
    int pivot = -1;
    for (int r = lead; r < m.rows(); ++r)
      if (m.at(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != lead)
      for (int c = 0; c < m.cols(); ++c) std::swap(m.at(pivot, c), m.at(lead, c));
    Rational inv = m.at(lead, col);
    for (int c = 0; c < m.cols(); ++c) m.at(lead, c) /= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == lead || m.at(r, col) == 0) continue;
      Rational f = m.at(r, col);
      for (int c = 0; c < m.cols(); ++c) m.at(r, c) -= f * m.at(lead, c);
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++lead;
  }
  return m;
}

int rank(ExactMatrix m) {
  std::vector<int> pivots;
  rref(std::move(m), &pivots);
  return static_cast<int>(pivots.size());
}

int affine_dimension(const std::vector<std::vector<Rational>>& points) {
  if (points.empty()) throw DomainError("affine_dimension: empty point list");
  const std::size_t dim = points[0].size();
  ExactMatrix diffs(static_cast<int>(points.size()) - 1, static_cast<int>(dim));
  for (std::size_t r = 1; r < points.size(); ++r) {
    if (points[r].size() != dim) throw DomainError("affine_dimension: ragged points");
    for (std::size_t c = 0; c < dim; ++c)
      diffs.at(static_cast<int>(r) - 1, static_cast<int>(c)) = points[r][c] - points[0][c];
  }
  if (points.size() == 1) return 0;
  return rank(std::move(diffs));
}

}  // namespace bmep
