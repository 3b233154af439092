#pragma once

#include <vector>

#include "bmep/rational.hpp"

namespace bmep {

/// Dense matrix of exact rationals. Row-major storage.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& at(int r, int c) { return data_[r * cols_ + c]; }
  const Rational& at(int r, int c) const { return data_[r * cols_ + c]; }

  std::vector<Rational> row(int r) const;

  bool operator==(const ExactMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

ExactMatrix matmul(const ExactMatrix& a, const ExactMatrix& b);
std::vector<Rational> matvec(const ExactMatrix& a, const std::vector<Rational>& x);

int rank(ExactMatrix m);

/// Reduced row echelon form; pivot column indices go to *pivot_cols if given.
ExactMatrix rref(ExactMatrix m, std::vector<int>* pivot_cols = nullptr);

/// Dimension of the affine hull of the points: rank of the difference set.
/// 0 for a single point. Throws DomainError on an empty list.
int affine_dimension(const std::vector<std::vector<Rational>>& points);

}  // namespace bmep
