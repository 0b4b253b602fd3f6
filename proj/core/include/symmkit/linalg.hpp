#pragma once

#include <optional>
#include <vector>

#include "symmkit/rational.hpp"

namespace symmkit {

using RationalVector = std::vector<Rational>;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<RationalVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  RationalVector row(std::size_t r) const;
  void append_row(const RationalVector& row);

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct Echelon {
  std::vector<RationalVector> rows;  // integer-valued rows after fraction-free elimination
  std::vector<std::size_t> pivots;
  std::size_t cols = 0;
};

// Fraction-free (Bareiss) elimination; pivots are chosen leftmost column first,
// lowest row index first.
Echelon bareiss(const RationalMatrix& m);
std::size_t rank(const RationalMatrix& m);
Rational determinant(const RationalMatrix& m);
// Basis of {x : m x = 0}; each vector has a 1 in its free column.
std::vector<RationalVector> nullspace(const RationalMatrix& m);
// Reduced row-echelon basis of the row space.
std::vector<RationalVector> row_space(const RationalMatrix& m);
// Unique or particular solution of m x = b, if consistent.
std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b);
// Rows with identical direction collapse to one; zero rows are dropped.
std::vector<RationalVector> dedupe_rows(const std::vector<RationalVector>& rows);

}  // namespace symmkit
