#include "symmkit/linalg.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace symmkit {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows, std::size_t cols) {
  RationalMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

RationalVector RationalMatrix::row(std::size_t r) const {
  return RationalVector(data_.begin() + static_cast<long>(r * cols_), data_.begin() + static_cast<long>((r + 1) * cols_));
}

void RationalMatrix::append_row(const RationalVector& row) {
  if (row.size() != cols_) throw std::invalid_argument("row length mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  RationalMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

namespace {

std::vector<mpz_class> integer_row(const RationalVector& r) {
  mpz_class l(1);
  for (const auto& q : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  std::vector<mpz_class> out(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) out[j] = r[j].get_num() * (l / r[j].get_den());
  return out;
}

}  // namespace

Echelon bareiss(const RationalMatrix& m) {
  std::vector<std::vector<mpz_class>> a;
  a.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(integer_row(m.row(i)));
  Echelon out;
  out.cols = m.cols();
  mpz_class prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[r], a[p]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) {
        if (prev != 1)
          for (std::size_t j = c + 1; j < m.cols(); ++j) {
            a[i][j] *= a[r][c];
            mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
          }
        else
          for (std::size_t j = c + 1; j < m.cols(); ++j) a[i][j] *= a[r][c];
        continue;
      }
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        mpz_class v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    out.pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = 0; i < r; ++i) {
    RationalVector row(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] = Rational(a[i][j]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::size_t rank(const RationalMatrix& m) { return bareiss(m).pivots.size(); }

Rational determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return Rational(1);
  // track the sign of row swaps and the integer scaling of each row
  std::vector<RationalVector> a;
  for (std::size_t i = 0; i < n; ++i) a.push_back(m.row(i));
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

std::vector<RationalVector> nullspace(const RationalMatrix& m) {
  Echelon e = bareiss(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RationalVector x(m.cols());
    x[f] = 1;
    for (std::size_t k = e.pivots.size(); k-- > 0;) {
      std::size_t p = e.pivots[k];
      Rational s = 0;
      for (std::size_t j = p + 1; j < m.cols(); ++j)
        if (x[j] != 0 && e.rows[k][j] != 0) s += e.rows[k][j] * x[j];
      x[p] = -s / e.rows[k][p];
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<RationalVector> row_space(const RationalMatrix& m) {
  Echelon e = bareiss(m);
  std::vector<RationalVector> rows = e.rows;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Rational piv = rows[k][e.pivots[k]];
    for (auto& v : rows[k]) v /= piv;
  }
  for (std::size_t k = rows.size(); k-- > 0;) {
    std::size_t p = e.pivots[k];
    for (std::size_t i = 0; i < k; ++i) {
      Rational f = rows[i][p];
      if (f == 0) continue;
      for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= f * rows[k][j];
    }
  }
  return rows;
}

std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("right-hand side length mismatch");
  RationalMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto rs = row_space(aug);
  RationalVector x(m.cols());
  for (const auto& r : rs) {
    std::size_t p = 0;
    while (p < r.size() && r[p] == 0) ++p;
    if (p == m.cols()) return std::nullopt;
    x[p] = r[m.cols()];
  }
  return x;
}

std::vector<RationalVector> dedupe_rows(const std::vector<RationalVector>& rows) {
  std::set<RationalVector, bool (*)(const RationalVector&, const RationalVector&)> seen(
      [](const RationalVector& a, const RationalVector& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](const Rational& x, const Rational& y) { return x < y; });
      });
  std::vector<RationalVector> out;
  for (const auto& r : rows) {
    auto it = std::find_if(r.begin(), r.end(), [](const Rational& q) { return q != 0; });
    if (it == r.end()) continue;
    Rational lead = *it;
    RationalVector n = r;
    for (auto& v : n) v /= lead;
    if (seen.insert(n).second) out.push_back(n);
  }
  return out;
}

}  // namespace symmkit
