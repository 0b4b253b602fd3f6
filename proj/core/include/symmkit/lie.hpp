#pragma once

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "symmkit/expr.hpp"
#include "symmkit/jet.hpp"
#include "symmkit/linalg.hpp"

namespace symmkit {

class NonClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedSeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ExprVector = std::vector<Expr>;

struct ExprMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Expr> data;

  ExprMatrix() = default;
  ExprMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Expr(0)) {}
  static ExprMatrix from(const RationalMatrix& m);
  static ExprMatrix identity(std::size_t n);
  Expr& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Expr& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  ExprVector column(std::size_t c) const;
  ExprMatrix map(const std::function<Expr(const Expr&)>& fn) const;
  Expr trace() const;
  bool operator==(const ExprMatrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);
ExprVector operator*(const ExprMatrix& a, const ExprVector& v);
// Leibniz expansion; intended for the small matrices met here
Expr determinant(const ExprMatrix& m);

// [X,Y]^k = X(Y^k) - Y(X^k)
VectorField bracket(const VectorField& X, const VectorField& Y);

// Rational coordinates of v in the span of `basis`, if it lies there.
std::optional<RationalVector> expand_in(const std::vector<VectorField>& basis, const VectorField& v);

ExprVector symbolic_vector(const std::string& prefix, std::size_t n);  // a1..an
ExprVector to_exprs(const RationalVector& v);
bool is_zero(const ExprVector& v);

class LieAlgebra {
 public:
  LieAlgebra() = default;
  static LieAlgebra from_basis(std::vector<std::string> names, std::vector<VectorField> basis);

  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<VectorField>& basis() const { return basis_; }
  std::size_t index_of(const std::string& name) const;

  // c^k_{ij}
  Rational structure_constant(std::size_t i, std::size_t j, std::size_t k) const { return c_[i][j][k]; }
  const RationalVector& bracket_coords(std::size_t i, std::size_t j) const { return c_[i][j]; }
  ExprVector bracket(const ExprVector& a, const ExprVector& b) const;

  VectorField field(const ExprVector& coeffs) const;
  std::string combination(const ExprVector& coeffs) const;

  // column j holds the coordinates of [Y_i, Y_j]
  RationalMatrix ad(std::size_t i) const;
  ExprMatrix ad(const ExprVector& v) const;

  RationalMatrix killing_matrix() const;
  Expr killing_form(const ExprVector& a, const ExprVector& b) const;

  // g, g^(1), g^(2), ... ending with the first zero (or repeated) subspace
  std::vector<std::vector<RationalVector>> derived_series() const;
  bool is_solvable() const;
  bool is_semisimple() const;

  // cyclic sums of brackets of basis fields, computed on the vector fields themselves
  bool jacobi() const;
  bool jacobi_constants() const;

  // Ad(exp(s Y_i)) acting on coefficient vectors: exp(-s ad Y_i), summed in closed form
  ExprMatrix adjoint_matrix(std::size_t i, const Expr& s) const;
  ExprVector adjoint(std::size_t i, std::size_t j, const Expr& s) const { return adjoint_matrix(i, s).column(j); }

 private:
  std::vector<std::string> names_;
  std::vector<VectorField> basis_;
  std::vector<std::vector<RationalVector>> c_;
};

struct ReductionStep {
  enum class Kind { Ad, Scale } kind = Kind::Ad;
  std::size_t generator = 0;
  Expr value;
  std::string str(const LieAlgebra& alg) const;
};

ExprVector reduce(const LieAlgebra& alg, const ExprVector& start, const std::vector<ReductionStep>& steps);

struct SearchResult {
  // sequences of generator indices with no provable obstruction
  std::vector<std::vector<std::size_t>> open;
  std::size_t tried = 0;
  // for each obstructed sequence, the first target-zero component that cannot vanish
  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> obstructions;
  std::vector<std::pair<std::vector<std::size_t>, ExprVector>> samples;
  bool unreachable() const { return open.empty(); }
};

// Brute force over all Ad-step sequences (independent symbolic parameters) up to `depth`.
// A sequence is obstructed when a component that must vanish is a product of factors
// known to be nonzero (rationals, exponentials, symbols listed in `nonzero`).
SearchResult search_reduction(const LieAlgebra& alg, const ExprVector& start, const ExprVector& target,
                              const std::set<std::string>& nonzero, int depth);

bool provably_nonzero(const Expr& e, const std::set<std::string>& nonzero);

}  // namespace symmkit
