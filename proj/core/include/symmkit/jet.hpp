#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "symmkit/expr.hpp"
#include "symmkit/parse.hpp"

namespace symmkit {

class OrderOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VectorField {
 public:
  VectorField() = default;
  VectorField(std::vector<std::string> coords, std::vector<Expr> coeffs, int prolonged = 0);

  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::vector<Expr>& coefficients() const { return coeffs_; }
  int prolonged_order() const { return prolonged_; }

  Expr coefficient(const std::string& coord) const;
  void set(const std::string& coord, const Expr& value);
  bool is_zero() const;
  // v(f) = sum_i v^i d f / d x^i
  Expr apply(const Expr& f) const;
  // The same field restricted to (and ordered by) the given coordinates.
  VectorField on(const std::vector<std::string>& coords) const;
  VectorField map(const std::function<Expr(const Expr&)>& fn) const;
  std::string str() const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const Expr& c, const VectorField& v);
  friend bool operator==(const VectorField& a, const VectorField& b);

 private:
  std::vector<std::string> coords_;
  std::vector<Expr> coeffs_;
  int prolonged_ = 0;
};

// Jet space of one dependent variable over the independents. In equivalence
// mode the arbitrary elements are extra jet variables over (independents, u).
class JetSpace {
 public:
  JetSpace(std::vector<std::string> independents, std::string dependent, int order,
           std::vector<JetVariable> arbitrary = {});

  const std::vector<std::string>& independents() const { return independents_; }
  const std::string& dependent() const { return dependent_; }
  int order() const { return order_; }
  bool equivalence() const { return !arbitrary_.empty(); }
  const std::vector<JetVariable>& arbitrary() const { return arbitrary_; }

  // independents, dependent, then arbitrary elements
  std::vector<std::string> base_coordinates() const;
  Expr jet(const std::vector<int>& counts) const;
  // derivative coordinates u_J with 1 <= |J| <= order, graded
  std::vector<Expr> jets() const;
  std::vector<std::vector<int>> multi_indices(int max_order) const;
  // jet coordinates of an arbitrary element (order 0..max), or 0 when frozen
  Expr element_jet(const JetVariable& v, const std::vector<int>& counts) const;
  std::vector<std::pair<std::vector<int>, Expr>> element_jets(const JetVariable& v) const;
  std::vector<Expr> element_derivative_atoms() const;

  Expr total_derivative(const Expr& f, const std::string& var) const;
  // D~_j on the space of arbitrary elements (equivalence mode only)
  Expr restricted_derivative(const Expr& f, const std::string& var) const;

  VectorField prolong(const VectorField& v) const;
  // Prolongation to the first derivatives of the arbitrary elements, keyed "E_t", "E_x", ...
  VectorField prolong_equivalence(const VectorField& v) const;

  std::vector<std::string> auxiliary_coordinates() const;

 private:
  std::vector<std::string> independents_;
  std::string dependent_;
  int order_;
  std::vector<JetVariable> arbitrary_;
};

}  // namespace symmkit
