#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symmkit/detsys.hpp"
#include "symmkit/linalg.hpp"

namespace symmkit {

struct AnsatzEntry {
  std::string unknown;
  std::vector<std::string> vars;  // polynomial variables (a subset of the unknown's arguments)
  int degree = 3;
  Expr factor = Expr(1);
};

struct AnsatzSpec {
  std::vector<AnsatzEntry> entries;  // aligned with the problem's coordinates

  // Every unknown gets a full polynomial of `degree` in its arguments, except
  // where the problem declares a shape.
  static AnsatzSpec from_problem(const ProblemSpec& spec, int degree = 3);
  // every polynomial degree raised by `by` (shaped entries included)
  AnsatzSpec raised(int by = 1) const;
};

struct AnsatzConstant {
  Expr symbol;
  std::string unknown;
  Expr monomial;  // including the shape factor
};

struct Instantiation {
  VectorField field;  // coefficients are linear in the constants
  std::vector<AnsatzConstant> constants;
  std::vector<Expr> bodies;  // per unknown, in entry order
};

Instantiation instantiate(const ProblemSpec& spec, const AnsatzSpec& ansatz);

struct SolutionSpace {
  std::vector<VectorField> basis;
  std::vector<RationalVector> assignments;  // constant values defining each basis field
  std::vector<AnsatzConstant> constants;
  // constants that no equation mentions: directions the ansatz cannot pin down
  std::vector<AnsatzConstant> unresolved;
  std::vector<bool> verified;
  int degree = 0;
  std::size_t equations = 0;
  std::optional<std::size_t> probe_dimension;  // dimension at degree + 1
  std::vector<std::string> warnings;

  std::size_t dimension() const { return basis.size(); }
  bool stable() const { return !probe_dimension || *probe_dimension == basis.size(); }
};

// Substitute the ansatz into the determining system, split by the remaining
// monomials and return the exact null space as vector fields.
SolutionSpace solve(const DeterminingSystem& system, const AnsatzSpec& ansatz);
SolutionSpace solve(const ProblemSpec& spec, int degree = 3, bool probe = true);
// Same with the independents' coefficients allowed to depend on the dependent variable.
SolutionSpace unrestricted_point_check(const ProblemSpec& spec, int degree = 3, bool probe = true);

// Monomials of total degree <= degree, graded then lexicographic in vars order.
std::vector<Expr> monomials(const std::vector<std::string>& vars, int degree);

}  // namespace symmkit
