#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symmkit/algfile.hpp"
#include "symmkit/detsys.hpp"
#include "symmkit/problem.hpp"

namespace symmkit {

class UnsupportedShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Projection {
  VectorField field;
  bool zero = false;
};

Projection project(const VectorField& v, const std::vector<std::string>& coords);

// First integrals of the characteristic system, one per coordinate but one.
std::vector<Expr> invariants(const VectorField& Z);
bool invariant_check(const VectorField& Z, const Expr& I, const Assumptions& assume = {});

// Rank of d(fs)/d(coords): exact at a seeded rational point when everything evaluates,
// otherwise via the largest symbolic minor that does not vanish.
std::size_t gradient_rank(const std::vector<Expr>& fs, const std::vector<std::string>& coords);

struct Feasibility {
  bool feasible = false;
  std::string reason;
  std::optional<Expr> e_invariant;  // of the shape E * nu(u)
  std::optional<Expr> h_invariant;  // a function of (x, h)
  std::optional<Expr> blocking;
};

struct ClassNames {
  std::string x = "x", u = "u", E = "E", h = "h";
};

Feasibility feasibility(const VectorField& Z, const std::vector<Expr>& invs, const ClassNames& names = {});

struct Additional {
  std::string source;  // representative name
  VectorField field;   // projection on (t, x, u)
  bool verified = false;
  std::vector<Residual> residuals;
};

struct ClassificationRow {
  std::vector<std::string> sources;
  VectorField Z;
  std::vector<Expr> invariants;
  std::size_t rank = 0;
  bool feasible = false;
  std::string reason;
  std::optional<Expr> E_form;
  std::optional<Expr> h_form;
  std::string constant;  // classification parameter of the h-family
  std::vector<Additional> additional;
  std::vector<std::string> notes;
};

struct Classification {
  std::vector<std::string> excluded;  // zero projections
  std::vector<ClassificationRow> rows;
  std::vector<std::string> findings;
  std::size_t feasible_count() const;
};

// The equation with E -> phi(u) and h -> h_form.
ProblemSpec specialized_equation(const ProblemSpec& base, const Expr& h_form, const std::vector<std::string>& parameters,
                                 const ClassNames& names = {});

ClassificationRow classification_row(const ProblemSpec& base, const AlgebraFile& file, const LieAlgebra& alg,
                                     const Representative& A);
Classification classify(const ProblemSpec& base, const AlgebraFile& file);

}  // namespace symmkit
