#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symmkit/lie.hpp"
#include "symmkit/parse.hpp"
#include "symmkit/problem.hpp"

namespace symmkit {

struct Representative {
  std::string name;
  ExprVector coeffs;
  int line = 0;
};

// A scripted reduction: start vector, Ad/scale steps, expected outcome.
struct ReductionCase {
  std::string label;
  int line = 0;
  ExprVector start;
  std::vector<ReductionStep> steps;
  std::optional<ExprVector> expect;
  std::string yields;                              // representative name
  std::vector<std::pair<std::string, Expr>> bind;  // representative parameter = expression
};

struct ReductionSearch {
  std::string label;
  int line = 0;
  ExprVector start;
  ExprVector target;
  std::set<std::string> nonzero;
  int depth = 2;
};

struct NamedField {
  std::string name;
  VectorField field;
};

struct AlgebraFile {
  std::string source;
  std::vector<std::string> coordinates;
  std::vector<std::string> parameters;
  std::vector<FunctionDecl> functions;
  std::vector<NamedField> generators;
  std::vector<NamedField> fields;  // extra named fields that are not part of the basis
  std::vector<std::string> projection;  // space the classification projects onto
  std::vector<NamedField> variants;     // alternative printed projections, keyed by representative
  std::vector<Representative> representatives;
  std::vector<ReductionCase> cases;
  std::vector<ReductionSearch> searches;
  std::string coefficient_prefix = "a";
  std::string second_prefix = "b";

  LieAlgebra algebra() const;
  const Representative* representative(const std::string& name) const;
  std::optional<VectorField> named_field(const std::string& name) const;
  Scope scope(bool strict = true) const;
  Expr parse_expr(const std::string& text, int line, bool strict = true) const;
};

AlgebraFile parse_algebra_file(const std::string& text, const std::string& source = "<input>");
AlgebraFile load_algebra_file(const std::string& path);

struct CaseReport {
  std::string label;
  ExprVector result;
  std::optional<ExprVector> residual;  // result - expect
  bool matches = true;
  std::optional<bool> yields_ok;  // expect agrees with the named representative
  std::optional<bool> fixed_point;  // steps evaluated at the representative leave it unchanged
  std::string fixed_point_note;
};

CaseReport run_case(const AlgebraFile& file, const LieAlgebra& alg, const ReductionCase& c);

struct ParameterReport {
  std::string representative;
  std::string generator;
  ExprVector moved;  // normalized image under Ad(exp(s*generator))
  bool parameter_changes = false;
};

// Whether Ad(exp(s*Y_k)) can alter a representative's parameter while keeping its normal form.
std::vector<ParameterReport> parameter_invariance(const AlgebraFile& file, const LieAlgebra& alg);

}  // namespace symmkit
