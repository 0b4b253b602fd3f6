#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symmkit/expr.hpp"
#include "symmkit/jet.hpp"
#include "symmkit/parse.hpp"

namespace symmkit {

class SpecError : public std::runtime_error {
 public:
  SpecError(int line, const std::string& message)
      : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct FunctionDecl {
  std::string name;
  std::vector<std::string> args;
  std::string str() const;
};

enum class Mode { Base, Equivalence };

// Ansatz refinement: unknown = factor * polynomial(vars, degree).
struct ShapeDecl {
  std::string unknown;
  Expr factor;
  std::vector<std::string> vars;
  int degree = 0;
};

struct Candidate {
  std::string name;
  VectorField field;
};

class ProblemSpec {
 public:
  static ProblemSpec parse(const std::string& text, const std::string& source = "<input>");
  static ProblemSpec load(const std::string& path);

  std::string source;
  std::vector<std::string> independents;
  std::string dependent;
  std::vector<FunctionDecl> arbitrary;
  std::vector<FunctionDecl> extra_functions;
  std::vector<std::string> parameters;
  Mode mode = Mode::Base;
  int order = 2;
  Expr lhs;
  Expr rhs;
  std::vector<FunctionDecl> unknowns;  // aligned with coordinates()
  std::vector<ShapeDecl> shapes;
  std::vector<Candidate> candidates;
  std::vector<std::string> warnings;

  bool equivalence() const { return mode == Mode::Equivalence; }
  // t x u, followed by the arbitrary elements in equivalence mode
  std::vector<std::string> coordinates() const;
  const FunctionDecl& unknown_for(const std::string& coord) const;
  const FunctionDecl* arbitrary_function(const std::string& name) const;

  JetSpace jet_space() const;
  Scope scope(bool lenient_derivatives = false) const;
  Expr parse_expr(const std::string& text, int line = 1) const;

  Expr residual() const { return lhs - rhs; }
  Expr on_shell(const Expr& e) const;

  // Atoms of the arbitrary elements that the unknowns do not depend on.
  std::vector<Expr> arbitrary_atoms(const Expr& e) const;
  bool is_unknown(const Expr& atom) const;

  void validate() const;
  // Substitute a concrete form for an arbitrary function, e.g. E -> phi(u).
  ProblemSpec specialize(const std::string& function, const Expr& body, const std::vector<FunctionDecl>& new_functions,
                         const std::vector<std::string>& new_parameters) const;
  // Widen the coefficients of the independents to depend on the dependent variable too.
  ProblemSpec unrestricted() const;
};

}  // namespace symmkit
