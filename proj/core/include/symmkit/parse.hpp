#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symmkit/expr.hpp"

namespace symmkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

class UndeclaredSymbolError : public ParseError {
 public:
  using ParseError::ParseError;
};

// A variable whose jet coordinates are plain symbols (u, and E/h in equivalence mode).
struct JetVariable {
  std::string name;
  std::vector<std::string> base;    // variables it may be differentiated by
  std::set<std::string> frozen;     // derivatives along these vanish identically
  int max_order = 2;
};

std::string jet_symbol_name(const std::string& var, const std::vector<std::string>& base, const std::vector<int>& counts);

// Symbol table used when parsing against a declared problem.
struct Scope {
  std::vector<std::string> coordinates;                          // plain symbols
  std::vector<JetVariable> jet_variables;
  std::map<std::string, std::vector<std::string>> functions;     // function atoms and their arguments
  std::set<std::string> parameters;
  bool strict = false;
  // derivative of a function w.r.t. a variable outside its argument list parses as 0
  bool lenient_derivatives = false;
  // expansion hook for D<var>(...) total derivatives
  std::function<Expr(const Expr&, const std::string&)> total_derivative;

  const JetVariable* jet_variable(const std::string& name) const;
  bool is_coordinate(const std::string& name) const;
};

Expr parse(std::string_view text, const Scope* scope = nullptr, int first_line = 1);

}  // namespace symmkit
