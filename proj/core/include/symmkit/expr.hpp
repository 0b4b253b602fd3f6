#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symmkit/rational.hpp"

namespace symmkit {

// Declaration order is also the canonical ordering rank.
enum class Kind : std::uint8_t { Const, Symbol, Power, Exp, Log, Func, Product, Sum };

struct Node;

class Expr {
 public:
  Expr();
  Expr(int v);  // NOLINT: integers are expressions
  Expr(long v);  // NOLINT
  Expr(const Rational& v);  // NOLINT

  static Expr symbol(const std::string& name);
  // Arbitrary or unknown function atom; index[i] counts derivatives w.r.t. args[i].
  static Expr func(const std::string& name, std::vector<std::string> args, std::vector<int> index = {});

  Kind kind() const;
  bool is_const() const { return kind() == Kind::Const; }
  bool is_symbol() const { return kind() == Kind::Symbol; }
  bool is_func() const { return kind() == Kind::Func; }
  bool is_atom() const { return is_symbol() || is_func(); }
  bool is_zero() const;
  bool is_one() const;
  bool is_canonical() const;

  // Const value, Power exponent, or Product coefficient.
  const Rational& value() const;
  const std::string& name() const;
  const std::vector<Expr>& operands() const;
  const std::vector<std::string>& args() const;
  const std::vector<int>& index() const;
  int derivative_order() const;

  std::size_t hash() const;
  std::string str() const;

  const Node* node() const { return node_.get(); }

 private:
  friend Expr make_node(Node&& n);
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::Const;
  bool canonical = true;
  std::size_t hash = 0;
  Rational value;
  std::string name;
  std::vector<Expr> ops;
  std::vector<std::string> args;
  std::vector<int> index;
};

int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

using ExprMap = std::map<Expr, Expr, ExprLess>;

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr add(std::span<const Expr> terms);
Expr mul(std::span<const Expr> factors);
Expr pow(const Expr& base, const Rational& exponent);
Expr exp(const Expr& arg);
Expr log(const Expr& arg);

// Structural constructors that do no simplification; canonicalize() normalizes them.
namespace raw {
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr power(const Expr& base, const Rational& exponent);
Expr exp(const Expr& arg);
Expr log(const Expr& arg);
}  // namespace raw

struct Assumptions {
  // names of symbols and (underived) function atoms taken to be strictly positive
  std::set<std::string> positive;
  bool empty() const { return positive.empty(); }
};

Expr canonicalize(const Expr& e, const Assumptions& assume = {});

Expr differentiate(const Expr& e, const std::string& var);
// Derivative treating `atom` (symbol or function atom) as an independent variable.
Expr differentiate(const Expr& e, const Expr& atom);

Expr substitute(const Expr& e, const Expr& target, const Expr& replacement, const Assumptions& assume = {});
Expr substitute_all(const Expr& e, const std::vector<std::pair<Expr, Expr>>& rules, const Assumptions& assume = {});
// Replace every occurrence of the function `name` (and its derivatives) by `body`,
// whose free variables are `params` in the function's argument order.
Expr replace_function(const Expr& e, const std::string& name, const Expr& body,
                      const std::vector<std::string>& params);
// Rename a symbol, including inside function-atom argument lists.
Expr rename_symbol(const Expr& e, const std::string& from, const std::string& to);

bool depends_on(const Expr& e, const std::string& symbol);
bool depends_on(const Expr& e, const Expr& atom);
bool contains_function(const Expr& e, const std::string& name);
std::set<Expr, ExprLess> atoms(const Expr& e);
std::set<std::string> free_symbols(const Expr& e);

std::vector<Expr> terms(const Expr& e);
std::pair<Rational, Expr> split_coefficient(const Expr& term);
std::pair<Rational, Expr> split_coefficient_nonconst(const Expr& term);

class NonPolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Group terms by monomials (rational powers) in `atoms`; cofactors are free of them.
ExprMap collect(const Expr& e, std::span<const Expr> atoms);

using Valuation = std::function<std::optional<Rational>(const Expr& atom)>;
std::optional<Rational> evaluate(const Expr& e, const Valuation& value_of);

std::string to_string(const Expr& e);

}  // namespace symmkit

template <>
struct std::hash<symmkit::Expr> {
  std::size_t operator()(const symmkit::Expr& e) const { return e.hash(); }
};
