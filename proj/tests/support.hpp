#pragma once

#include <memory>
#include <ostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symmkit/expr.hpp"
#include "symmkit/jet.hpp"

#ifndef SYMMKIT_DATA_DIR
#define SYMMKIT_DATA_DIR "data"
#endif

namespace testsupport {

inline std::string data(const std::string& name) { return std::string(SYMMKIT_DATA_DIR) + "/" + name; }

using symmkit::Expr;
using symmkit::Rational;

// A random expression kept twice: as the engine's Expr and as a plain tree that
// the tests evaluate on their own, without going through the canonicalizer.
struct Tree {
  enum class Op { Const, Var, Add, Mul, Pow, Exp } op = Op::Const;
  Rational value;
  int var = 0;
  long exponent = 1;
  std::vector<std::shared_ptr<Tree>> kids;
};

inline const char* var_name(int i) {
  static const char* names[] = {"x", "y", "z"};
  return names[i];
}

class RandomExpr {
 public:
  explicit RandomExpr(std::uint64_t seed, bool with_exp = false) : rng_(seed), with_exp_(with_exp) {}

  std::shared_ptr<Tree> tree(int depth) {
    auto t = std::make_shared<Tree>();
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : (with_exp_ ? 5 : 4));
    switch (pick(rng_)) {
      case 0: {
        std::uniform_int_distribution<long> n(-6, 6), d(1, 4);
        t->op = Tree::Op::Const;
        t->value = Rational(n(rng_), d(rng_));
        t->value.canonicalize();
        break;
      }
      case 1:
        t->op = Tree::Op::Var;
        t->var = std::uniform_int_distribution<int>(0, 2)(rng_);
        break;
      case 2:
        t->op = Tree::Op::Add;
        t->kids = {tree(depth - 1), tree(depth - 1)};
        break;
      case 3:
        t->op = Tree::Op::Mul;
        t->kids = {tree(depth - 1), tree(depth - 1)};
        break;
      case 4:
        t->op = Tree::Op::Pow;
        t->exponent = std::uniform_int_distribution<long>(-1, 3)(rng_);
        t->kids = {tree(depth - 1)};
        if (t->exponent <= 0 && build(*t->kids[0]).is_zero()) t->exponent = 2;
        break;
      default:
        t->op = Tree::Op::Exp;
        t->kids = {tree(depth - 1)};
        break;
    }
    return t;
  }

  static Expr build(const Tree& t) {
    switch (t.op) {
      case Tree::Op::Const: return Expr(t.value);
      case Tree::Op::Var: return Expr::symbol(var_name(t.var));
      case Tree::Op::Add: return build(*t.kids[0]) + build(*t.kids[1]);
      case Tree::Op::Mul: return build(*t.kids[0]) * build(*t.kids[1]);
      case Tree::Op::Pow: return symmkit::pow(build(*t.kids[0]), Rational(t.exponent));
      case Tree::Op::Exp: return symmkit::exp(build(*t.kids[0]));
    }
    return Expr(0);
  }

  // plain rational arithmetic; nullopt on division by zero or exp
  static std::optional<Rational> eval(const Tree& t, const Rational* point) {
    switch (t.op) {
      case Tree::Op::Const: return t.value;
      case Tree::Op::Var: return point[t.var];
      case Tree::Op::Add: {
        auto a = eval(*t.kids[0], point), b = eval(*t.kids[1], point);
        if (!a || !b) return std::nullopt;
        return Rational(*a + *b);
      }
      case Tree::Op::Mul: {
        auto a = eval(*t.kids[0], point), b = eval(*t.kids[1], point);
        if (!a || !b) return std::nullopt;
        return Rational(*a * *b);
      }
      case Tree::Op::Pow: {
        auto a = eval(*t.kids[0], point);
        if (!a) return std::nullopt;
        if (t.exponent < 0 && *a == 0) return std::nullopt;
        Rational r = 1;
        for (long i = 0; i < (t.exponent < 0 ? -t.exponent : t.exponent); ++i) r *= *a;
        if (t.exponent < 0) r = 1 / r;
        return r;
      }
      case Tree::Op::Exp: return std::nullopt;
    }
    return std::nullopt;
  }

  Rational rational() {
    std::uniform_int_distribution<long> n(-25, 25), d(1, 9);
    Rational q(n(rng_), d(rng_));
    q.canonicalize();
    return q;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool with_exp_;
};

inline symmkit::Valuation at_point(const Rational* point) {
  return [point](const Expr& a) -> std::optional<Rational> {
    if (!a.is_symbol()) return std::nullopt;
    for (int i = 0; i < 3; ++i)
      if (a.name() == var_name(i)) return point[i];
    return std::nullopt;
  };
}

}  // namespace testsupport

namespace symmkit {
inline void PrintTo(const Expr& e, std::ostream* os) { *os << e.str(); }
inline void PrintTo(const VectorField& v, std::ostream* os) { *os << v.str(); }
}  // namespace symmkit
