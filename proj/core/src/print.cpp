#include "symmkit/expr.hpp"

namespace symmkit {

namespace {

std::string print_expr(const Expr& e);

std::string func_name(const Expr& f) {
  std::string s = f.name();
  if (f.derivative_order() == 0) return s;
  s += '_';
  for (std::size_t i = 0; i < f.args().size(); ++i)
    for (int k = 0; k < f.index()[i]; ++k) s += f.args()[i];
  return s;
}

std::string exponent_text(const Rational& q) {
  if (is_integer(q) && q >= 0) return to_string(q);
  return "(" + to_string(q) + ")";
}

std::string factor_text(const Expr& f) {
  switch (f.kind()) {
    case Kind::Symbol: return f.name();
    case Kind::Func: return func_name(f);
    case Kind::Const:
      if (f.value() >= 0 && is_integer(f.value())) return to_string(f.value());
      return "(" + to_string(f.value()) + ")";
    case Kind::Power: return factor_text(f.operands()[0]) + "^" + exponent_text(f.value());
    case Kind::Exp: return "exp(" + print_expr(f.operands()[0]) + ")";
    case Kind::Log: return "log(" + print_expr(f.operands()[0]) + ")";
    case Kind::Product:
    case Kind::Sum: return "(" + print_expr(f) + ")";
  }
  return "?";
}

// Prints |term| and reports whether the term carries a negative sign.
std::string term_text(const Expr& t, bool& negative) {
  negative = false;
  if (t.is_const()) {
    negative = t.value() < 0;
    return to_string(negative ? Rational(-t.value()) : t.value());
  }
  if (t.kind() != Kind::Product) return factor_text(t);
  Rational c = t.value();
  if (c < 0) {
    negative = true;
    c = -c;
  }
  std::string s;
  if (c != 1) s = to_string(c);
  for (const auto& f : t.operands()) {
    if (!s.empty()) s += '*';
    s += factor_text(f);
  }
  if (s.empty()) s = "1";
  return s;
}

std::string print_expr(const Expr& e) {
  if (e.kind() != Kind::Sum) {
    bool neg = false;
    std::string s = term_text(e, neg);
    return neg ? "-" + s : s;
  }
  std::string out;
  bool first = true;
  for (const auto& t : e.operands()) {
    bool neg = false;
    std::string s = term_text(t, neg);
    if (first) out = neg ? "-" + s : s;
    else out += (neg ? " - " : " + ") + s;
    first = false;
  }
  if (first) return "0";
  return out;
}

}  // namespace

std::string to_string(const Expr& e) { return print_expr(e); }

}  // namespace symmkit
