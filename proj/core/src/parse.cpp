#include "symmkit/parse.hpp"

#include <algorithm>
#include <cctype>

namespace symmkit {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

std::string jet_symbol_name(const std::string& var, const std::vector<std::string>& base, const std::vector<int>& counts) {
  std::string s;
  for (std::size_t i = 0; i < base.size(); ++i)
    for (int k = 0; k < counts[i]; ++k) s += base[i];
  return s.empty() ? var : var + "_" + s;
}

const JetVariable* Scope::jet_variable(const std::string& name) const {
  for (const auto& jv : jet_variables)
    if (jv.name == name) return &jv;
  return nullptr;
}

bool Scope::is_coordinate(const std::string& name) const {
  return std::find(coordinates.begin(), coordinates.end(), name) != coordinates.end();
}

namespace {

enum class Tok { Number, Ident, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  Lexer(std::string_view src, int first_line) : src_(src), line_(first_line) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Number;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance(t.text);
      if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        throw ParseError(line_, col_, std::string("unexpected character '") + src_[pos_] + "' after number");
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      t.kind = Tok::Ident;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) advance(t.text);
      if (pos_ < src_.size() && src_[pos_] == '_') {
        advance(t.text);
        std::size_t start = t.text.size();
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) advance(t.text);
        if (t.text.size() == start) throw ParseError(line_, col_, "expected derivative letters after '_'");
      }
      return t;
    }
    if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      t.kind = Tok::Op;
      advance(t.text);
      return t;
    }
    throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance(std::string& into) {
    into += src_[pos_++];
    ++col_;
  }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, const Scope* scope, int first_line) : lex_(src, first_line), scope_(scope) { tok_ = lex_.next(); }

  Expr parse_all() {
    if (tok_.kind == Tok::End) throw ParseError(tok_.line, tok_.col, "empty expression");
    Expr e = expr();
    if (tok_.kind != Tok::End) throw ParseError(tok_.line, tok_.col, "unexpected '" + tok_.text + "'");
    return e;
  }

 private:
  bool is_op(const char* s) const { return tok_.kind == Tok::Op && tok_.text == s; }
  void shift() { tok_ = lex_.next(); }
  void expect(const char* s) {
    if (!is_op(s)) {
      std::string got = tok_.kind == Tok::End ? "end of input" : "'" + tok_.text + "'";
      throw ParseError(tok_.line, tok_.col, std::string("expected '") + s + "' but found " + got);
    }
    shift();
  }

  Expr expr() {
    std::vector<Expr> ts{term()};
    while (is_op("+") || is_op("-")) {
      bool minus = is_op("-");
      shift();
      Expr t = term();
      ts.push_back(minus ? raw::product({Expr(-1), t}) : t);
    }
    return ts.size() == 1 ? ts[0] : raw::sum(ts);
  }

  Expr term() {
    std::vector<Expr> fs{unary()};
    while (is_op("*") || is_op("/")) {
      bool div = is_op("/");
      Token at = tok_;
      shift();
      Expr f = unary();
      if (div) {
        Expr c = canonicalize(f);
        if (c.is_zero()) throw ParseError(at.line, at.col, "division by zero");
        fs.push_back(raw::power(f, Rational(-1)));
      } else {
        fs.push_back(f);
      }
    }
    return fs.size() == 1 ? fs[0] : raw::product(fs);
  }

  Expr unary() {
    if (is_op("-")) {
      shift();
      return raw::product({Expr(-1), unary()});
    }
    if (is_op("+")) {
      shift();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!is_op("^")) return base;
    Token at = tok_;
    shift();
    Expr ex = canonicalize(unary());
    if (!ex.is_const()) throw ParseError(at.line, at.col, "exponent must be a rational constant");
    return raw::power(base, ex.value());
  }

  Expr primary() {
    if (tok_.kind == Tok::Number) {
      Expr e(Rational(mpz_class(tok_.text)));
      shift();
      return e;
    }
    if (is_op("(")) {
      shift();
      Expr e = expr();
      expect(")");
      return e;
    }
    if (tok_.kind == Tok::Ident) {
      Token id = tok_;
      shift();
      if (is_op("(")) return call(id);
      return resolve(id);
    }
    if (tok_.kind == Tok::End) throw ParseError(tok_.line, tok_.col, "unexpected end of input");
    throw ParseError(tok_.line, tok_.col, "unexpected '" + tok_.text + "'");
  }

  Expr call(const Token& id) {
    const std::string& name = id.text;
    if (name == "exp" || name == "log") {
      shift();
      Expr a = expr();
      expect(")");
      return name == "exp" ? raw::exp(a) : raw::log(a);
    }
    if (name.size() > 1 && name[0] == 'D' && scope_ && scope_->total_derivative) {
      std::string var = name.substr(1);
      if (scope_->is_coordinate(var)) {
        shift();
        Expr a = expr();
        expect(")");
        try {
          return scope_->total_derivative(canonicalize(a), var);
        } catch (const std::exception& ex) {
          throw ParseError(id.line, id.col, ex.what());
        }
      }
    }
    if (name.find('_') != std::string::npos) throw ParseError(id.line, id.col, "derivative atoms cannot take an argument list");
    shift();
    std::vector<std::string> args;
    while (true) {
      if (tok_.kind != Tok::Ident) throw ParseError(tok_.line, tok_.col, "function arguments must be variable names");
      args.push_back(tok_.text);
      shift();
      if (is_op(",")) {
        shift();
        continue;
      }
      expect(")");
      break;
    }
    if (scope_) {
      auto it = scope_->functions.find(name);
      if (it != scope_->functions.end() && it->second != args)
        throw ParseError(id.line, id.col, "function " + name + " redeclared with different arguments");
      if (scope_->strict)
        for (const auto& a : args)
          if (!scope_->is_coordinate(a)) throw UndeclaredSymbolError(id.line, id.col, "undeclared argument '" + a + "' of " + name);
    }
    return Expr::func(name, args);
  }

  Expr resolve(const Token& id) {
    std::string base = id.text;
    std::string idx;
    if (auto us = base.find('_'); us != std::string::npos) {
      idx = base.substr(us + 1);
      base = base.substr(0, us);
    }
    if (scope_) {
      if (const JetVariable* jv = scope_->jet_variable(base)) {
        std::vector<int> counts(jv->base.size(), 0);
        int order = 0;
        for (char c : idx) {
          std::string v(1, c);
          auto it = std::find(jv->base.begin(), jv->base.end(), v);
          if (it == jv->base.end()) throw ParseError(id.line, id.col, "'" + v + "' is not a variable of " + base);
          if (jv->frozen.count(v)) return Expr(0);
          ++counts[static_cast<std::size_t>(it - jv->base.begin())];
          ++order;
        }
        if (order > jv->max_order) throw ParseError(id.line, id.col, "jet order of " + id.text + " exceeds the declared order");
        return Expr::symbol(jet_symbol_name(base, jv->base, counts));
      }
      auto fit = scope_->functions.find(base);
      if (fit != scope_->functions.end()) {
        const auto& args = fit->second;
        std::vector<int> counts(args.size(), 0);
        for (char c : idx) {
          std::string v(1, c);
          auto it = std::find(args.begin(), args.end(), v);
          if (it == args.end()) {
            if (scope_->lenient_derivatives) return Expr(0);
            throw ParseError(id.line, id.col, base + " does not depend on '" + v + "'");
          }
          ++counts[static_cast<std::size_t>(it - args.begin())];
        }
        return Expr::func(base, args, counts);
      }
      if (scope_->is_coordinate(base) || scope_->parameters.count(base)) {
        if (!idx.empty()) throw ParseError(id.line, id.col, "'" + base + "' cannot carry a derivative index");
        return Expr::symbol(base);
      }
      if (scope_->strict) throw UndeclaredSymbolError(id.line, id.col, "undeclared symbol '" + id.text + "'");
    }
    if (idx.empty()) return Expr::symbol(base);
    std::vector<std::string> args;
    std::vector<int> counts;
    for (char c : idx) {
      std::string v(1, c);
      auto it = std::find(args.begin(), args.end(), v);
      if (it == args.end()) {
        args.push_back(v);
        counts.push_back(1);
      } else {
        ++counts[static_cast<std::size_t>(it - args.begin())];
      }
    }
    return Expr::func(base, args, counts);
  }

  Lexer lex_;
  const Scope* scope_;
  Token tok_;
};

}  // namespace

Expr parse(std::string_view text, const Scope* scope, int first_line) {
  Parser p(text, scope, first_line);
  Expr e = p.parse_all();
  try {
    return canonicalize(e);
  } catch (const std::domain_error& ex) {
    throw ParseError(first_line, 1, ex.what());
  }
}

}  // namespace symmkit
