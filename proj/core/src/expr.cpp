#include "symmkit/expr.hpp"

#include <algorithm>
#include <unordered_map>

namespace symmkit {

namespace {

thread_local const Assumptions* g_assume = nullptr;

struct AssumeScope {
  const Assumptions* saved;
  explicit AssumeScope(const Assumptions* a) : saved(g_assume) { g_assume = (a && !a->empty()) ? a : nullptr; }
  ~AssumeScope() { g_assume = saved; }
};

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

int sign_of(int c) { return c < 0 ? -1 : (c > 0 ? 1 : 0); }

}  // namespace

Expr make_node(Node&& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911u + 7;
  if (n.kind == Kind::Const || n.kind == Kind::Power || n.kind == Kind::Product) h = mix(h, hash_value(n.value));
  if (!n.name.empty()) h = mix(h, std::hash<std::string>{}(n.name));
  for (const auto& op : n.ops) h = mix(h, op.hash());
  for (const auto& a : n.args) h = mix(h, std::hash<std::string>{}(a));
  for (int i : n.index) h = mix(h, static_cast<std::size_t>(i) + 17);
  n.hash = h;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

namespace {

Expr make_const(const Rational& v) {
  Node n;
  n.kind = Kind::Const;
  n.value = v;
  return make_node(std::move(n));
}

const Expr& zero_expr() {
  static const Expr z = make_const(Rational(0));
  return z;
}

const Expr& one_expr() {
  static const Expr o = make_const(Rational(1));
  return o;
}

Expr formal_power(const Expr& base, const Rational& q) {
  Node n;
  n.kind = Kind::Power;
  n.value = q;
  n.ops = {base};
  return make_node(std::move(n));
}

Expr exp_node(const Expr& arg) {
  Node n;
  n.kind = Kind::Exp;
  n.ops = {arg};
  return make_node(std::move(n));
}

Expr log_node(const Expr& arg) {
  Node n;
  n.kind = Kind::Log;
  n.ops = {arg};
  return make_node(std::move(n));
}

// factors must already be sorted and canonical
Expr product_node(const Rational& coeff, std::vector<Expr> factors) {
  if (coeff == 0) return zero_expr();
  if (factors.empty()) return make_const(coeff);
  if (coeff == 1 && factors.size() == 1) return factors[0];
  Node n;
  n.kind = Kind::Product;
  n.value = coeff;
  n.ops = std::move(factors);
  return make_node(std::move(n));
}

Expr scale_monomial(const Expr& mono, const Rational& c) {
  if (c == 1) return mono;
  if (mono.kind() == Kind::Product) return product_node(c, mono.operands());
  if (mono.is_one()) return make_const(c);
  return product_node(c, {mono});
}

bool positive(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const: return e.value() > 0;
    case Kind::Exp: return true;
    case Kind::Symbol: return g_assume && g_assume->positive.count(e.name());
    case Kind::Func: return g_assume && e.derivative_order() == 0 && g_assume->positive.count(e.name());
    case Kind::Power: return positive(e.operands()[0]);
    case Kind::Product:
      if (e.value() < 0) return false;
      return std::all_of(e.operands().begin(), e.operands().end(), [](const Expr& f) { return positive(f); });
    case Kind::Sum:
      return std::all_of(e.operands().begin(), e.operands().end(), [](const Expr& t) { return positive(t); });
    case Kind::Log: return false;
  }
  return false;
}

Expr const_power(const Rational& v, const Rational& q) {
  if (v == 0) {
    if (q > 0) return zero_expr();
    throw std::domain_error("division by zero");
  }
  if (v == 1) return one_expr();
  if (is_integer(q)) return make_const(power(v, q.get_num().get_si()));
  unsigned long d = q.get_den().get_ui();
  if (auto root = exact_root(v, d)) return make_const(power(*root, q.get_num().get_si()));
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  Rational frac = q - Rational(k);
  Expr fp = formal_power(make_const(v), frac);
  if (k == 0) return fp;
  return product_node(power(v, k.get_si()), {fp});
}

// Rational content of a sum: sum = g * primitive. With `signed_content` the
// leading term of the primitive part has positive coefficient.
std::pair<Rational, Expr> primitive_part(const Expr& s, bool signed_content) {
  mpz_class g_num(0), l_den(1);
  for (const auto& t : s.operands()) {
    Rational c = split_coefficient(t).first;
    mpz_gcd(g_num.get_mpz_t(), g_num.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(l_den.get_mpz_t(), l_den.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rational g(g_num, l_den);
  g.canonicalize();
  if (signed_content && split_coefficient(s.operands()[0]).first < 0) g = -g;
  if (g == 1 || g == 0) return {Rational(1), s};
  std::vector<Expr> ts;
  ts.reserve(s.operands().size());
  Rational inv = 1 / g;
  for (const auto& t : s.operands()) {
    auto [c, m] = split_coefficient(t);
    ts.push_back(scale_monomial(m, c * inv));
  }
  std::sort(ts.begin(), ts.end(), ExprLess{});
  Node n;
  n.kind = Kind::Sum;
  n.ops = std::move(ts);
  return {g, make_node(std::move(n))};
}

struct MulAcc {
  Rational coeff{1};
  std::vector<std::pair<Expr, Rational>> powers;
  std::vector<Expr> exp_args;
  bool zero = false;

  void add_power(const Expr& base, const Rational& q) {
    if (base.kind() == Kind::Sum) {
      auto [g, prim] = primitive_part(base, is_integer(q));
      if (g != 1) {
        if (is_integer(q)) {
          coeff *= power(g, q.get_num().get_si());
          add_power_raw(prim, q);
        } else {
          feed(const_power(g, q));
          add_power_raw(prim, q);
        }
        return;
      }
    }
    add_power_raw(base, q);
  }

  void add_power_raw(const Expr& base, const Rational& q) {
    for (auto& [b, e] : powers) {
      if (b == base) {
        e += q;
        return;
      }
    }
    powers.emplace_back(base, q);
  }

  void feed(const Expr& f) {
    switch (f.kind()) {
      case Kind::Const:
        coeff *= f.value();
        if (f.value() == 0) zero = true;
        break;
      case Kind::Product:
        coeff *= f.value();
        for (const auto& g : f.operands()) feed(g);
        break;
      case Kind::Power:
        add_power(f.operands()[0], f.value());
        break;
      case Kind::Exp:
        exp_args.push_back(f.operands()[0]);
        break;
      default:
        add_power(f, Rational(1));
        break;
    }
  }

  static bool pending_expansion(const Expr& b, const Rational& q) {
    return b.kind() == Kind::Sum && is_integer(q) && q > 0;
  }

  void settle_powers() {
    bool changed = true;
    while (changed && !zero) {
      changed = false;
      for (std::size_t i = 0; i < powers.size(); ++i) {
        const Expr b = powers[i].first;
        const Rational q = powers[i].second;
        if (q == 0) {
          powers.erase(powers.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
        if (pending_expansion(b, q)) continue;
        if (b.is_atom() || b.kind() == Kind::Log) continue;
        Expr p = pow(b, q);
        if (p.kind() == Kind::Power && p.operands()[0] == b && p.value() == q) continue;
        powers.erase(powers.begin() + static_cast<long>(i));
        feed(p);
        changed = true;
        break;
      }
    }
  }

  Expr finish() {
    std::vector<Expr> exp_factors;
    for (;;) {
      settle_powers();
      if (zero) return zero_expr();
      if (exp_args.empty()) break;
      for (const auto& ef : exp_factors) exp_args.push_back(ef.operands()[0]);
      exp_factors.clear();
      Expr arg = add(exp_args);
      exp_args.clear();
      Expr e = exp(arg);
      if (e.kind() == Kind::Exp) {
        exp_factors.push_back(e);
      } else if (e.kind() == Kind::Product) {
        coeff *= e.value();
        for (const auto& f : e.operands()) {
          if (f.kind() == Kind::Exp) exp_factors.push_back(f);
          else feed(f);
        }
      } else {
        feed(e);
        // exp(...) of pure logs produced only powers; loop to settle them
      }
    }
    std::vector<Expr> factors;
    std::vector<std::pair<Expr, long>> sums;
    for (const auto& [b, q] : powers) {
      if (q == 0) continue;
      if (pending_expansion(b, q)) {
        sums.emplace_back(b, q.get_num().get_si());
        continue;
      }
      factors.push_back(q == 1 ? b : formal_power(b, q));
    }
    for (const auto& ef : exp_factors) factors.push_back(ef);
    std::sort(factors.begin(), factors.end(), ExprLess{});
    Expr mono = product_node(coeff, std::move(factors));
    if (sums.empty()) return mono;
    std::vector<Expr> cur{mono};
    for (const auto& [s, n] : sums) {
      for (long rep = 0; rep < n; ++rep) {
        std::vector<Expr> next;
        next.reserve(cur.size() * s.operands().size());
        for (const auto& c : cur)
          for (const auto& t : s.operands()) {
            const Expr pair[2] = {c, t};
            next.push_back(mul(pair));
          }
        cur = terms(add(next));
      }
    }
    return add(cur);
  }
};

Expr ensure_canonical(const Expr& e) { return e.is_canonical() ? e : canonicalize(e); }

Expr canon_rec(const Expr& e) {
  if (e.is_canonical() && g_assume == nullptr) return e;
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Symbol:
    case Kind::Func:
      return e;
    case Kind::Sum: {
      std::vector<Expr> ts;
      ts.reserve(e.operands().size());
      for (const auto& t : e.operands()) ts.push_back(canon_rec(t));
      return add(ts);
    }
    case Kind::Product: {
      std::vector<Expr> fs;
      fs.reserve(e.operands().size() + 1);
      fs.push_back(make_const(e.value()));
      for (const auto& f : e.operands()) fs.push_back(canon_rec(f));
      return mul(fs);
    }
    case Kind::Power:
      return pow(canon_rec(e.operands()[0]), e.value());
    case Kind::Exp:
      return exp(canon_rec(e.operands()[0]));
    case Kind::Log:
      return log(canon_rec(e.operands()[0]));
  }
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------

Expr::Expr() : node_(zero_expr().node_) {}
Expr::Expr(int v) : Expr(Rational(v)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}
Expr::Expr(const Rational& v) {
  if (v == 0) node_ = zero_expr().node_;
  else if (v == 1) node_ = one_expr().node_;
  else node_ = make_const(v).node_;
}

Expr Expr::symbol(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty symbol name");
  Node n;
  n.kind = Kind::Symbol;
  n.name = name;
  return make_node(std::move(n));
}

Expr Expr::func(const std::string& name, std::vector<std::string> args, std::vector<int> index) {
  if (name.empty()) throw std::invalid_argument("empty function name");
  if (index.empty()) index.assign(args.size(), 0);
  if (index.size() != args.size()) throw std::invalid_argument("derivative index does not match arguments of " + name);
  for (int i : index)
    if (i < 0) throw std::invalid_argument("negative derivative index");
  Node n;
  n.kind = Kind::Func;
  n.name = name;
  n.args = std::move(args);
  n.index = std::move(index);
  return make_node(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Const && node_->value == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Const && node_->value == 1; }
bool Expr::is_canonical() const { return node_->canonical; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::operands() const { return node_->ops; }
const std::vector<std::string>& Expr::args() const { return node_->args; }
const std::vector<int>& Expr::index() const { return node_->index; }
int Expr::derivative_order() const {
  int s = 0;
  for (int i : node_->index) s += i;
  return s;
}
std::size_t Expr::hash() const { return node_->hash; }
std::string Expr::str() const { return to_string(*this); }

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Const:
      return cmp(a.value(), b.value()) < 0 ? -1 : (a.value() == b.value() ? 0 : 1);
    case Kind::Symbol:
      return sign_of(a.name().compare(b.name()));
    case Kind::Power: {
      int c = compare(a.operands()[0], b.operands()[0]);
      if (c) return c;
      return a.value() < b.value() ? -1 : (a.value() == b.value() ? 0 : 1);
    }
    case Kind::Exp:
    case Kind::Log:
      return compare(a.operands()[0], b.operands()[0]);
    case Kind::Func: {
      int c = sign_of(a.name().compare(b.name()));
      if (c) return c;
      int oa = a.derivative_order(), ob = b.derivative_order();
      if (oa != ob) return oa < ob ? -1 : 1;
      // more derivatives on earlier arguments sort later
      if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
      if (a.args() != b.args()) return a.args() < b.args() ? -1 : 1;
      return 0;
    }
    case Kind::Product:
    case Kind::Sum: {
      const auto& x = a.operands();
      const auto& y = b.operands();
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(x[i], y[i]);
        if (c) return c;
      }
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      if (a.kind() == Kind::Product && a.value() != b.value()) return a.value() < b.value() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------

Expr add(std::span<const Expr> input) {
  Rational constant(0);
  std::vector<std::pair<Expr, Rational>> acc;
  std::unordered_map<Expr, std::size_t, ExprHash> pos;
  auto push = [&](const Expr& t) {
    if (t.is_const()) {
      constant += t.value();
      return;
    }
    auto [c, m] = split_coefficient(t);
    auto it = pos.find(m);
    if (it == pos.end()) {
      pos.emplace(m, acc.size());
      acc.emplace_back(m, c);
    } else {
      acc[it->second].second += c;
    }
  };
  for (const auto& raw_t : input) {
    Expr t = ensure_canonical(raw_t);
    if (t.kind() == Kind::Sum) {
      for (const auto& s : t.operands()) push(s);
    } else {
      push(t);
    }
  }
  std::vector<Expr> out;
  out.reserve(acc.size() + 1);
  if (constant != 0) out.push_back(make_const(constant));
  for (const auto& [m, c] : acc)
    if (c != 0) out.push_back(scale_monomial(m, c));
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out[0];
  std::sort(out.begin(), out.end(), ExprLess{});
  Node n;
  n.kind = Kind::Sum;
  n.ops = std::move(out);
  return make_node(std::move(n));
}

Expr mul(std::span<const Expr> input) {
  MulAcc acc;
  for (const auto& raw_f : input) {
    acc.feed(ensure_canonical(raw_f));
    if (acc.zero) return zero_expr();
  }
  return acc.finish();
}

Expr pow(const Expr& raw_b, const Rational& q) {
  Expr b = ensure_canonical(raw_b);
  if (q == 0) {
    if (b.is_zero()) throw std::domain_error("0^0 is undefined");
    return one_expr();
  }
  if (q == 1) return b;
  switch (b.kind()) {
    case Kind::Const:
      return const_power(b.value(), q);
    case Kind::Power: {
      const Expr& c = b.operands()[0];
      if (is_integer(q) || positive(c)) return pow(c, b.value() * q);
      return formal_power(b, q);
    }
    case Kind::Exp: {
      const Expr f[2] = {Expr(q), b.operands()[0]};
      return exp(mul(f));
    }
    case Kind::Product: {
      std::vector<Expr> out;
      if (is_integer(q)) {
        long n = q.get_num().get_si();
        out.push_back(make_const(power(b.value(), n)));
        for (const auto& f : b.operands()) out.push_back(pow(f, q));
        return mul(out);
      }
      Rational c = b.value();
      Rational sign = 1;
      if (c < 0) {
        sign = -1;
        c = -c;
      }
      if (c != 1) out.push_back(const_power(c, q));
      std::vector<Expr> keep;
      for (const auto& f : b.operands()) {
        if (positive(f)) out.push_back(pow(f, q));
        else keep.push_back(f);
      }
      if (c == 1 && keep.size() == b.operands().size()) return formal_power(b, q);
      if (!keep.empty()) {
        Expr base = product_node(sign, keep);
        if (base.kind() == Kind::Product) out.push_back(formal_power(base, q));
        else out.push_back(pow(base, q));
      } else if (sign < 0) {
        out.push_back(const_power(Rational(-1), q));
      }
      return mul(out);
    }
    case Kind::Sum: {
      if (is_integer(q) && q > 0) {
        long n = q.get_num().get_si();
        Expr r = b;
        for (long i = 1; i < n; ++i) {
          const Expr f[2] = {r, b};
          r = mul(f);
        }
        return r;
      }
      auto [g, prim] = primitive_part(b, is_integer(q));
      if (g != 1) {
        const Expr f[2] = {const_power(g, q), pow(prim, q)};
        return mul(f);
      }
      return formal_power(b, q);
    }
    default:
      return formal_power(b, q);
  }
}

Expr exp(const Expr& raw_arg) {
  Expr arg = ensure_canonical(raw_arg);
  if (arg.is_zero()) return one_expr();
  if (arg.kind() == Kind::Log) return arg.operands()[0];
  std::vector<Expr> rest, pulled;
  for (const auto& t : terms(arg)) {
    auto [c, m] = split_coefficient(t);
    if (m.kind() == Kind::Log) pulled.push_back(pow(m.operands()[0], c));
    else rest.push_back(t);
  }
  if (pulled.empty()) return exp_node(arg);
  Expr r = add(rest);
  if (!r.is_zero()) pulled.push_back(exp_node(r));
  return mul(pulled);
}

Expr log(const Expr& raw_arg) {
  Expr arg = ensure_canonical(raw_arg);
  if (arg.is_one()) return zero_expr();
  if (arg.is_zero()) throw std::domain_error("log(0) is undefined");
  if (arg.kind() == Kind::Exp) return arg.operands()[0];
  return log_node(arg);
}

Expr operator+(const Expr& a, const Expr& b) {
  const Expr t[2] = {a, b};
  return add(t);
}
Expr operator-(const Expr& a) {
  const Expr f[2] = {Expr(-1), a};
  return mul(f);
}
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
Expr operator*(const Expr& a, const Expr& b) {
  const Expr f[2] = {a, b};
  return mul(f);
}
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  return a * pow(b, Rational(-1));
}
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

namespace raw {
Expr sum(std::vector<Expr> ts) {
  Node n;
  n.kind = Kind::Sum;
  n.canonical = false;
  n.ops = std::move(ts);
  return make_node(std::move(n));
}
Expr product(std::vector<Expr> fs) {
  Node n;
  n.kind = Kind::Product;
  n.canonical = false;
  n.value = 1;
  n.ops = std::move(fs);
  return make_node(std::move(n));
}
Expr power(const Expr& base, const Rational& q) {
  Node n;
  n.kind = Kind::Power;
  n.canonical = false;
  n.value = q;
  n.ops = {base};
  return make_node(std::move(n));
}
Expr exp(const Expr& arg) {
  Node n;
  n.kind = Kind::Exp;
  n.canonical = false;
  n.ops = {arg};
  return make_node(std::move(n));
}
Expr log(const Expr& arg) {
  Node n;
  n.kind = Kind::Log;
  n.canonical = false;
  n.ops = {arg};
  return make_node(std::move(n));
}
}  // namespace raw

Expr canonicalize(const Expr& e, const Assumptions& assume) {
  AssumeScope scope(&assume);
  return canon_rec(e);
}

// ---------------------------------------------------------------------------

std::vector<Expr> terms(const Expr& e) {
  if (e.kind() == Kind::Sum) return e.operands();
  if (e.is_zero()) return {};
  return {e};
}

std::pair<Rational, Expr> split_coefficient(const Expr& t) {
  if (t.is_const()) return {t.value(), one_expr()};
  if (t.kind() == Kind::Product) {
    if (t.value() == 1) return {Rational(1), t};
    if (t.operands().size() == 1) return {t.value(), t.operands()[0]};
    return {t.value(), product_node(Rational(1), t.operands())};
  }
  return {Rational(1), t};
}

std::pair<Rational, Expr> split_coefficient_nonconst(const Expr& t) { return split_coefficient(t); }

namespace {

using Leaf = std::function<Expr(const Expr&)>;

Expr diff_rec(const Expr& e, const Leaf& leaf, std::unordered_map<const Node*, Expr>& memo) {
  switch (e.kind()) {
    case Kind::Const:
      return zero_expr();
    case Kind::Symbol:
    case Kind::Func:
      return leaf(e);
    default:
      break;
  }
  auto it = memo.find(e.node());
  if (it != memo.end()) return it->second;
  Expr r;
  switch (e.kind()) {
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const auto& t : e.operands()) {
        Expr d = diff_rec(t, leaf, memo);
        if (!d.is_zero()) ts.push_back(d);
      }
      r = add(ts);
      break;
    }
    case Kind::Product: {
      const auto& fs = e.operands();
      std::vector<Expr> ts;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Expr d = diff_rec(fs[i], leaf, memo);
        if (d.is_zero()) continue;
        std::vector<Expr> prod;
        prod.reserve(fs.size() + 1);
        prod.push_back(Expr(e.value()));
        for (std::size_t j = 0; j < fs.size(); ++j) prod.push_back(j == i ? d : fs[j]);
        ts.push_back(mul(prod));
      }
      r = add(ts);
      break;
    }
    case Kind::Power: {
      const Expr& b = e.operands()[0];
      Expr d = diff_rec(b, leaf, memo);
      if (d.is_zero()) {
        r = zero_expr();
      } else {
        const Expr f[3] = {Expr(e.value()), pow(b, e.value() - 1), d};
        r = mul(f);
      }
      break;
    }
    case Kind::Exp: {
      Expr d = diff_rec(e.operands()[0], leaf, memo);
      r = d.is_zero() ? zero_expr() : d * e;
      break;
    }
    case Kind::Log: {
      const Expr& a = e.operands()[0];
      Expr d = diff_rec(a, leaf, memo);
      r = d.is_zero() ? zero_expr() : d * pow(a, Rational(-1));
      break;
    }
    default:
      break;
  }
  memo.emplace(e.node(), r);
  return r;
}

}  // namespace

Expr differentiate(const Expr& raw_e, const std::string& var) {
  Expr e = ensure_canonical(raw_e);
  Leaf leaf = [&var](const Expr& a) -> Expr {
    if (a.is_symbol()) return a.name() == var ? one_expr() : zero_expr();
    std::vector<Expr> ts;
    const auto& args = a.args();
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] != var) continue;
      auto idx = a.index();
      ++idx[i];
      ts.push_back(Expr::func(a.name(), args, idx));
    }
    return add(ts);
  };
  std::unordered_map<const Node*, Expr> memo;
  return diff_rec(e, leaf, memo);
}

Expr differentiate(const Expr& e, const Expr& atom) {
  if (atom.is_symbol()) return differentiate(e, atom.name());
  if (!atom.is_func()) throw std::invalid_argument("differentiation variable must be a symbol or function atom");
  Leaf leaf = [&atom](const Expr& a) -> Expr { return a == atom ? one_expr() : zero_expr(); };
  std::unordered_map<const Node*, Expr> memo;
  return diff_rec(ensure_canonical(e), leaf, memo);
}

namespace {

using Rewriter = std::function<std::optional<Expr>(const Expr&)>;

Expr rebuild(const Expr& e, const Rewriter& rw, std::unordered_map<const Node*, Expr>& memo) {
  if (auto r = rw(e)) return *r;
  if (e.operands().empty()) return e;
  auto it = memo.find(e.node());
  if (it != memo.end()) return it->second;
  std::vector<Expr> ops;
  ops.reserve(e.operands().size());
  bool changed = false;
  for (const auto& op : e.operands()) {
    ops.push_back(rebuild(op, rw, memo));
    if (ops.back().node() != op.node()) changed = true;
  }
  Expr r;
  if (!changed) {
    r = e;
  } else {
    switch (e.kind()) {
      case Kind::Sum:
        r = add(ops);
        break;
      case Kind::Product:
        ops.push_back(Expr(e.value()));
        r = mul(ops);
        break;
      case Kind::Power:
        r = pow(ops[0], e.value());
        break;
      case Kind::Exp:
        r = exp(ops[0]);
        break;
      case Kind::Log:
        r = log(ops[0]);
        break;
      default:
        r = e;
    }
  }
  memo.emplace(e.node(), r);
  return r;
}

void check_target(const Expr& target) {
  if (!target.is_atom()) throw std::invalid_argument("substitution target must be a symbol or function atom: " + target.str());
}

std::optional<Expr> func_arg_rename(const Expr& a, const std::vector<std::pair<Expr, Expr>>& rules) {
  if (!a.is_func()) return std::nullopt;
  auto args = a.args();
  bool changed = false;
  for (auto& arg : args) {
    for (const auto& [t, r] : rules) {
      if (!t.is_symbol() || t.name() != arg) continue;
      if (!r.is_symbol())
        throw std::invalid_argument("cannot substitute a non-symbol into argument '" + arg + "' of " + a.name());
      arg = r.name();
      changed = true;
      break;
    }
  }
  if (!changed) return std::nullopt;
  return Expr::func(a.name(), args, a.index());
}

}  // namespace

Expr substitute_all(const Expr& e, const std::vector<std::pair<Expr, Expr>>& rules, const Assumptions& assume) {
  for (const auto& [t, r] : rules) check_target(t);
  AssumeScope scope(&assume);
  std::vector<std::pair<Expr, Expr>> canon_rules;
  for (const auto& [t, r] : rules) canon_rules.emplace_back(t, canon_rec(r));
  Rewriter rw = [&canon_rules](const Expr& a) -> std::optional<Expr> {
    if (!a.is_atom()) return std::nullopt;
    for (const auto& [t, r] : canon_rules)
      if (a == t) return r;
    return func_arg_rename(a, canon_rules);
  };
  std::unordered_map<const Node*, Expr> memo;
  Expr out = rebuild(canon_rec(e), rw, memo);
  return g_assume ? canon_rec(out) : out;
}

Expr substitute(const Expr& e, const Expr& target, const Expr& replacement, const Assumptions& assume) {
  return substitute_all(e, {{target, replacement}}, assume);
}

Expr replace_function(const Expr& e, const std::string& name, const Expr& body, const std::vector<std::string>& params) {
  std::unordered_map<Expr, Expr, ExprHash> cache;
  Rewriter rw = [&](const Expr& a) -> std::optional<Expr> {
    if (!a.is_func() || a.name() != name) return std::nullopt;
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    if (a.args().size() != params.size())
      throw std::invalid_argument("function " + name + " used with a different number of arguments");
    Expr d = body;
    for (std::size_t i = 0; i < params.size(); ++i)
      for (int k = 0; k < a.index()[i]; ++k) d = differentiate(d, params[i]);
    std::vector<std::pair<Expr, Expr>> ren;
    for (std::size_t i = 0; i < params.size(); ++i)
      if (params[i] != a.args()[i]) ren.emplace_back(Expr::symbol(params[i]), Expr::symbol(a.args()[i]));
    if (!ren.empty()) d = substitute_all(d, ren);
    cache.emplace(a, d);
    return d;
  };
  std::unordered_map<const Node*, Expr> memo;
  return rebuild(ensure_canonical(e), rw, memo);
}

Expr rename_symbol(const Expr& e, const std::string& from, const std::string& to) {
  return substitute(e, Expr::symbol(from), Expr::symbol(to));
}

bool depends_on(const Expr& e, const std::string& sym) {
  switch (e.kind()) {
    case Kind::Const: return false;
    case Kind::Symbol: return e.name() == sym;
    case Kind::Func: return std::find(e.args().begin(), e.args().end(), sym) != e.args().end();
    default:
      for (const auto& op : e.operands())
        if (depends_on(op, sym)) return true;
      return false;
  }
}

bool depends_on(const Expr& e, const Expr& atom) {
  if (atom.is_symbol()) return depends_on(e, atom.name());
  if (e == atom) return true;
  for (const auto& op : e.operands())
    if (depends_on(op, atom)) return true;
  return false;
}

bool contains_function(const Expr& e, const std::string& name) {
  if (e.is_func()) return e.name() == name;
  for (const auto& op : e.operands())
    if (contains_function(op, name)) return true;
  return false;
}

namespace {
void atoms_rec(const Expr& e, std::set<Expr, ExprLess>& out) {
  if (e.is_atom()) {
    out.insert(e);
    return;
  }
  for (const auto& op : e.operands()) atoms_rec(op, out);
}
}  // namespace

std::set<Expr, ExprLess> atoms(const Expr& e) {
  std::set<Expr, ExprLess> out;
  atoms_rec(e, out);
  return out;
}

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  for (const auto& a : atoms(e)) {
    if (a.is_symbol()) out.insert(a.name());
    else out.insert(a.args().begin(), a.args().end());
  }
  return out;
}

ExprMap collect(const Expr& raw_e, std::span<const Expr> atom_list) {
  Expr e = ensure_canonical(raw_e);
  for (const auto& a : atom_list)
    if (!a.is_atom()) throw std::invalid_argument("collect: not an atom: " + a.str());
  auto is_key_atom = [&](const Expr& f) {
    return std::any_of(atom_list.begin(), atom_list.end(), [&](const Expr& a) { return a == f; });
  };
  std::unordered_map<Expr, std::vector<Expr>, ExprHash> buckets;
  std::vector<Expr> order;
  for (const auto& t : terms(e)) {
    auto [c, m] = split_coefficient(t);
    std::vector<Expr> factors = m.kind() == Kind::Product ? m.operands() : std::vector<Expr>{m};
    if (m.is_one()) factors.clear();
    std::vector<Expr> key_f;
    std::vector<Expr> cof_f{Expr(c)};
    for (const auto& f : factors) {
      if (is_key_atom(f) || (f.kind() == Kind::Power && is_key_atom(f.operands()[0]))) {
        key_f.push_back(f);
        continue;
      }
      for (const auto& a : atom_list)
        if (depends_on(f, a)) throw NonPolynomialError("factor " + f.str() + " is not a monomial in " + a.str());
      cof_f.push_back(f);
    }
    Expr key = mul(key_f);
    auto it = buckets.find(key);
    if (it == buckets.end()) {
      order.push_back(key);
      buckets.emplace(key, std::vector<Expr>{mul(cof_f)});
    } else {
      it->second.push_back(mul(cof_f));
    }
  }
  ExprMap out;
  for (const auto& k : order) {
    Expr c = add(buckets[k]);
    if (!c.is_zero()) out.emplace(k, c);
  }
  return out;
}

std::optional<Rational> evaluate(const Expr& e, const Valuation& value_of) {
  switch (e.kind()) {
    case Kind::Const:
      return e.value();
    case Kind::Symbol:
    case Kind::Func:
      return value_of(e);
    case Kind::Sum: {
      Rational s = 0;
      for (const auto& t : e.operands()) {
        auto v = evaluate(t, value_of);
        if (!v) return std::nullopt;
        s += *v;
      }
      return s;
    }
    case Kind::Product: {
      Rational p = e.value();
      for (const auto& f : e.operands()) {
        auto v = evaluate(f, value_of);
        if (!v) return std::nullopt;
        p *= *v;
      }
      return p;
    }
    case Kind::Power: {
      auto b = evaluate(e.operands()[0], value_of);
      if (!b) return std::nullopt;
      const Rational& q = e.value();
      if (*b == 0 && q <= 0) return std::nullopt;
      if (is_integer(q)) return power(*b, q.get_num().get_si());
      auto r = exact_root(*b, q.get_den().get_ui());
      if (!r) return std::nullopt;
      return power(*r, q.get_num().get_si());
    }
    case Kind::Exp: {
      auto a = evaluate(e.operands()[0], value_of);
      if (!a || *a != 0) return std::nullopt;
      return Rational(1);
    }
    case Kind::Log: {
      auto a = evaluate(e.operands()[0], value_of);
      if (!a || *a != 1) return std::nullopt;
      return Rational(0);
    }
  }
  return std::nullopt;
}

}  // namespace symmkit
