#include "symmkit/transform.hpp"

#include <algorithm>
#include <set>

namespace symmkit {

std::string ImplicitComponent::str(const std::string& coord) const {
  Expr alpha = Expr::symbol("alpha");
  Expr g = substitute(integrand, Expr::symbol(coord), alpha);
  if (integrand.is_func() && integrand.args() == std::vector<std::string>{coord})
    g = Expr::func(integrand.name(), {"alpha"}, integrand.index());
  return "int(1/" + g.str() + ", alpha = " + coord + ".." + coord + "bar) = " + rhs.str();
}

Transformation Transformation::identity(std::vector<std::string> coords, std::string name) {
  Transformation t;
  t.name = std::move(name);
  for (const auto& c : coords) {
    t.images.push_back(Expr::symbol(c));
    t.implicit.emplace_back();
  }
  t.coords = std::move(coords);
  return t;
}

Expr Transformation::image(const std::string& coord) const {
  auto it = std::find(coords.begin(), coords.end(), coord);
  if (it == coords.end()) return Expr::symbol(coord);
  return images[static_cast<std::size_t>(it - coords.begin())];
}

bool Transformation::has_implicit() const {
  return std::any_of(implicit.begin(), implicit.end(), [](const auto& c) { return c.has_value(); });
}

std::string Transformation::str() const {
  std::string lhs, rhs;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    lhs += (i ? ", " : "") + coords[i];
    rhs += (i ? ", " : "") + images[i].str();
  }
  std::string out = "(" + lhs + ") -> (" + rhs + ")";
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (implicit[i]) out += ", where " + implicit[i]->str(coords[i]);
  return out;
}

Transformation compose(const Transformation& second, const Transformation& first) {
  if (second.coords != first.coords) throw std::invalid_argument("composition of maps on different spaces");
  if (second.has_implicit() || first.has_implicit())
    throw UnsupportedFlowError("composition of implicitly defined maps is not supported");
  std::vector<std::pair<Expr, Expr>> rules;
  for (std::size_t i = 0; i < first.coords.size(); ++i) rules.emplace_back(Expr::symbol(first.coords[i]), first.images[i]);
  Transformation out = Transformation::identity(first.coords, second.name + "*" + first.name);
  for (std::size_t i = 0; i < second.images.size(); ++i) out.images[i] = substitute_all(second.images[i], rules);
  out.parameter = second.parameter == first.parameter ? first.parameter : "";
  return out;
}

bool same_map(const Transformation& a, const Transformation& b) {
  if (a.coords != b.coords) return false;
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    if (!(a.images[i] - b.images[i]).is_zero()) return false;
  return true;
}

namespace {

bool mentions_any(const Expr& e, const std::vector<std::string>& names) {
  return std::any_of(names.begin(), names.end(), [&](const std::string& n) { return depends_on(e, n); });
}

}  // namespace

Transformation flow(const VectorField& v, const std::string& s) {
  const auto& coords = v.coordinates();
  Expr S = Expr::symbol(s);
  std::vector<std::string> moving;
  for (const auto& c : coords)
    if (!v.coefficient(c).is_zero()) moving.push_back(c);

  Transformation T = Transformation::identity(coords, "flow");
  T.parameter = s;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const std::string& q = coords[i];
    Expr c = v.coefficient(q);
    if (c.is_zero()) continue;
    Expr Q = Expr::symbol(q);
    std::vector<std::string> others;
    for (const auto& m : moving)
      if (m != q) others.push_back(m);

    // split c = m(frozen) * g(q)
    std::vector<Expr> own, rest;
    auto factors = c.kind() == Kind::Product ? c.operands() : std::vector<Expr>{c};
    Rational k = 1;
    if (c.kind() == Kind::Product) k = c.value();
    for (const auto& f : factors) (depends_on(f, q) ? own : rest).push_back(f);
    Expr m = Expr(k) * mul(rest);
    Expr g = mul(own);
    if (mentions_any(m, others) || mentions_any(g, others))
      throw UnsupportedFlowError("coefficient of d/d" + q + " couples moving coordinates: " + c.str());

    if (own.empty()) {
      T.images[i] = Q + m * S;
    } else if (g == Q) {
      T.images[i] = Q * exp(m * S);
    } else if (g.kind() == Kind::Power && g.operands().front() == Q) {
      Rational p = g.value();
      Rational one_m = Rational(1) - p;
      T.images[i] = pow(pow(Q, one_m) + Expr(one_m) * m * S, Rational(1) / one_m);
    } else if (g.kind() == Kind::Exp) {
      Expr kq = g.operands().front();
      Expr kk = differentiate(kq, q);
      if (depends_on(kk, q) || !(kq - kk * Q).is_zero())
        throw UnsupportedFlowError("cannot integrate d" + q + "/ds = " + c.str());
      T.images[i] = -(Expr(1) / kk) * log(exp(-kk * Q) - kk * m * S);
    } else if (g.is_func() && std::all_of(g.index().begin(), g.index().end(), [](int n) { return n == 0; }) && g.args() == std::vector<std::string>{q}) {
      T.images[i] = Expr::symbol(q + "bar");
      T.implicit[i] = ImplicitComponent{g, m * S};
    } else {
      throw UnsupportedFlowError("cannot integrate d" + q + "/ds = " + c.str());
    }
  }
  return T;
}

VectorField generator_of(const Transformation& T) {
  std::vector<Expr> cs;
  for (std::size_t i = 0; i < T.coords.size(); ++i) {
    if (T.implicit[i]) {
      cs.push_back(T.implicit[i]->integrand * substitute(differentiate(T.implicit[i]->rhs, T.parameter), Expr::symbol(T.parameter), Expr(0)));
      continue;
    }
    cs.push_back(substitute(differentiate(T.images[i], T.parameter), Expr::symbol(T.parameter), Expr(0)));
  }
  return VectorField(T.coords, cs);
}

Transformation scaling_family(const std::vector<std::string>& coords) {
  if (coords.size() < 3) throw std::invalid_argument("scaling family needs (t, x, u[, E, h])");
  Transformation T = Transformation::identity(coords, "scaling");
  auto d = [](int i) { return Expr::symbol("d" + std::to_string(i)); };
  auto c = [&](std::size_t i) { return Expr::symbol(coords[i]); };
  T.images[0] = d(1) * c(0) + d(2);
  T.images[1] = d(3) * c(1) + d(4);
  T.images[2] = d(5) * c(2);
  if (coords.size() > 3) T.images[3] = pow(d(1), Rational(-1)) * pow(d(3), Rational(2)) * c(3);
  if (coords.size() > 4) T.images[4] = pow(d(1), Rational(-1)) * c(4);
  T.notes.push_back("d1*d3*d5 != 0");
  return T;
}

Transformation reflection(const std::vector<std::string>& coords, const std::vector<std::string>& flipped) {
  std::string name = "reflect";
  for (const auto& f : flipped) name += "-" + f;
  Transformation T = Transformation::identity(coords, name);
  for (const auto& f : flipped) {
    auto it = std::find(coords.begin(), coords.end(), f);
    if (it == coords.end()) throw std::invalid_argument("'" + f + "' is not a coordinate");
    T.images[static_cast<std::size_t>(it - coords.begin())] = -Expr::symbol(f);
  }
  return T;
}

namespace {

Expr component(const Transformation& T, const std::string& coord) {
  auto it = std::find(T.coords.begin(), T.coords.end(), coord);
  if (it == T.coords.end()) return Expr::symbol(coord);
  auto i = static_cast<std::size_t>(it - T.coords.begin());
  if (T.implicit[i]) throw UnsupportedFlowError("component " + coord + " is only known implicitly");
  return T.images[i];
}

// express the symbols E, h of the extended space through the base-mode atoms
Expr to_base(const Expr& e, const ProblemSpec& spec) {
  std::vector<std::pair<Expr, Expr>> rules;
  for (const auto& f : spec.arbitrary) rules.emplace_back(Expr::symbol(f.name), Expr::func(f.name, f.args));
  return substitute_all(e, rules);
}

}  // namespace

PushforwardReport pushforward_equation(const Transformation& T, const ProblemSpec& spec) {
  if (spec.equivalence()) throw std::invalid_argument("pushforward works on a base-mode problem");
  if (spec.independents.size() != 2) throw std::invalid_argument("pushforward expects two independent variables");
  const std::string& tn = spec.independents[0];
  const std::string& xn = spec.independents[1];
  const std::string& un = spec.dependent;
  Expr a = component(T, tn), b = component(T, xn), c = component(T, un);
  auto separable = [&](const Expr& e, const std::string& own) {
    for (const auto& q : T.coords)
      if (q != own && depends_on(e, q)) return false;
    return true;
  };
  if (!separable(a, tn) || !separable(b, xn) || !separable(c, un))
    throw std::invalid_argument("transformation is not component-separable in (" + tn + "," + xn + "," + un + ")");
  Expr da = differentiate(a, tn), db = differentiate(b, xn), dc = differentiate(c, un);
  if (da.is_zero() || db.is_zero() || dc.is_zero()) throw NonInvertibleError("transformation is not invertible (zero Jacobian)");
  Expr ddb = differentiate(db, xn), ddc = differentiate(dc, un);

  JetSpace js = spec.jet_space();
  std::string w = "w";
  while (std::find(spec.parameters.begin(), spec.parameters.end(), w) != spec.parameters.end() || w == un) w += "w";
  Expr wt = Expr::symbol(w + "_" + tn), wx = Expr::symbol(w + "_" + xn), wxx = Expr::symbol(w + "_" + xn + xn);
  Expr ux = js.jet({0, 1}), uxx = js.jet({0, 2}), ut = js.jet({1, 0});
  if (!(spec.lhs == ut)) throw std::invalid_argument("pushforward expects an equation solved for " + ut.str());

  Expr inv_dc = pow(dc, Rational(-1));
  Expr new_ux = wx * db * inv_dc;
  Expr new_uxx = ddb * wx * inv_dc + db * db * wxx * inv_dc - db * db * wx * wx * ddc * pow(dc, Rational(-3));
  Expr rhs = substitute_all(spec.rhs, {{ux, new_ux}, {uxx, new_uxx}});
  Expr rhs_new = rhs * dc * pow(da, Rational(-1));

  PushforwardReport rep;
  rep.transformed = wt.str() + " = " + rhs_new.str();
  const Expr jets[2] = {wx, wxx};
  ExprMap parts;
  try {
    parts = collect(rhs_new, jets);
  } catch (const NonPolynomialError&) {
    rep.reasons.push_back("transformed equation is not polynomial in the new derivatives");
    return rep;
  }
  Expr A, B, C, D;
  bool extra = false;
  for (const auto& [mono, coeff] : parts) {
    if (mono == wxx) A = coeff;
    else if (mono == wx) B = coeff;
    else if (mono == wx * wx) C = coeff;
    else if (mono.is_one()) D = coeff;
    else extra = true;
  }
  rep.E_new = A;
  rep.first_order = B;
  rep.h_new = D * pow(c, Rational(-1));
  bool ok = true;
  if (extra) {
    ok = false;
    rep.reasons.push_back("transformed equation has derivative terms outside the class");
  }
  if (A.is_zero() || depends_on(A, tn) || depends_on(A, xn)) {
    ok = false;
    rep.reasons.push_back("induced conductivity " + A.str() + " is not a function of " + un + " alone");
  }
  if (!B.is_zero()) {
    ok = false;
    rep.reasons.push_back("first-order term " + B.str() + " survives");
  }
  if (!(C - differentiate(A, un) * inv_dc).is_zero()) {
    ok = false;
    rep.reasons.push_back("gradient-squared coefficient " + C.str() + " is not the derivative of the induced conductivity");
  }
  if (depends_on(rep.h_new, un) || depends_on(rep.h_new, tn)) {
    ok = false;
    rep.reasons.push_back("induced source coefficient " + rep.h_new.str() + " is not a function of " + xn + " alone");
  }
  rep.fin_form = ok;

  // the arbitrary element multiplying the top derivative plays the role of E
  std::string cond;
  {
    const Expr top[1] = {uxx};
    for (const auto& [mono, coeff] : collect(spec.rhs, top))
      if (mono == uxx)
        for (const auto& f : spec.arbitrary)
          if (contains_function(coeff, f.name)) cond = f.name;
  }
  for (std::size_t i = 0; i < T.coords.size(); ++i) {
    const FunctionDecl* f = spec.arbitrary_function(T.coords[i]);
    if (!f) continue;
    if (T.implicit[i]) {
      rep.reasons.push_back(T.coords[i] + " component is implicit; no closed form to compare");
      continue;
    }
    Expr mine = to_base(T.images[i], spec);
    Expr induced = f->name == cond ? rep.E_new : rep.h_new;
    bool same = (mine - induced).is_zero();
    if (!same)
      rep.reasons.push_back("map sends " + T.coords[i] + " to " + mine.str() + " but the equation requires " + induced.str());
    if (f->name == cond) rep.E_consistent = same;
    else rep.h_consistent = same;
  }
  return rep;
}

Expr transport_solution(const Transformation& T, const Expr& f, const ProblemSpec& spec) {
  const std::string& tn = spec.independents[0];
  const std::string& xn = spec.independents[1];
  Expr a = component(T, tn), b = component(T, xn), c = component(T, spec.dependent);
  Expr moved = substitute_all(f, {{Expr::symbol(tn), a}, {Expr::symbol(xn), b}});
  return substitute(c, Expr::symbol(spec.dependent), moved);
}

std::string transport_signature(const Transformation& T, const std::string& fname, const ProblemSpec& spec) {
  const std::string& tn = spec.independents[0];
  const std::string& xn = spec.independents[1];
  Expr a = component(T, tn), b = component(T, xn), c = component(T, spec.dependent);
  std::string call = fname + "(" + a.str() + ", " + b.str() + ")";
  if (c == Expr::symbol(spec.dependent)) return call;
  return c.str() + " with " + spec.dependent + " = " + call;
}

}  // namespace symmkit
