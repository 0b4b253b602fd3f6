#include "symmkit/problem.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace symmkit {

std::string FunctionDecl::str() const {
  std::string s = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i];
  return s + ")";
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool valid_name(const std::string& s) {
  static const std::regex re("[A-Za-z][A-Za-z0-9]*");
  return std::regex_match(s, re);
}

std::vector<FunctionDecl> parse_decls(const std::string& text, int line) {
  static const std::regex re(R"(\s*([A-Za-z][A-Za-z0-9]*)\s*\(([^)]*)\)\s*)");
  std::vector<FunctionDecl> out;
  auto it = text.cbegin();
  std::smatch m;
  while (it != text.cend()) {
    if (trim(std::string(it, text.cend())).empty()) break;
    if (!std::regex_search(it, text.cend(), m, re, std::regex_constants::match_continuous))
      throw SpecError(line, "expected function declaration name(arg, ...) in '" + trim(std::string(it, text.cend())) + "'");
    FunctionDecl d;
    d.name = m[1];
    std::string args = m[2];
    std::replace(args.begin(), args.end(), ',', ' ');
    d.args = words(args);
    for (const auto& a : d.args)
      if (!valid_name(a)) throw SpecError(line, "bad argument name '" + a + "'");
    out.push_back(d);
    it = m[0].second;
  }
  if (out.empty()) throw SpecError(line, "expected at least one function declaration");
  return out;
}

struct Deferred {
  std::vector<std::pair<int, std::string>> equation;
  std::vector<std::pair<int, std::string>> shapes;
  std::vector<std::pair<int, std::string>> candidates;
};

void finish(ProblemSpec& spec, const Deferred& d) {
  if (spec.independents.empty()) throw SpecError(0, "missing 'independent' declaration");
  if (spec.dependent.empty()) throw SpecError(0, "missing 'dependent' declaration");
  if (d.equation.size() != 1) throw SpecError(0, "exactly one 'equation' line is required");
  auto coords = spec.coordinates();
  if (spec.unknowns.size() != coords.size())
    throw SpecError(0, "expected " + std::to_string(coords.size()) + " ansatz unknowns (one per coordinate), found " +
                           std::to_string(spec.unknowns.size()));
  for (const auto& u : spec.unknowns)
    for (const auto& a : u.args)
      if (std::find(coords.begin(), coords.end(), a) == coords.end())
        throw SpecError(0, "ansatz unknown " + u.name + " depends on undeclared variable '" + a + "'");
  if (spec.equivalence())
    for (const auto& f : spec.arbitrary)
      for (const auto& a : f.args)
        if (a != spec.dependent && std::find(spec.independents.begin(), spec.independents.end(), a) == spec.independents.end())
          throw SpecError(0, "arbitrary element " + f.name + " depends on unknown variable '" + a + "'");

  const auto& [line, text] = d.equation.front();
  auto eq = text.find('=');
  if (eq == std::string::npos || text.find('=', eq + 1) != std::string::npos)
    throw SpecError(line, "equation needs exactly one '='");
  try {
    spec.lhs = spec.parse_expr(text.substr(0, eq), line);
    spec.rhs = spec.parse_expr(text.substr(eq + 1), line);
  } catch (const ParseError& e) {
    throw SpecError(line, e.detail());
  }

  for (const auto& [sl, st] : d.shapes) {
    auto ws = words(st);
    if (ws.size() < 2) throw SpecError(sl, "shape needs an unknown and a factor");
    ShapeDecl sh;
    sh.unknown = ws[0];
    auto uit = std::find_if(spec.unknowns.begin(), spec.unknowns.end(), [&](const FunctionDecl& f) { return f.name == sh.unknown; });
    if (uit == spec.unknowns.end()) throw SpecError(sl, "shape for undeclared unknown '" + sh.unknown + "'");
    std::string body = trim(st.substr(st.find(ws[0]) + ws[0].size()));
    auto p = body.find("poly(");
    if (p == std::string::npos) throw SpecError(sl, "shape must contain poly(vars..., degree)");
    auto close = body.find(')', p);
    if (close == std::string::npos) throw SpecError(sl, "unterminated poly(...)");
    std::string inner = body.substr(p + 5, close - p - 5);
    std::replace(inner.begin(), inner.end(), ',', ' ');
    auto parts = words(inner);
    if (parts.empty()) throw SpecError(sl, "poly(...) needs a degree");
    try {
      sh.degree = std::stoi(parts.back());
    } catch (...) {
      throw SpecError(sl, "poly degree must be an integer");
    }
    parts.pop_back();
    for (const auto& v : parts)
      if (std::find(uit->args.begin(), uit->args.end(), v) == uit->args.end())
        throw SpecError(sl, "'" + v + "' is not an argument of " + sh.unknown);
    sh.vars = parts;
    std::string factor = body.substr(0, p) + "1" + body.substr(close + 1);
    try {
      sh.factor = spec.parse_expr(factor, sl);
    } catch (const ParseError& e) {
      throw SpecError(sl, e.detail());
    }
    spec.shapes.push_back(sh);
  }

  for (const auto& [cl, ct] : d.candidates) {
    auto colon = ct.find(':');
    if (colon == std::string::npos) throw SpecError(cl, "candidate needs 'name: coord = expr; ...'");
    Candidate c;
    c.name = trim(ct.substr(0, colon));
    std::vector<Expr> coeffs(coords.size(), Expr(0));
    std::stringstream parts(ct.substr(colon + 1));
    std::string part;
    while (std::getline(parts, part, ';')) {
      if (trim(part).empty()) continue;
      auto e = part.find('=');
      if (e == std::string::npos) throw SpecError(cl, "component needs 'coord = expr'");
      std::string coord = trim(part.substr(0, e));
      auto it = std::find(coords.begin(), coords.end(), coord);
      if (it == coords.end()) throw SpecError(cl, "'" + coord + "' is not a coordinate");
      try {
        coeffs[static_cast<std::size_t>(it - coords.begin())] = spec.parse_expr(part.substr(e + 1), cl);
      } catch (const ParseError& pe) {
        throw SpecError(cl, pe.detail());
      }
    }
    c.field = VectorField(coords, coeffs);
    spec.candidates.push_back(c);
  }
  spec.validate();
}

}  // namespace

ProblemSpec ProblemSpec::parse(const std::string& text, const std::string& source) {
  ProblemSpec spec;
  spec.source = source;
  Deferred d;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    auto sp = s.find_first_of(" \t");
    std::string key = s.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(s.substr(sp));
    if (key == "independent") {
      spec.independents = words(rest);
      for (const auto& w : spec.independents)
        if (!valid_name(w) || w.size() != 1) throw SpecError(line, "independent variables must be single letters");
    } else if (key == "dependent") {
      auto ws = words(rest);
      if (ws.size() != 1) throw SpecError(line, "exactly one dependent variable is supported");
      spec.dependent = ws[0];
    } else if (key == "arbitrary") {
      auto ds = parse_decls(rest, line);
      spec.arbitrary.insert(spec.arbitrary.end(), ds.begin(), ds.end());
    } else if (key == "function") {
      auto ds = parse_decls(rest, line);
      spec.extra_functions.insert(spec.extra_functions.end(), ds.begin(), ds.end());
    } else if (key == "ansatz") {
      auto ds = parse_decls(rest, line);
      spec.unknowns.insert(spec.unknowns.end(), ds.begin(), ds.end());
    } else if (key == "parameter") {
      for (const auto& w : words(rest)) {
        if (!valid_name(w)) throw SpecError(line, "bad parameter name '" + w + "'");
        spec.parameters.push_back(w);
      }
    } else if (key == "mode") {
      if (rest == "base") spec.mode = Mode::Base;
      else if (rest == "equivalence") spec.mode = Mode::Equivalence;
      else throw SpecError(line, "mode must be 'base' or 'equivalence'");
    } else if (key == "order") {
      try {
        spec.order = std::stoi(rest);
      } catch (...) {
        throw SpecError(line, "order must be an integer");
      }
      if (spec.order < 1) throw SpecError(line, "order must be positive");
    } else if (key == "equation") {
      d.equation.emplace_back(line, rest);
    } else if (key == "shape") {
      d.shapes.emplace_back(line, rest);
    } else if (key == "candidate") {
      d.candidates.emplace_back(line, rest);
    } else {
      throw SpecError(line, "unknown declaration '" + key + "'");
    }
  }
  finish(spec, d);
  return spec;
}

ProblemSpec ProblemSpec::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SpecError(0, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

std::vector<std::string> ProblemSpec::coordinates() const {
  std::vector<std::string> out = independents;
  out.push_back(dependent);
  if (equivalence())
    for (const auto& f : arbitrary) out.push_back(f.name);
  return out;
}

const FunctionDecl& ProblemSpec::unknown_for(const std::string& coord) const {
  auto cs = coordinates();
  auto it = std::find(cs.begin(), cs.end(), coord);
  if (it == cs.end() || static_cast<std::size_t>(it - cs.begin()) >= unknowns.size())
    throw std::invalid_argument("no unknown for coordinate " + coord);
  return unknowns[static_cast<std::size_t>(it - cs.begin())];
}

const FunctionDecl* ProblemSpec::arbitrary_function(const std::string& name) const {
  for (const auto& f : arbitrary)
    if (f.name == name) return &f;
  return nullptr;
}

JetSpace ProblemSpec::jet_space() const {
  std::vector<JetVariable> elems;
  if (equivalence()) {
    std::vector<std::string> base = independents;
    base.push_back(dependent);
    for (const auto& f : arbitrary) {
      JetVariable v;
      v.name = f.name;
      v.base = base;
      for (const auto& b : base)
        if (std::find(f.args.begin(), f.args.end(), b) == f.args.end()) v.frozen.insert(b);
      v.max_order = 2;
      elems.push_back(v);
    }
  }
  return JetSpace(independents, dependent, order, elems);
}

Scope ProblemSpec::scope(bool lenient) const {
  Scope s;
  s.strict = true;
  s.lenient_derivatives = lenient;
  s.coordinates = coordinates();
  auto js = std::make_shared<JetSpace>(jet_space());
  JetVariable u;
  u.name = dependent;
  u.base = independents;
  u.max_order = order;
  s.jet_variables.push_back(u);
  for (const auto& v : js->arbitrary()) s.jet_variables.push_back(v);
  if (!equivalence())
    for (const auto& f : arbitrary) s.functions[f.name] = f.args;
  for (const auto& f : unknowns) s.functions[f.name] = f.args;
  for (const auto& f : extra_functions) s.functions[f.name] = f.args;
  s.parameters.insert(parameters.begin(), parameters.end());
  s.total_derivative = [js](const Expr& e, const std::string& var) { return js->total_derivative(e, var); };
  return s;
}

Expr ProblemSpec::parse_expr(const std::string& text, int line) const {
  Scope s = scope();
  return symmkit::parse(text, &s, line);
}

Expr ProblemSpec::on_shell(const Expr& e) const { return substitute(e, lhs, rhs); }

std::vector<Expr> ProblemSpec::arbitrary_atoms(const Expr& e) const {
  std::vector<Expr> out;
  if (equivalence()) {
    auto derivs = jet_space().element_derivative_atoms();
    for (const auto& a : atoms(e))
      if (std::find(derivs.begin(), derivs.end(), a) != derivs.end()) out.push_back(a);
    return out;
  }
  for (const auto& a : atoms(e))
    if (a.is_func() && arbitrary_function(a.name())) out.push_back(a);
  return out;
}

bool ProblemSpec::is_unknown(const Expr& atom) const {
  if (!atom.is_func()) return false;
  return std::any_of(unknowns.begin(), unknowns.end(), [&](const FunctionDecl& f) { return f.name == atom.name(); });
}

void ProblemSpec::validate() const {
  if (!lhs.is_symbol()) throw SpecError(0, "left-hand side must be a single jet coordinate");
  JetSpace js = jet_space();
  auto jets = js.jets();
  if (std::find(jets.begin(), jets.end(), lhs) == jets.end())
    throw SpecError(0, "left-hand side must be a derivative of " + dependent);
  if (depends_on(rhs, lhs)) throw SpecError(0, "equation is not solvable for " + lhs.str());
  std::vector<int> top(independents.size(), 0);
  top.back() = order;
  Expr lead = js.jet(top);
  const Expr atom_list[1] = {lead};
  ExprMap coeffs;
  try {
    coeffs = collect(rhs, atom_list);
  } catch (const NonPolynomialError&) {
    throw SpecError(0, "equation is not polynomial in " + lead.str());
  }
  auto it = coeffs.find(lead);
  if (it == coeffs.end()) throw SpecError(0, "equation has no " + lead.str() + " term");
  bool depends = depends_on(it->second, dependent);
  if (equivalence())
    for (const auto& v : js.arbitrary())
      if (!v.frozen.count(dependent) && depends_on(it->second, v.name)) depends = true;
  if (!depends)
    throw SpecError(0, "the coefficient of " + lead.str() + " must depend on " + dependent + " (nonlinear diffusivity)");
}

ProblemSpec ProblemSpec::specialize(const std::string& function, const Expr& body, const std::vector<FunctionDecl>& new_functions,
                                    const std::vector<std::string>& new_parameters) const {
  if (equivalence()) throw std::logic_error("specialization applies to base-mode problems");
  const FunctionDecl* f = arbitrary_function(function);
  if (!f) throw std::invalid_argument("no arbitrary function named " + function);
  ProblemSpec out = *this;
  out.rhs = replace_function(rhs, function, body, f->args);
  out.arbitrary.erase(std::remove_if(out.arbitrary.begin(), out.arbitrary.end(), [&](const FunctionDecl& d) { return d.name == function; }),
                      out.arbitrary.end());
  out.arbitrary.insert(out.arbitrary.end(), new_functions.begin(), new_functions.end());
  for (const auto& p : new_parameters)
    if (std::find(out.parameters.begin(), out.parameters.end(), p) == out.parameters.end()) out.parameters.push_back(p);
  out.candidates.clear();
  out.validate();
  return out;
}

ProblemSpec ProblemSpec::unrestricted() const {
  ProblemSpec out = *this;
  std::vector<std::string> full = independents;
  full.push_back(dependent);
  for (std::size_t i = 0; i < independents.size(); ++i) out.unknowns[i].args = full;
  return out;
}

}  // namespace symmkit
