#include "symmkit/algfile.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace symmkit {

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

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(trim(part));
  return out;
}

}  // namespace

Scope AlgebraFile::scope(bool strict) const {
  Scope s;
  s.strict = strict;
  s.coordinates = coordinates;
  for (const auto& f : functions) s.functions[f.name] = f.args;
  s.parameters.insert(parameters.begin(), parameters.end());
  for (const auto& g : generators) s.parameters.insert(g.name);
  return s;
}

Expr AlgebraFile::parse_expr(const std::string& text, int line, bool strict) const {
  Scope s = scope(strict);
  try {
    return parse(text, &s, line);
  } catch (const ParseError& e) {
    throw SpecError(line, e.detail());
  }
}

LieAlgebra AlgebraFile::algebra() const {
  std::vector<std::string> names;
  std::vector<VectorField> basis;
  for (const auto& g : generators) {
    names.push_back(g.name);
    basis.push_back(g.field);
  }
  return LieAlgebra::from_basis(names, basis);
}

const Representative* AlgebraFile::representative(const std::string& name) const {
  for (const auto& r : representatives)
    if (r.name == name) return &r;
  return nullptr;
}

std::optional<VectorField> AlgebraFile::named_field(const std::string& name) const {
  for (const auto& g : generators)
    if (g.name == name) return g.field;
  for (const auto& f : fields)
    if (f.name == name) return f.field;
  return std::nullopt;
}

namespace {

VectorField parse_field(const AlgebraFile& file, const std::string& body, int line) {
  std::vector<Expr> coeffs(file.coordinates.size(), Expr(0));
  for (const auto& part : split(body, ';')) {
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos) throw SpecError(line, "component needs 'coord = expr'");
    std::string coord = trim(part.substr(0, eq));
    auto it = std::find(file.coordinates.begin(), file.coordinates.end(), coord);
    if (it == file.coordinates.end()) throw SpecError(line, "'" + coord + "' is not a coordinate");
    coeffs[static_cast<std::size_t>(it - file.coordinates.begin())] = file.parse_expr(part.substr(eq + 1), line);
  }
  return VectorField(file.coordinates, coeffs);
}

ExprVector parse_vector(const AlgebraFile& file, const std::vector<std::string>& parts, int line) {
  if (parts.size() != file.generators.size())
    throw SpecError(line, "expected " + std::to_string(file.generators.size()) + " components, found " + std::to_string(parts.size()));
  ExprVector v;
  for (const auto& p : parts) v.push_back(file.parse_expr(p, line, false));
  return v;
}

std::size_t generator_index(const AlgebraFile& file, const std::string& name, int line) {
  for (std::size_t i = 0; i < file.generators.size(); ++i)
    if (file.generators[i].name == name) return i;
  throw SpecError(line, "unknown generator '" + name + "'");
}

ExprVector linear_coefficients(const AlgebraFile& file, const Expr& e, int line) {
  std::vector<Expr> gens;
  for (const auto& g : file.generators) gens.push_back(Expr::symbol(g.name));
  ExprVector v(gens.size(), Expr(0));
  ExprMap parts;
  try {
    parts = collect(e, gens);
  } catch (const NonPolynomialError&) {
    throw SpecError(line, "representative must be a linear combination of generators");
  }
  for (const auto& [mono, coeff] : parts) {
    auto it = std::find(gens.begin(), gens.end(), mono);
    if (it == gens.end()) throw SpecError(line, "representative must be a linear combination of generators");
    v[static_cast<std::size_t>(it - gens.begin())] = coeff;
  }
  return v;
}

}  // namespace

AlgebraFile parse_algebra_file(const std::string& text, const std::string& source) {
  AlgebraFile file;
  file.source = source;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  static const std::regex decl(R"(\s*([A-Za-z][A-Za-z0-9]*)\s*\(([^)]*)\)\s*)");
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    auto sp = s.find_first_of(" \t");
    std::string key = s.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(s.substr(sp));
    if (key == "coordinates") {
      file.coordinates = words(rest);
    } else if (key == "parameter") {
      for (const auto& p : words(rest)) file.parameters.push_back(p);
    } else if (key == "projection") {
      file.projection = words(rest);
      for (const auto& c : file.projection)
        if (std::find(file.coordinates.begin(), file.coordinates.end(), c) == file.coordinates.end())
          throw SpecError(line, "'" + c + "' is not a coordinate");
    } else if (key == "coefficients") {
      auto ws = words(rest);
      if (ws.size() != 2) throw SpecError(line, "coefficients needs two prefixes");
      file.coefficient_prefix = ws[0];
      file.second_prefix = ws[1];
    } else if (key == "function") {
      auto it = rest.cbegin();
      std::smatch m;
      while (it != rest.cend() && std::regex_search(it, rest.cend(), m, decl, std::regex_constants::match_continuous)) {
        std::string args = m[2];
        std::replace(args.begin(), args.end(), ',', ' ');
        file.functions.push_back({m[1], words(args)});
        it = m[0].second;
      }
      if (it != rest.cend()) throw SpecError(line, "expected function declaration name(args)");
    } else if (key == "generator" || key == "field" || key == "variant") {
      if (file.coordinates.empty()) throw SpecError(line, "coordinates must be declared first");
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw SpecError(line, key + " needs 'name: coord = expr; ...'");
      NamedField f{trim(rest.substr(0, colon)), parse_field(file, rest.substr(colon + 1), line)};
      if (key == "variant" && !file.representative(f.name)) throw SpecError(line, "variant of unknown representative '" + f.name + "'");
      (key == "generator" ? file.generators : key == "field" ? file.fields : file.variants).push_back(f);
    } else if (key == "representative") {
      auto eq = rest.find('=');
      if (eq == std::string::npos) throw SpecError(line, "representative needs 'name = combination'");
      Representative r;
      r.name = trim(rest.substr(0, eq));
      r.line = line;
      r.coeffs = linear_coefficients(file, file.parse_expr(rest.substr(eq + 1), line), line);
      file.representatives.push_back(r);
    } else if (key == "case" || key == "search") {
      auto parts = split(rest, '|');
      if (parts.empty() || parts[0].empty()) throw SpecError(line, key + " needs a label");
      if (key == "case") {
        ReductionCase c;
        c.label = parts[0];
        c.line = line;
        for (std::size_t i = 1; i < parts.size(); ++i) {
          auto ws = words(parts[i]);
          if (ws.empty()) continue;
          std::vector<std::string> args(ws.begin() + 1, ws.end());
          if (ws[0] == "start") c.start = parse_vector(file, args, line);
          else if (ws[0] == "expect") c.expect = parse_vector(file, args, line);
          else if (ws[0] == "ad") {
            if (args.size() != 2) throw SpecError(line, "ad needs a generator and a parameter");
            c.steps.push_back({ReductionStep::Kind::Ad, generator_index(file, args[0], line), file.parse_expr(args[1], line, false)});
          } else if (ws[0] == "scale") {
            if (args.size() != 1) throw SpecError(line, "scale needs one factor");
            c.steps.push_back({ReductionStep::Kind::Scale, 0, file.parse_expr(args[0], line, false)});
          } else if (ws[0] == "yields") {
            if (args.empty()) throw SpecError(line, "yields needs a representative");
            c.yields = args[0];
            for (std::size_t k = 1; k < args.size(); ++k) {
              auto eq = args[k].find('=');
              if (eq == std::string::npos) throw SpecError(line, "binding needs 'param=expr'");
              c.bind.emplace_back(args[k].substr(0, eq), file.parse_expr(args[k].substr(eq + 1), line, false));
            }
          } else {
            throw SpecError(line, "unknown case clause '" + ws[0] + "'");
          }
        }
        if (c.start.empty()) throw SpecError(line, "case needs a start vector");
        if (!c.yields.empty() && !file.representative(c.yields)) throw SpecError(line, "unknown representative '" + c.yields + "'");
        file.cases.push_back(c);
      } else {
        ReductionSearch sr;
        sr.label = parts[0];
        sr.line = line;
        for (std::size_t i = 1; i < parts.size(); ++i) {
          auto ws = words(parts[i]);
          if (ws.empty()) continue;
          std::vector<std::string> args(ws.begin() + 1, ws.end());
          if (ws[0] == "start") sr.start = parse_vector(file, args, line);
          else if (ws[0] == "target") sr.target = parse_vector(file, args, line);
          else if (ws[0] == "nonzero") sr.nonzero.insert(args.begin(), args.end());
          else if (ws[0] == "depth") {
            if (args.size() != 1) throw SpecError(line, "depth needs one integer");
            try {
              sr.depth = std::stoi(args[0]);
            } catch (...) {
              throw SpecError(line, "depth needs one integer");
            }
          } else {
            throw SpecError(line, "unknown search clause '" + ws[0] + "'");
          }
        }
        if (sr.start.empty() || sr.target.empty()) throw SpecError(line, "search needs start and target");
        file.searches.push_back(sr);
      }
    } else {
      throw SpecError(line, "unknown declaration '" + key + "'");
    }
  }
  if (file.generators.empty()) throw SpecError(0, "no generators declared");
  if (file.projection.empty()) file.projection.assign(file.coordinates.begin() + 1, file.coordinates.end());
  return file;
}

AlgebraFile load_algebra_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SpecError(0, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_algebra_file(ss.str(), path);
}

namespace {

ExprVector substituted(const ExprVector& v, const std::vector<std::pair<Expr, Expr>>& rules) {
  ExprVector out;
  for (const auto& e : v) out.push_back(substitute_all(e, rules));
  return out;
}

ExprVector difference(const ExprVector& a, const ExprVector& b) {
  ExprVector out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

}  // namespace

CaseReport run_case(const AlgebraFile& file, const LieAlgebra& alg, const ReductionCase& c) {
  CaseReport rep;
  rep.label = c.label;
  rep.result = reduce(alg, c.start, c.steps);
  if (c.expect) {
    rep.residual = difference(rep.result, *c.expect);
    rep.matches = is_zero(*rep.residual);
  }
  if (c.yields.empty()) return rep;
  const Representative* r = file.representative(c.yields);
  std::vector<std::pair<Expr, Expr>> bind;
  for (const auto& [p, e] : c.bind) bind.emplace_back(Expr::symbol(p), e);
  if (c.expect) rep.yields_ok = is_zero(difference(substituted(r->coeffs, bind), *c.expect));

  // instantiate the case at the representative itself
  std::vector<std::pair<Expr, Expr>> at;
  bool covered = true;
  for (std::size_t i = 0; i < c.start.size() && covered; ++i) {
    Expr s = substitute_all(c.start[i], at);
    if (s.is_symbol() && std::find(file.parameters.begin(), file.parameters.end(), s.name()) == file.parameters.end()) {
      at.emplace_back(s, r->coeffs[i]);
    } else if (!(s - r->coeffs[i]).is_zero()) {
      covered = false;
    }
  }
  if (!covered) {
    rep.fixed_point_note = "start pattern does not contain " + c.yields;
    return rep;
  }
  std::vector<ReductionStep> steps = c.steps;
  for (auto& st : steps) st.value = substitute_all(st.value, at);
  ExprVector again = reduce(alg, r->coeffs, steps);
  rep.fixed_point = is_zero(difference(again, r->coeffs));
  if (!*rep.fixed_point) rep.fixed_point_note = "steps move " + c.yields + " to " + alg.combination(again);
  return rep;
}

std::vector<ParameterReport> parameter_invariance(const AlgebraFile& file, const LieAlgebra& alg) {
  std::vector<ParameterReport> out;
  Expr s = Expr::symbol("s");
  for (const auto& r : file.representatives) {
    bool has_param = false;
    for (const auto& e : r.coeffs)
      for (const auto& p : file.parameters)
        if (depends_on(e, p)) has_param = true;
    if (!has_param) continue;
    auto unit = std::find_if(r.coeffs.begin(), r.coeffs.end(), [](const Expr& e) { return e.is_one(); });
    if (unit == r.coeffs.end()) continue;
    auto ui = static_cast<std::size_t>(unit - r.coeffs.begin());
    for (std::size_t k = 0; k < alg.dim(); ++k) {
      ExprVector moved = alg.adjoint_matrix(k, s) * r.coeffs;
      if (moved[ui].is_zero()) continue;
      Expr norm = pow(moved[ui], Rational(-1));
      bool same_shape = true;
      for (std::size_t i = 0; i < moved.size(); ++i) {
        moved[i] = moved[i] * norm;
        if (r.coeffs[i].is_zero() != moved[i].is_zero()) same_shape = false;
      }
      if (!same_shape) continue;
      ParameterReport p{r.name, alg.names()[k], moved, !is_zero(difference(moved, r.coeffs))};
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace symmkit
