#include "symmkit/ansatz.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace symmkit {

std::vector<Expr> monomials(const std::vector<std::string>& vars, int degree) {
  std::vector<Expr> out;
  std::vector<int> exps(vars.size(), 0);
  // fill exponents of total degree d, leading variable highest first
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 >= vars.size()) {
      if (!vars.empty()) exps.back() = left;
      else if (left != 0) return;
      Expr m(1);
      for (std::size_t k = 0; k < vars.size(); ++k)
        if (exps[k]) m *= pow(Expr::symbol(vars[k]), Rational(exps[k]));
      out.push_back(m);
      return;
    }
    for (int e = left; e >= 0; --e) {
      exps[i] = e;
      rec(i + 1, left - e);
    }
  };
  for (int d = 0; d <= degree; ++d) {
    if (vars.empty() && d > 0) break;
    rec(0, d);
  }
  return out;
}

AnsatzSpec AnsatzSpec::from_problem(const ProblemSpec& spec, int degree) {
  if (degree < 0) throw std::invalid_argument("ansatz degree must be non-negative");
  AnsatzSpec a;
  for (const auto& u : spec.unknowns) {
    AnsatzEntry e;
    e.unknown = u.name;
    e.vars = u.args;
    e.degree = degree;
    for (const auto& sh : spec.shapes)
      if (sh.unknown == u.name) {
        e.vars = sh.vars;
        e.degree = sh.degree;
        e.factor = sh.factor;
      }
    a.entries.push_back(e);
  }
  return a;
}

AnsatzSpec AnsatzSpec::raised(int by) const {
  AnsatzSpec a = *this;
  for (auto& e : a.entries) e.degree = std::max(0, e.degree + by);
  return a;
}

namespace {

std::string constant_prefix(const ProblemSpec& spec) {
  std::set<std::string> taken(spec.parameters.begin(), spec.parameters.end());
  for (const auto& c : spec.coordinates()) taken.insert(c);
  for (const auto& f : spec.arbitrary) taken.insert(f.name);
  for (const auto& f : spec.unknowns) taken.insert(f.name);
  for (const auto& f : spec.extra_functions) taken.insert(f.name);
  std::string prefix = "k";
  auto clashes = [&](const std::string& p) {
    for (const auto& t : taken)
      if (t.rfind(p, 0) == 0 && t.size() > p.size() && std::all_of(t.begin() + p.size(), t.end(), ::isdigit)) return true;
    return false;
  };
  while (clashes(prefix)) prefix += "k";
  return prefix;
}

void make_primitive(RationalVector& v) {
  mpz_class l = 1, g = 0;
  for (const auto& x : v)
    if (x != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  for (auto& x : v) {
    x *= l;
    if (x != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  }
  if (g == 0) return;
  Rational sign = 1;
  for (const auto& x : v)
    if (x != 0) {
      sign = x < 0 ? -1 : 1;
      break;
    }
  for (auto& x : v) {
    x /= Rational(g) * sign;
    x.canonicalize();
  }
}

}  // namespace

Instantiation instantiate(const ProblemSpec& spec, const AnsatzSpec& ansatz) {
  auto coords = spec.coordinates();
  if (ansatz.entries.size() != coords.size()) throw std::invalid_argument("ansatz must cover every unknown");
  std::string prefix = constant_prefix(spec);
  Instantiation inst;
  std::vector<Expr> coeffs;
  int next = 0;
  for (const auto& e : ansatz.entries) {
    std::vector<Expr> ts;
    for (const auto& m : monomials(e.vars, e.degree)) {
      Expr k = Expr::symbol(prefix + std::to_string(next++));
      Expr mono = m * e.factor;
      inst.constants.push_back({k, e.unknown, mono});
      ts.push_back(k * mono);
    }
    Expr body = add(ts);
    inst.bodies.push_back(body);
    coeffs.push_back(body);
  }
  inst.field = VectorField(coords, coeffs);
  return inst;
}

SolutionSpace solve(const DeterminingSystem& system, const AnsatzSpec& ansatz) {
  if (!system.spec) throw std::invalid_argument("determining system has no problem attached");
  const ProblemSpec& spec = *system.spec;
  Instantiation inst = instantiate(spec, ansatz);
  std::vector<Expr> ks;
  for (const auto& c : inst.constants) ks.push_back(c.symbol);
  std::map<Expr, std::size_t, ExprLess> column;
  for (std::size_t i = 0; i < ks.size(); ++i) column[ks[i]] = i;

  std::vector<RationalVector> rv;
  for (const auto& c : system.constraints) {
    std::map<Expr, RationalVector, ExprLess> rows;
    Expr e = c.expr;
    for (std::size_t i = 0; i < ansatz.entries.size(); ++i) {
      const auto& decl = spec.unknown_for(spec.coordinates()[i]);
      e = replace_function(e, decl.name, inst.bodies[i], decl.args);
    }
    if (e.is_zero()) continue;
    for (const auto& [mono, coeff] : collect(e, ks)) {
      auto it = column.find(mono);
      if (it == column.end())
        throw NonPolynomialError(mono.is_one() ? "determining system is not homogeneous" : "determining system is not linear in the unknowns");
      for (const auto& t : terms(coeff)) {
        auto [r, m] = split_coefficient(t);
        auto& row = rows[m];
        if (row.empty()) row.assign(ks.size(), Rational(0));
        row[it->second] += r;
      }
    }
    for (auto& [m, r] : rows)
      if (std::any_of(r.begin(), r.end(), [](const Rational& x) { return x != 0; })) rv.push_back(std::move(r));
  }
  RationalMatrix mat = RationalMatrix::from_rows(rv, ks.size());

  SolutionSpace sol;
  sol.constants = inst.constants;
  sol.equations = rv.size();
  sol.degree = ansatz.entries.empty() ? 0 : std::max_element(ansatz.entries.begin(), ansatz.entries.end(), [](const AnsatzEntry& a, const AnsatzEntry& b) {
                                                 return a.degree < b.degree;
                                               })->degree;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    bool used = std::any_of(rv.begin(), rv.end(), [&](const RationalVector& r) { return r[j] != 0; });
    if (!used) sol.unresolved.push_back(inst.constants[j]);
  }
  auto coords = spec.coordinates();
  std::map<std::string, std::size_t> entry_of;
  for (std::size_t i = 0; i < ansatz.entries.size(); ++i) entry_of[ansatz.entries[i].unknown] = i;
  for (auto v : nullspace(mat)) {
    make_primitive(v);
    std::vector<Expr> coeffs(coords.size(), Expr(0));
    std::vector<std::vector<Expr>> parts(coords.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
      if (v[j] == 0) continue;
      parts[entry_of.at(inst.constants[j].unknown)].push_back(Expr(v[j]) * inst.constants[j].monomial);
    }
    for (std::size_t i = 0; i < coords.size(); ++i) coeffs[i] = add(parts[i]);
    VectorField f(coords, coeffs);
    sol.verified.push_back(verify(f, spec).empty());
    if (!sol.verified.back()) sol.warnings.push_back("basis field " + f.str() + " does not pass verification");
    sol.basis.push_back(f);
    sol.assignments.push_back(std::move(v));
  }
  return sol;
}

namespace {

SolutionSpace solve_with_probe(const ProblemSpec& spec, int degree, bool probe) {
  DeterminingSystem sys = determining_system(spec, false);
  AnsatzSpec a = AnsatzSpec::from_problem(spec, degree);
  SolutionSpace sol = solve(sys, a);
  if (probe) {
    SolutionSpace next = solve(sys, a.raised(1));
    sol.probe_dimension = next.dimension();
    if (next.dimension() != sol.dimension())
      sol.warnings.push_back("degree-insufficiency: dimension " + std::to_string(sol.dimension()) + " at degree " +
                             std::to_string(degree) + " becomes " + std::to_string(next.dimension()) + " at degree " +
                             std::to_string(degree + 1));
    std::set<std::string> still;
    for (const auto& c : next.unresolved) still.insert(c.unknown);
    std::vector<AnsatzConstant> keep;
    for (const auto& c : sol.unresolved)
      if (still.count(c.unknown)) keep.push_back(c);
    sol.unresolved = keep;
  }
  return sol;
}

}  // namespace

SolutionSpace solve(const ProblemSpec& spec, int degree, bool probe) { return solve_with_probe(spec, degree, probe); }

SolutionSpace unrestricted_point_check(const ProblemSpec& spec, int degree, bool probe) {
  return solve_with_probe(spec.unrestricted(), degree, probe);
}

}  // namespace symmkit
