#include "symmkit/detsys.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "symmkit/linalg.hpp"

namespace symmkit {

std::vector<Expr> DeterminingSystem::expressions() const {
  std::vector<Expr> out;
  for (const auto& c : constraints) out.push_back(c.expr);
  return out;
}

Expr DeterminingSystem::reconstruct(const std::string& source) const {
  std::vector<Expr> ts;
  for (const auto& c : constraints)
    for (const auto& o : c.origins)
      if (o.source == source) ts.push_back(o.monomial * Expr(o.scale) * c.expr);
  return add(ts);
}

VectorField general_field(const ProblemSpec& spec) {
  auto coords = spec.coordinates();
  std::vector<Expr> cs;
  for (const auto& c : coords) {
    const auto& u = spec.unknown_for(c);
    cs.push_back(Expr::func(u.name, u.args));
  }
  return VectorField(coords, cs);
}

Expr symmetry_condition(const VectorField& v, const ProblemSpec& spec) {
  JetSpace js = spec.jet_space();
  VectorField pv = spec.equivalence() ? js.prolong_equivalence(v) : js.prolong(v);
  return spec.on_shell(pv.apply(spec.residual()));
}

std::vector<std::pair<std::string, Expr>> auxiliary_conditions(const VectorField& v, const ProblemSpec& spec) {
  std::vector<std::pair<std::string, Expr>> out;
  if (!spec.equivalence()) return out;
  JetSpace js = spec.jet_space();
  VectorField pv = js.prolong_equivalence(v);
  for (const auto& c : js.auxiliary_coordinates()) out.emplace_back(c, pv.coefficient(c));
  return out;
}

namespace {

void add_constraint(DeterminingSystem& sys, const Expr& raw, const Expr& monomial, const std::string& source) {
  if (raw.is_zero()) return;
  Rational lead = split_coefficient(terms(raw).front()).first;
  Expr norm = raw * Expr(Rational(1) / lead);
  for (auto& c : sys.constraints)
    if (c.expr == norm) {
      c.origins.push_back({monomial, lead, source});
      return;
    }
  sys.constraints.push_back({norm, {{monomial, lead, source}}});
}

void sort_constraints(DeterminingSystem& sys) {
  std::stable_sort(sys.constraints.begin(), sys.constraints.end(),
                   [](const Constraint& a, const Constraint& b) { return compare(a.expr, b.expr) < 0; });
}

}  // namespace

DeterminingSystem split(const Expr& condition, const ProblemSpec& spec, bool arbitrary_mode, const std::string& source) {
  DeterminingSystem sys;
  sys.spec = std::make_shared<const ProblemSpec>(spec);
  sys.arbitrary_split = arbitrary_mode;
  auto jets = spec.jet_space().jets();
  ExprMap stage1 = collect(condition, jets);
  for (const auto& [mono, coeff] : stage1) {
    if (arbitrary_mode) {
      auto arb = spec.arbitrary_atoms(coeff);
      if (!arb.empty()) {
        try {
          ExprMap stage2 = collect(coeff, arb);
          for (const auto& [m2, c2] : stage2) add_constraint(sys, c2, mono * m2, source);
          continue;
        } catch (const NonPolynomialError&) {
          // cofactors are not free of the arbitrary elements; keep it whole
        }
      }
    }
    add_constraint(sys, coeff, mono, source);
  }
  sort_constraints(sys);
  return sys;
}

void merge_into(DeterminingSystem& target, const DeterminingSystem& extra) {
  for (const auto& c : extra.constraints) {
    bool found = false;
    for (auto& t : target.constraints)
      if (t.expr == c.expr) {
        t.origins.insert(t.origins.end(), c.origins.begin(), c.origins.end());
        found = true;
        break;
      }
    if (!found) target.constraints.push_back(c);
  }
  sort_constraints(target);
}

DeterminingSystem determining_system(const ProblemSpec& spec, bool arbitrary_mode) {
  VectorField v = general_field(spec);
  DeterminingSystem sys = split(symmetry_condition(v, spec), spec, arbitrary_mode);
  for (const auto& [name, expr] : auxiliary_conditions(v, spec)) merge_into(sys, split(expr, spec, arbitrary_mode, "aux:" + name));
  return sys;
}

void check_dependencies(const VectorField& v, const ProblemSpec& spec) {
  for (const auto& coord : v.coordinates()) {
    auto coords = spec.coordinates();
    if (std::find(coords.begin(), coords.end(), coord) == coords.end())
      throw std::invalid_argument("'" + coord + "' is not a coordinate of the problem");
    const auto& decl = spec.unknown_for(coord);
    std::set<std::string> allowed(decl.args.begin(), decl.args.end());
    allowed.insert(spec.parameters.begin(), spec.parameters.end());
    for (const auto& a : atoms(v.coefficient(coord))) {
      if (a.is_symbol() && !allowed.count(a.name()))
        throw std::invalid_argument("dependency violation: the " + coord + " component may only depend on " + decl.str() +
                                    " but mentions " + a.name());
      if (a.is_func())
        for (const auto& arg : a.args())
          if (!allowed.count(arg))
            throw std::invalid_argument("dependency violation: the " + coord + " component mentions " + a.str() +
                                        " which depends on " + arg);
    }
  }
}

std::vector<Residual> verify(const VectorField& v, const ProblemSpec& spec) {
  check_dependencies(v, spec);
  std::vector<Residual> out;
  Expr cond = symmetry_condition(v, spec);
  if (!cond.is_zero()) {
    auto jets = spec.jet_space().jets();
    for (const auto& [mono, coeff] : collect(cond, jets)) out.push_back({"equation", mono, coeff});
  }
  for (const auto& [name, expr] : auxiliary_conditions(v, spec))
    if (!expr.is_zero()) out.push_back({"aux:" + name, Expr(1), expr});
  return out;
}

// ---------------------------------------------------------------------------

bool FixtureDiff::fixture_implied() const {
  return std::all_of(fixture.begin(), fixture.end(), [](const FixtureEntry& e) { return e.implied; });
}

bool FixtureDiff::generated_implied() const {
  return std::all_of(generated.begin(), generated.end(), [](const GeneratedEntry& e) { return e.implied; });
}

std::vector<FixtureEntry> load_fixture(const std::string& text, const ProblemSpec& spec) {
  std::vector<FixtureEntry> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  Scope scope = spec.scope(true);
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = hash == std::string::npos ? raw : raw.substr(0, hash);
    if (s.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eq = s.find('=');
    Expr e;
    if (eq == std::string::npos) {
      e = parse(s, &scope, line);
    } else {
      e = parse(s.substr(0, eq), &scope, line) - parse(s.substr(eq + 1), &scope, line);
    }
    auto b = s.find_first_not_of(" \t");
    auto en = s.find_last_not_of(" \t\r");
    out.push_back({line, s.substr(b, en - b + 1), e, false});
  }
  return out;
}

std::vector<FixtureEntry> load_fixture_file(const std::string& path, const ProblemSpec& spec) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open fixture " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_fixture(ss.str(), spec);
}

namespace {

using CoeffRow = std::vector<Expr>;

// Coefficients of a linear form in the unknown atoms; the last slot holds the inhomogeneous part.
CoeffRow linear_coefficients(const Expr& e, const std::vector<Expr>& unknowns) {
  CoeffRow row(unknowns.size() + 1, Expr(0));
  for (const auto& [mono, coeff] : collect(e, unknowns)) {
    if (mono.is_one()) {
      row.back() = coeff;
      continue;
    }
    auto it = std::find(unknowns.begin(), unknowns.end(), mono);
    if (it == unknowns.end()) throw NonPolynomialError("constraint is not linear in the unknowns: " + e.str());
    row[static_cast<std::size_t>(it - unknowns.begin())] = coeff;
  }
  return row;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-40, 40), den(1, 11);
  long p = 0;
  while (p == 0) p = num(rng);
  Rational q(p, den(rng));
  q.canonicalize();
  return q;
}

bool in_span(const std::vector<RationalVector>& basis_rows, std::size_t base_rank, const RationalVector& v, std::size_t cols) {
  auto m = RationalMatrix::from_rows(basis_rows, cols);
  m.append_row(v);
  return rank(m) == base_rank;
}

}  // namespace

FixtureDiff diff_fixture(const std::vector<Expr>& generated, std::vector<FixtureEntry> fixture, const ProblemSpec& spec,
                         unsigned points, std::uint64_t seed) {
  std::set<Expr, ExprLess> unknown_set;
  std::set<Expr, ExprLess> other_atoms;
  auto scan = [&](const Expr& e) {
    for (const auto& a : atoms(e)) {
      if (spec.is_unknown(a)) unknown_set.insert(a);
      else other_atoms.insert(a);
    }
  };
  for (const auto& g : generated) scan(g);
  for (const auto& f : fixture) scan(f.expr);
  std::vector<Expr> unknowns(unknown_set.begin(), unknown_set.end());
  std::vector<CoeffRow> grow, frow;
  for (const auto& g : generated) grow.push_back(linear_coefficients(g, unknowns));
  for (const auto& f : fixture) frow.push_back(linear_coefficients(f.expr, unknowns));
  std::size_t cols = unknowns.size() + 1;

  FixtureDiff diff;
  diff.fixture = std::move(fixture);
  for (auto& f : diff.fixture) f.implied = true;
  for (const auto& g : generated) diff.generated.push_back({g, true});

  std::mt19937_64 rng(seed);
  unsigned done = 0;
  for (unsigned attempt = 0; done < points && attempt < points * 20; ++attempt) {
    std::unordered_map<Expr, Rational, ExprHash> point;
    for (const auto& a : other_atoms) point.emplace(a, random_rational(rng));
    Valuation val = [&](const Expr& a) -> std::optional<Rational> {
      auto it = point.find(a);
      if (it == point.end()) return std::nullopt;
      return it->second;
    };
    auto eval_rows = [&](const std::vector<CoeffRow>& rows, std::vector<RationalVector>& out) {
      for (const auto& r : rows) {
        RationalVector v;
        for (const auto& c : r) {
          auto x = evaluate(c, val);
          if (!x) return false;
          v.push_back(*x);
        }
        out.push_back(std::move(v));
      }
      return true;
    };
    std::vector<RationalVector> g, f;
    if (!eval_rows(grow, g) || !eval_rows(frow, f)) continue;
    ++done;
    std::size_t rg = rank(RationalMatrix::from_rows(g, cols));
    std::size_t rf = rank(RationalMatrix::from_rows(f, cols));
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!in_span(g, rg, f[i], cols)) diff.fixture[i].implied = false;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!in_span(f, rf, g[i], cols)) diff.generated[i].implied = false;
  }
  if (done == 0) throw std::runtime_error("no evaluation point gave exact values for the span test");
  return diff;
}

}  // namespace symmkit
