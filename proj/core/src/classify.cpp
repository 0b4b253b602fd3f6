#include "symmkit/classify.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "symmkit/lie.hpp"

namespace symmkit {

Projection project(const VectorField& v, const std::vector<std::string>& coords) {
  for (const auto& c : coords)
    if (std::find(v.coordinates().begin(), v.coordinates().end(), c) == v.coordinates().end())
      throw std::invalid_argument("'" + c + "' is not a coordinate of " + v.str());
  Projection p{v.on(coords), false};
  p.zero = p.field.is_zero();
  return p;
}

namespace {

struct Direction {
  std::string coord;
  bool scaling = false;  // coefficient k*q rather than k
  Expr k;
};

// c = k(frozen) * q or c = k(frozen)
Direction direction(const VectorField& Z, const std::string& q, const std::vector<std::string>& moving) {
  Expr c = Z.coefficient(q);
  Expr Q = Expr::symbol(q);
  Direction d{q, false, c};
  if (depends_on(c, q)) {
    Expr k = canonicalize(c * pow(Q, Rational(-1)));
    if (depends_on(k, q)) throw UnsupportedShapeError("coefficient " + c.str() + " of d/d" + q + " is not k*" + q);
    d.scaling = true;
    d.k = k;
  }
  for (const auto& m : moving)
    if (m != q && depends_on(d.k, m))
      throw UnsupportedShapeError("coefficient " + c.str() + " of d/d" + q + " involves the moving coordinate " + m);
  return d;
}

Expr ratio(const Expr& a, const Expr& b) { return canonicalize(a * pow(b, Rational(-1))); }

// invariant of the pair (r, y): the second coordinate paired against the reference
Expr pair_invariant(const Direction& r, const Direction& y) {
  Expr R = Expr::symbol(r.coord), Y = Expr::symbol(y.coord);
  Expr rho = ratio(y.k, r.k);
  if (r.scaling && y.scaling) {
    if (rho.is_const()) {
      // y^den * r^(-num) keeps exponents integral
      Rational q = rho.value();
      Rational num(q.get_num()), den(q.get_den());
      return pow(Y, den) * pow(R, -num);
    }
    return Y * exp(-rho * log(R));
  }
  if (r.scaling) return Y - rho * log(R);
  if (y.scaling) return Y * exp(-rho * R);
  if (rho.is_const()) {
    Rational q = rho.value();
    return Expr(Rational(q.get_den())) * Y - Expr(Rational(q.get_num())) * R;
  }
  return Y - rho * R;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
  do {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) c.push_back(i);
    out.push_back(c);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

}  // namespace

std::vector<Expr> invariants(const VectorField& Z) {
  const auto& coords = Z.coordinates();
  std::vector<std::string> moving;
  std::vector<Expr> out;
  for (const auto& c : coords) {
    if (Z.coefficient(c).is_zero())
      out.push_back(Expr::symbol(c));
    else
      moving.push_back(c);
  }
  if (moving.empty()) return out;
  std::vector<Direction> dirs;
  for (const auto& m : moving) dirs.push_back(direction(Z, m, moving));
  for (std::size_t i = 1; i < dirs.size(); ++i) out.push_back(pair_invariant(dirs.front(), dirs[i]));
  // keep coordinate order: zero-coefficient coordinates first, then pairs in order
  return out;
}

bool invariant_check(const VectorField& Z, const Expr& I, const Assumptions& assume) {
  return canonicalize(Z.apply(I), assume).is_zero();
}

std::size_t gradient_rank(const std::vector<Expr>& fs, const std::vector<std::string>& coords) {
  if (fs.empty()) return 0;
  ExprMatrix J(fs.size(), coords.size());
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < coords.size(); ++j) J(i, j) = differentiate(fs[i], coords[j]);

  std::mt19937_64 rng(0x9e3779b9ULL);
  std::uniform_int_distribution<long> num(2, 37), den(1, 7);
  std::map<Expr, Rational, ExprLess> point;
  auto value_of = [&](const Expr& atom) -> std::optional<Rational> {
    auto it = point.find(atom);
    if (it == point.end()) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      it = point.emplace(atom, q).first;
    }
    return it->second;
  };
  RationalMatrix M(fs.size(), coords.size());
  bool numeric = true;
  for (std::size_t i = 0; i < fs.size() && numeric; ++i)
    for (std::size_t j = 0; j < coords.size() && numeric; ++j) {
      auto v = evaluate(J(i, j), value_of);
      if (!v) numeric = false;
      else M(i, j) = *v;
    }
  if (numeric) {
    std::size_t r = rank(M);
    if (r == std::min(fs.size(), coords.size())) return r;
  }
  // a vanishing numeric rank may be an unlucky point; the symbolic minors decide
  for (std::size_t k = std::min(fs.size(), coords.size()); k > 0; --k)
    for (const auto& rows : combinations(fs.size(), k))
      for (const auto& cols : combinations(coords.size(), k)) {
        ExprMatrix m(k, k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) m(a, b) = J(rows[a], cols[b]);
        if (!canonicalize(determinant(m)).is_zero()) return k;
      }
  return 0;
}

Feasibility feasibility(const VectorField& Z, const std::vector<Expr>& invs, const ClassNames& n) {
  (void)Z;
  Feasibility f;
  std::optional<Expr> e_with_x;
  for (const auto& I : invs) {
    bool hasE = depends_on(I, n.E), hasH = depends_on(I, n.h), hasX = depends_on(I, n.x), hasU = depends_on(I, n.u);
    if (hasE && !hasH && !hasX && !f.e_invariant) f.e_invariant = I;
    if (hasE && (hasH || hasX) && !e_with_x) e_with_x = I;
    if (hasH && !hasE && !hasU && !f.h_invariant) f.h_invariant = I;
  }
  if (!f.e_invariant) {
    if (e_with_x) {
      f.blocking = e_with_x;
      f.reason = "the invariant " + e_with_x->str() + " that involves " + n.E + " also depends on " + n.x +
                 ": it is not an invariant function of the others, so " + n.E + " cannot be a function of " + n.u + " alone";
    } else {
      f.reason = "no invariant involves " + n.E + ", so " + n.E + " = phi(" + n.u + ") cannot be imposed invariantly";
    }
    return f;
  }
  if (!f.h_invariant) {
    f.reason = "no invariant relates " + n.h + " to " + n.x + " alone";
    return f;
  }
  f.feasible = true;
  f.reason = n.E + " from " + f.e_invariant->str() + ", " + n.h + " from " + f.h_invariant->str();
  return f;
}

std::size_t Classification::feasible_count() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ClassificationRow& r) { return r.feasible; }));
}

ProblemSpec specialized_equation(const ProblemSpec& base, const Expr& h_form, const std::vector<std::string>& parameters,
                                 const ClassNames& n) {
  FunctionDecl phi{"phi", {n.u}};
  ProblemSpec s = base.specialize(n.E, Expr::func(phi.name, phi.args), {phi}, {});
  return s.specialize(n.h, h_form, {}, parameters);
}

namespace {

std::string fresh_constant(const AlgebraFile& file, const ProblemSpec& base) {
  std::set<std::string> taken(file.coordinates.begin(), file.coordinates.end());
  taken.insert(file.parameters.begin(), file.parameters.end());
  taken.insert(base.parameters.begin(), base.parameters.end());
  for (const auto& g : file.generators) taken.insert(g.name);
  std::string c = "c";
  for (int i = 1; taken.count(c); ++i) c = "c" + std::to_string(i);
  return c;
}

// I(x, h) = C solved for h, for I = h^m * x^k (or h itself)
std::optional<Expr> solve_h(const Expr& I, const Expr& C, const ClassNames& n) {
  Expr H = Expr::symbol(n.h), X = Expr::symbol(n.x);
  std::vector<Expr> factors = I.kind() == Kind::Product ? I.operands() : std::vector<Expr>{I};
  Rational m = 0, k = 0;
  for (const auto& f : factors) {
    Expr b = f.kind() == Kind::Power ? f.operands().front() : f;
    Rational e = f.kind() == Kind::Power ? f.value() : Rational(1);
    if (b == H) m += e;
    else if (b == X) k += e;
    else return std::nullopt;
  }
  if (m == 0) return std::nullopt;
  // the constant absorbs any numeric factor and the root
  return canonicalize(C * pow(X, -k / m));
}

std::size_t span_dimension(const std::vector<VectorField>& fields) {
  // sample the fields at a few rational points (parameters included) and take the rank
  std::mt19937_64 rng(0x51a7e5ULL);
  std::uniform_int_distribution<long> num(2, 29), den(1, 5);
  std::map<Expr, Rational, ExprLess> values;
  auto value_of = [&](const Expr& atom) -> std::optional<Rational> {
    auto it = values.find(atom);
    if (it == values.end()) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      it = values.emplace(atom, q).first;
    }
    return it->second;
  };
  std::vector<RationalVector> rows;
  std::size_t width = 0;
  for (const auto& f : fields) {
    RationalVector row;
    for (int p = 0; p < 6; ++p) {
      std::map<Expr, Rational, ExprLess> point;
      for (const auto& c : f.coordinates()) point.emplace(Expr::symbol(c), Rational(num(rng) + p, den(rng)));
      for (const auto& coeff : f.coefficients()) {
        auto v = evaluate(coeff, [&](const Expr& atom) -> std::optional<Rational> {
          auto it = point.find(atom);
          if (it != point.end()) return it->second;
          return value_of(atom);
        });
        row.push_back(v ? *v : Rational(0));
      }
    }
    width = row.size();
    rows.push_back(row);
  }
  return rank(RationalMatrix::from_rows(rows, width));
}

}  // namespace

ClassificationRow classification_row(const ProblemSpec& base, const AlgebraFile& file, const LieAlgebra& alg,
                                     const Representative& A) {
  ClassNames n;
  ClassificationRow row;
  row.sources = {A.name};
  VectorField field = alg.field(A.coeffs);
  Projection p = project(field, file.projection);
  row.Z = p.field;
  if (p.zero) {
    row.reason = "zero projection";
    return row;
  }
  row.invariants = invariants(row.Z);
  for (const auto& I : row.invariants)
    if (!invariant_check(row.Z, I)) row.notes.push_back("internal: " + I.str() + " is not annihilated");
  row.rank = gradient_rank(row.invariants, file.projection);
  Feasibility f = feasibility(row.Z, row.invariants, n);
  row.feasible = f.feasible;
  row.reason = f.reason;
  std::vector<std::string> t_space(base.independents.begin(), base.independents.end());
  t_space.push_back(base.dependent);
  Additional add{A.name, field.on(t_space), false, {}};
  if (f.feasible) {
    row.constant = fresh_constant(file, base);
    row.E_form = Expr::func("phi", {n.u});
    row.h_form = solve_h(*f.h_invariant, Expr::symbol(row.constant), n);
    if (!row.h_form) {
      row.feasible = false;
      row.reason = "cannot solve " + f.h_invariant->str() + " = const for " + n.h;
    } else {
      std::vector<std::string> params = file.parameters;
      params.push_back(row.constant);
      ProblemSpec special = specialized_equation(base, *row.h_form, params, n);
      add.residuals = verify(add.field, special);
      add.verified = add.residuals.empty();
    }
  }
  row.additional.push_back(add);

  for (const auto& v : file.variants) {
    if (v.name != A.name) continue;
    VectorField alt = v.field.on(file.projection);
    std::vector<std::string> kept, lost;
    for (const auto& I : row.invariants) (invariant_check(alt, I) ? kept : lost).push_back(I.str());
    std::string note = "alternative printed form " + alt.str() + " of " + row.Z.str() + ":";
    if (lost.empty()) {
      note += " shares all invariants";
    } else {
      note += " does not annihilate";
      for (const auto& l : lost) note += " " + l;
      auto alt_invs = invariants(alt);
      Feasibility af = feasibility(alt, alt_invs, n);
      note += std::string("; its own invariants lead to the same verdict: ") + (af.feasible == row.feasible ? "yes" : "no");
    }
    row.notes.push_back(note);
  }
  return row;
}

Classification classify(const ProblemSpec& base, const AlgebraFile& file) {
  LieAlgebra alg = file.algebra();
  Classification out;
  for (const auto& A : file.representatives) {
    ClassificationRow row = classification_row(base, file, alg, A);
    if (row.Z.is_zero()) {
      out.excluded.push_back(A.name);
      continue;
    }
    auto same = std::find_if(out.rows.begin(), out.rows.end(), [&](const ClassificationRow& r) { return r.Z == row.Z; });
    if (same == out.rows.end()) {
      out.rows.push_back(std::move(row));
      continue;
    }
    same->sources.push_back(A.name);
    for (auto& a : row.additional) same->additional.push_back(std::move(a));
    for (auto& note : row.notes) same->notes.push_back(std::move(note));
  }
  for (auto& row : out.rows) {
    if (!row.feasible) {
      out.findings.push_back("projection " + row.Z.str() + " of " + row.sources.front() + ": " + row.reason);
      continue;
    }
    if (row.additional.size() > 1) {
      // the principal operator d/dt is admitted by every member of the class
      std::vector<VectorField> fields;
      VectorField dt = row.additional.front().field;
      std::vector<Expr> unit(dt.coordinates().size(), Expr(0));
      unit[0] = Expr(1);
      fields.push_back(VectorField(dt.coordinates(), unit));
      for (const auto& a : row.additional) fields.push_back(a.field);
      std::size_t dim = span_dimension(fields);
      std::string note = std::to_string(row.additional.size()) + " additional operators are listed, and together with the principal " +
                         fields.front().str() + " they span dimension " + std::to_string(dim) + ", so the extension is by " +
                         std::to_string(dim - 1);
      row.notes.push_back(note);
      out.findings.push_back("projection " + row.Z.str() + ": " + note);
    }
    for (const auto& a : row.additional)
      if (!a.verified) out.findings.push_back(a.field.str() + " fails to verify on the specialized equation");
  }
  for (const auto& row : out.rows)
    for (const auto& note : row.notes)
      if (note.rfind("alternative", 0) == 0) out.findings.push_back(note);
  return out;
}

}  // namespace symmkit
