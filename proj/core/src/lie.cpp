#include "symmkit/lie.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace symmkit {

ExprMatrix ExprMatrix::from(const RationalMatrix& m) {
  ExprMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = Expr(m(r, c));
  return out;
}

ExprMatrix ExprMatrix::identity(std::size_t n) {
  ExprMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = Expr(1);
  return out;
}

ExprVector ExprMatrix::column(std::size_t c) const {
  ExprVector v;
  for (std::size_t r = 0; r < rows; ++r) v.push_back((*this)(r, c));
  return v;
}

ExprMatrix ExprMatrix::map(const std::function<Expr(const Expr&)>& fn) const {
  ExprMatrix out = *this;
  for (auto& e : out.data) e = fn(e);
  return out;
}

Expr ExprMatrix::trace() const {
  std::vector<Expr> d;
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) d.push_back((*this)(i, i));
  return add(d);
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix shape mismatch");
  ExprMatrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      std::vector<Expr> ts;
      for (std::size_t k = 0; k < a.cols; ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) ts.push_back(a(i, k) * b(k, j));
      out(i, j) = add(ts);
    }
  return out;
}

ExprVector operator*(const ExprMatrix& a, const ExprVector& v) {
  if (a.cols != v.size()) throw std::invalid_argument("matrix shape mismatch");
  ExprVector out;
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::vector<Expr> ts;
    for (std::size_t k = 0; k < a.cols; ++k)
      if (!a(i, k).is_zero() && !v[k].is_zero()) ts.push_back(a(i, k) * v[k]);
    out.push_back(add(ts));
  }
  return out;
}

Expr determinant(const ExprMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant of a non-square matrix");
  std::vector<std::size_t> perm(m.rows);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Expr> ts;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) ++inversions;
    std::vector<Expr> fs{Expr(inversions % 2 ? -1 : 1)};
    bool zero = false;
    for (std::size_t i = 0; i < perm.size() && !zero; ++i) {
      zero = m(i, perm[i]).is_zero();
      fs.push_back(m(i, perm[i]));
    }
    if (!zero) ts.push_back(mul(fs));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return add(ts);
}

VectorField bracket(const VectorField& X, const VectorField& Y) {
  if (X.coordinates() != Y.coordinates()) throw std::invalid_argument("bracket of fields on different spaces");
  std::vector<Expr> cs;
  for (const auto& q : X.coordinates()) cs.push_back(X.apply(Y.coefficient(q)) - Y.apply(X.coefficient(q)));
  return VectorField(X.coordinates(), cs);
}

std::optional<RationalVector> expand_in(const std::vector<VectorField>& basis, const VectorField& v) {
  std::size_t n = basis.size();
  std::map<std::pair<std::string, Expr>, std::pair<RationalVector, Rational>,
           std::function<bool(const std::pair<std::string, Expr>&, const std::pair<std::string, Expr>&)>>
      rows([](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return compare(a.second, b.second) < 0;
      });
  auto slot = [&](const std::string& q, const Expr& m) -> std::pair<RationalVector, Rational>& {
    auto& r = rows[{q, m}];
    if (r.first.empty()) r.first.assign(n, Rational(0));
    return r;
  };
  for (const auto& q : v.coordinates()) {
    for (std::size_t k = 0; k < n; ++k)
      for (const auto& t : terms(basis[k].coefficient(q))) {
        auto [r, m] = split_coefficient(t);
        slot(q, m).first[k] += r;
      }
    for (const auto& t : terms(v.coefficient(q))) {
      auto [r, m] = split_coefficient(t);
      slot(q, m).second += r;
    }
  }
  std::vector<RationalVector> m;
  RationalVector b;
  for (auto& [key, rb] : rows) {
    m.push_back(rb.first);
    b.push_back(rb.second);
  }
  if (m.empty()) return RationalVector(n, Rational(0));
  return solve(RationalMatrix::from_rows(m, n), b);
}

ExprVector symbolic_vector(const std::string& prefix, std::size_t n) {
  ExprVector v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back(Expr::symbol(prefix + std::to_string(i)));
  return v;
}

ExprVector to_exprs(const RationalVector& v) {
  ExprVector out;
  for (const auto& x : v) out.push_back(Expr(x));
  return out;
}

bool is_zero(const ExprVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Expr& e) { return e.is_zero(); });
}

LieAlgebra LieAlgebra::from_basis(std::vector<std::string> names, std::vector<VectorField> basis) {
  if (names.size() != basis.size()) throw std::invalid_argument("one name per basis field");
  if (!basis.empty()) {
    std::vector<RationalVector> rows;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto others = basis;
      others.erase(others.begin() + static_cast<long>(i));
      if (!others.empty() && expand_in(others, basis[i])) throw std::invalid_argument("basis fields are linearly dependent");
      if (basis[i].is_zero()) throw std::invalid_argument("zero field in basis");
    }
  }
  LieAlgebra a;
  a.names_ = std::move(names);
  a.basis_ = std::move(basis);
  std::size_t n = a.basis_.size();
  a.c_.assign(n, std::vector<RationalVector>(n, RationalVector(n, Rational(0))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      VectorField b = symmkit::bracket(a.basis_[i], a.basis_[j]);
      auto coords = expand_in(a.basis_, b);
      if (!coords)
        throw NonClosureError("[" + a.names_[i] + "," + a.names_[j] + "] = " + b.str() + " is not in the span of the basis");
      a.c_[i][j] = *coords;
      for (std::size_t k = 0; k < n; ++k) a.c_[j][i][k] = -(*coords)[k];
    }
  return a;
}

std::size_t LieAlgebra::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::invalid_argument("no basis element named " + name);
  return static_cast<std::size_t>(it - names_.begin());
}

ExprVector LieAlgebra::bracket(const ExprVector& a, const ExprVector& b) const {
  std::size_t n = dim();
  std::vector<std::vector<Expr>> parts(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i].is_zero() || b[j].is_zero()) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (c_[i][j][k] != 0) parts[k].push_back(Expr(c_[i][j][k]) * a[i] * b[j]);
    }
  ExprVector out;
  for (auto& p : parts) out.push_back(add(p));
  return out;
}

VectorField LieAlgebra::field(const ExprVector& coeffs) const {
  if (basis_.empty()) return {};
  VectorField out(basis_.front().coordinates(), std::vector<Expr>(basis_.front().coordinates().size(), Expr(0)));
  for (std::size_t k = 0; k < dim(); ++k)
    if (!coeffs[k].is_zero()) out = out + coeffs[k] * basis_[k];
  return out;
}

std::string LieAlgebra::combination(const ExprVector& coeffs) const {
  std::string out;
  for (std::size_t k = 0; k < coeffs.size() && k < names_.size(); ++k) {
    const Expr& c = coeffs[k];
    if (c.is_zero()) continue;
    std::string term;
    if (c.is_one()) term = names_[k];
    else if (c == Expr(-1)) term = "-" + names_[k];
    else if (c.kind() == Kind::Sum) term = "(" + c.str() + ")*" + names_[k];
    else term = c.str() + "*" + names_[k];
    if (out.empty()) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

RationalMatrix LieAlgebra::ad(std::size_t i) const {
  std::size_t n = dim();
  RationalMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(k, j) = c_[i][j][k];
  return m;
}

ExprMatrix LieAlgebra::ad(const ExprVector& v) const {
  std::size_t n = dim();
  ExprMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    ExprVector e(n, Expr(0));
    e[j] = Expr(1);
    ExprVector col = bracket(v, e);
    for (std::size_t k = 0; k < n; ++k) m(k, j) = col[k];
  }
  return m;
}

RationalMatrix LieAlgebra::killing_matrix() const {
  std::size_t n = dim();
  RationalMatrix k(n, n);
  std::vector<RationalMatrix> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(ad(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RationalMatrix p = ads[i] * ads[j];
      Rational tr = 0;
      for (std::size_t d = 0; d < n; ++d) tr += p(d, d);
      k(i, j) = tr;
    }
  return k;
}

Expr LieAlgebra::killing_form(const ExprVector& a, const ExprVector& b) const {
  return (ad(a) * ad(b)).trace();
}

std::vector<std::vector<RationalVector>> LieAlgebra::derived_series() const {
  std::size_t n = dim();
  std::vector<RationalVector> current;
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector e(n, Rational(0));
    e[i] = 1;
    current.push_back(e);
  }
  std::vector<std::vector<RationalVector>> series{current};
  while (!current.empty()) {
    std::vector<RationalVector> next;
    for (std::size_t p = 0; p < current.size(); ++p)
      for (std::size_t q = p + 1; q < current.size(); ++q) {
        RationalVector r(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            if (current[p][i] == 0 || current[q][j] == 0) continue;
            for (std::size_t k = 0; k < n; ++k) r[k] += current[p][i] * current[q][j] * c_[i][j][k];
          }
        next.push_back(r);
      }
    next = next.empty() ? next : row_space(RationalMatrix::from_rows(next, n));
    bool stalled = next.size() == current.size();
    series.push_back(next);
    if (stalled) break;
    current = next;
  }
  return series;
}

bool LieAlgebra::is_solvable() const { return derived_series().back().empty(); }

bool LieAlgebra::is_semisimple() const { return dim() > 0 && symmkit::determinant(killing_matrix()) != 0; }

bool LieAlgebra::jacobi() const {
  std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto &X = basis_[i], &Y = basis_[j], &Z = basis_[k];
        VectorField s = symmkit::bracket(X, symmkit::bracket(Y, Z)) + symmkit::bracket(Y, symmkit::bracket(Z, X)) +
                        symmkit::bracket(Z, symmkit::bracket(X, Y));
        if (!s.is_zero()) return false;
      }
  return true;
}

bool LieAlgebra::jacobi_constants() const {
  std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) {
          Rational s = 0;
          for (std::size_t l = 0; l < n; ++l)
            s += c_[j][k][l] * c_[i][l][m] + c_[k][i][l] * c_[j][l][m] + c_[i][j][l] * c_[k][l][m];
          if (s != 0) return false;
        }
  return true;
}

namespace {

RationalMatrix shifted(const RationalMatrix& a, const Rational& lambda) {
  RationalMatrix m = a;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= lambda;
  return m;
}

RationalVector times(const RationalMatrix& m, const RationalVector& v) {
  RationalVector out(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

}  // namespace

ExprMatrix LieAlgebra::adjoint_matrix(std::size_t i, const Expr& s) const {
  std::size_t n = dim();
  RationalMatrix a = ad(i);
  // eigenvalues are bounded by the max row sum
  Rational bound = 0;
  for (std::size_t r = 0; r < n; ++r) {
    Rational sum = 0;
    for (std::size_t c = 0; c < n; ++c) sum += abs(a(r, c));
    bound = std::max(bound, sum);
  }
  mpz_class b = bound.get_num() / bound.get_den() + 1;
  if (b > 1000) throw UnsupportedSeriesError("ad(" + names_[i] + ") has entries too large for the eigenvalue scan");
  long lim = b.get_si();

  std::vector<RationalVector> P;  // generalized eigenvectors
  std::vector<ExprVector> W;      // their images under exp(-s ad)
  for (long lam = -lim; lam <= lim; ++lam) {
    RationalMatrix N = shifted(a, Rational(lam));
    RationalMatrix Nn = RationalMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) Nn = Nn * N;
    auto ker = nullspace(Nn);
    Expr scale = exp(Expr(Rational(-lam)) * s);
    for (const auto& v : ker) {
      P.push_back(v);
      std::vector<std::vector<Expr>> parts(n);
      RationalVector nv = v;
      Expr coeff(1);
      for (std::size_t k = 0; k < n; ++k) {
        bool nz = false;
        for (std::size_t r = 0; r < n; ++r)
          if (nv[r] != 0) {
            parts[r].push_back(coeff * Expr(nv[r]));
            nz = true;
          }
        if (!nz) break;
        nv = times(N, nv);
        coeff = coeff * (-s) * Expr(Rational(1, static_cast<long>(k + 1)));
      }
      ExprVector w;
      for (auto& p : parts) w.push_back(scale * add(p));
      W.push_back(w);
    }
  }
  if (P.size() != n)
    throw UnsupportedSeriesError("ad(" + names_[i] + ") is neither nilpotent nor split over integer eigenvalues");

  RationalMatrix pm(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) pm(r, c) = P[c][r];
  ExprMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector e(n, Rational(0));
    e[j] = 1;
    auto coeffs = solve(pm, e);
    if (!coeffs) throw UnsupportedSeriesError("singular eigenvector basis");
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<Expr> ts;
      for (std::size_t m = 0; m < n; ++m)
        if ((*coeffs)[m] != 0 && !W[m][r].is_zero()) ts.push_back(Expr((*coeffs)[m]) * W[m][r]);
      out(r, j) = add(ts);
    }
  }
  return out;
}

std::string ReductionStep::str(const LieAlgebra& alg) const {
  if (kind == Kind::Scale) return "scale by " + value.str();
  return "Ad(exp(s*" + alg.names()[generator] + ")), s = " + value.str();
}

ExprVector reduce(const LieAlgebra& alg, const ExprVector& start, const std::vector<ReductionStep>& steps) {
  if (start.size() != alg.dim()) throw std::invalid_argument("coefficient vector length must equal the algebra dimension");
  ExprVector v = start;
  for (const auto& st : steps) {
    if (st.kind == ReductionStep::Kind::Scale) {
      for (auto& x : v) x = x * st.value;
    } else {
      v = alg.adjoint_matrix(st.generator, st.value) * v;
    }
  }
  return v;
}

bool provably_nonzero(const Expr& e, const std::set<std::string>& nonzero) {
  switch (e.kind()) {
    case Kind::Const:
      return !e.is_zero();
    case Kind::Symbol:
      return nonzero.count(e.name()) > 0;
    case Kind::Exp:
      return true;
    case Kind::Power:
      return provably_nonzero(e.operands().front(), nonzero);
    case Kind::Product:
      return std::all_of(e.operands().begin(), e.operands().end(), [&](const Expr& f) { return provably_nonzero(f, nonzero); });
    default:
      return false;
  }
}

SearchResult search_reduction(const LieAlgebra& alg, const ExprVector& start, const ExprVector& target,
                              const std::set<std::string>& nonzero, int depth) {
  std::size_t n = alg.dim();
  std::vector<std::vector<ExprMatrix>> mats(static_cast<std::size_t>(std::max(depth, 0)));
  for (int k = 0; k < depth; ++k)
    for (std::size_t g = 0; g < n; ++g)
      mats[static_cast<std::size_t>(k)].push_back(alg.adjoint_matrix(g, Expr::symbol("s" + std::to_string(k + 1))));
  SearchResult res;
  std::vector<std::size_t> seq;
  std::function<void(const ExprVector&)> rec = [&](const ExprVector& v) {
    ++res.tried;
    std::optional<std::size_t> blocked;
    for (std::size_t k = 0; k < n && !blocked; ++k)
      if (target[k].is_zero() && provably_nonzero(v[k], nonzero)) blocked = k;
    if (blocked) res.obstructions.emplace_back(seq, *blocked);
    else res.open.push_back(seq);
    if (seq.size() <= 1) res.samples.emplace_back(seq, v);
    if (static_cast<int>(seq.size()) == depth) return;
    for (std::size_t g = 0; g < n; ++g) {
      seq.push_back(g);
      rec(mats[seq.size() - 1][g] * v);
      seq.pop_back();
    }
  };
  rec(start);
  return res;
}

}  // namespace symmkit
