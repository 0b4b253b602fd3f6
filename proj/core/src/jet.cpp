#include "symmkit/jet.hpp"

#include <algorithm>

namespace symmkit {

VectorField::VectorField(std::vector<std::string> coords, std::vector<Expr> coeffs, int prolonged)
    : coords_(std::move(coords)), coeffs_(std::move(coeffs)), prolonged_(prolonged) {
  if (coords_.size() != coeffs_.size()) throw std::invalid_argument("vector field: coordinate/coefficient count mismatch");
}

Expr VectorField::coefficient(const std::string& coord) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == coord) return coeffs_[i];
  return Expr(0);
}

void VectorField::set(const std::string& coord, const Expr& value) {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == coord) {
      coeffs_[i] = value;
      return;
    }
  coords_.push_back(coord);
  coeffs_.push_back(value);
}

bool VectorField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Expr& c) { return c.is_zero(); });
}

Expr VectorField::apply(const Expr& f) const {
  std::vector<Expr> ts;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    Expr d = differentiate(f, coords_[i]);
    if (!d.is_zero()) ts.push_back(coeffs_[i] * d);
  }
  return add(ts);
}

VectorField VectorField::on(const std::vector<std::string>& coords) const {
  std::vector<Expr> cs;
  for (const auto& c : coords) cs.push_back(coefficient(c));
  return VectorField(coords, cs, prolonged_);
}

VectorField VectorField::map(const std::function<Expr(const Expr&)>& fn) const {
  std::vector<Expr> cs;
  for (const auto& c : coeffs_) cs.push_back(fn(c));
  return VectorField(coords_, cs, prolonged_);
}

std::string VectorField::str() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const Expr& c = coeffs_[i];
    if (c.is_zero()) continue;
    std::string piece;
    std::string d = "d/d" + coords_[i];
    if (c.is_one()) piece = d;
    else if (c.is_const() && c.value() == -1) piece = "-" + d;
    else if (c.kind() == Kind::Sum) piece = "(" + c.str() + ")*" + d;
    else piece = c.str() + "*" + d;
    if (out.empty()) out = piece;
    else if (piece[0] == '-') out += " - " + piece.substr(1);
    else out += " + " + piece;
  }
  return out.empty() ? "0" : out;
}

namespace {
std::vector<std::string> merged_coords(const VectorField& a, const VectorField& b) {
  std::vector<std::string> cs = a.coordinates();
  for (const auto& c : b.coordinates())
    if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
  return cs;
}
}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  auto cs = merged_coords(a, b);
  std::vector<Expr> out;
  for (const auto& c : cs) out.push_back(a.coefficient(c) + b.coefficient(c));
  return VectorField(cs, out, std::max(a.prolonged_, b.prolonged_));
}

VectorField operator-(const VectorField& a, const VectorField& b) { return a + Expr(-1) * b; }

VectorField operator*(const Expr& k, const VectorField& v) {
  std::vector<Expr> out;
  for (const auto& c : v.coeffs_) out.push_back(k * c);
  return VectorField(v.coords_, out, v.prolonged_);
}

bool operator==(const VectorField& a, const VectorField& b) {
  for (const auto& c : merged_coords(a, b))
    if (a.coefficient(c) != b.coefficient(c)) return false;
  return true;
}

// ---------------------------------------------------------------------------

JetSpace::JetSpace(std::vector<std::string> independents, std::string dependent, int order, std::vector<JetVariable> arbitrary)
    : independents_(std::move(independents)), dependent_(std::move(dependent)), order_(order), arbitrary_(std::move(arbitrary)) {
  if (order_ < 1) throw std::invalid_argument("jet order must be positive");
}

std::vector<std::string> JetSpace::base_coordinates() const {
  std::vector<std::string> out = independents_;
  out.push_back(dependent_);
  for (const auto& v : arbitrary_) out.push_back(v.name);
  return out;
}

Expr JetSpace::jet(const std::vector<int>& counts) const {
  return Expr::symbol(jet_symbol_name(dependent_, independents_, counts));
}

namespace {

void compositions(int n, std::size_t parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = n; k >= 0; --k) {
    cur.push_back(k);
    compositions(n - k, parts, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> graded_indices(std::size_t parts, int min_order, int max_order) {
  std::vector<std::vector<int>> out;
  for (int n = min_order; n <= max_order; ++n) {
    std::vector<int> cur;
    compositions(n, parts, cur, out);
  }
  return out;
}

int total(const std::vector<int>& c) {
  int s = 0;
  for (int v : c) s += v;
  return s;
}

}  // namespace

std::vector<std::vector<int>> JetSpace::multi_indices(int max_order) const {
  return graded_indices(independents_.size(), 1, max_order);
}

std::vector<Expr> JetSpace::jets() const {
  std::vector<Expr> out;
  for (const auto& m : multi_indices(order_)) out.push_back(jet(m));
  return out;
}

Expr JetSpace::element_jet(const JetVariable& v, const std::vector<int>& counts) const {
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0 && v.frozen.count(v.base[i])) return Expr(0);
  return Expr::symbol(jet_symbol_name(v.name, v.base, counts));
}

std::vector<std::pair<std::vector<int>, Expr>> JetSpace::element_jets(const JetVariable& v) const {
  std::vector<std::pair<std::vector<int>, Expr>> out;
  for (const auto& m : graded_indices(v.base.size(), 0, v.max_order)) {
    Expr j = element_jet(v, m);
    if (!j.is_zero()) out.emplace_back(m, j);
  }
  return out;
}

std::vector<Expr> JetSpace::element_derivative_atoms() const {
  std::vector<Expr> out;
  for (const auto& v : arbitrary_)
    for (const auto& [m, j] : element_jets(v))
      if (total(m) > 0) out.push_back(j);
  return out;
}

Expr JetSpace::total_derivative(const Expr& f, const std::string& var) const {
  auto it = std::find(independents_.begin(), independents_.end(), var);
  if (it == independents_.end()) throw std::invalid_argument("'" + var + "' is not an independent variable");
  std::size_t vi = static_cast<std::size_t>(it - independents_.begin());
  std::vector<Expr> ts{differentiate(f, var)};
  std::vector<std::vector<int>> all = graded_indices(independents_.size(), 0, order_);
  for (const auto& m : all) {
    Expr uj = jet(m);
    Expr df = differentiate(f, uj.name());
    if (df.is_zero()) continue;
    auto next = m;
    ++next[vi];
    if (total(next) > order_) throw OrderOverflowError("total derivative D" + var + " of " + uj.str() + " exceeds the jet order");
    ts.push_back(jet(next) * df);
  }
  std::vector<int> unit(independents_.size(), 0);
  unit[vi] = 1;
  Expr u_i = jet(unit);
  for (const auto& v : arbitrary_) {
    auto pos = [&](const std::string& name) -> long {
      auto p = std::find(v.base.begin(), v.base.end(), name);
      return p == v.base.end() ? -1 : static_cast<long>(p - v.base.begin());
    };
    long bi = pos(var), bu = pos(dependent_);
    for (const auto& [m, sym] : element_jets(v)) {
      Expr df = differentiate(f, sym.name());
      if (df.is_zero()) continue;
      std::vector<Expr> chain;
      auto step = [&](long b) {
        if (b < 0) return;
        auto next = m;
        ++next[static_cast<std::size_t>(b)];
        Expr j = element_jet(v, next);
        if (j.is_zero()) return;
        if (total(next) > v.max_order) throw OrderOverflowError("total derivative of " + sym.str() + " exceeds its order");
        chain.push_back(b == bu ? j * u_i : j);
      };
      step(bi);
      step(bu);
      ts.push_back(add(chain) * df);
    }
  }
  return add(ts);
}

Expr JetSpace::restricted_derivative(const Expr& f, const std::string& var) const {
  if (!equivalence()) throw std::logic_error("restricted total derivatives need arbitrary elements as jet variables");
  std::vector<Expr> ts{differentiate(f, var)};
  for (const auto& v : arbitrary_) {
    auto p = std::find(v.base.begin(), v.base.end(), var);
    if (p == v.base.end()) continue;
    std::size_t bi = static_cast<std::size_t>(p - v.base.begin());
    for (const auto& [m, sym] : element_jets(v)) {
      Expr df = differentiate(f, sym.name());
      if (df.is_zero()) continue;
      auto next = m;
      ++next[bi];
      Expr j = element_jet(v, next);
      if (j.is_zero()) continue;
      if (total(next) > v.max_order) throw OrderOverflowError("restricted derivative of " + sym.str() + " exceeds its order");
      ts.push_back(j * df);
    }
  }
  return add(ts);
}

VectorField JetSpace::prolong(const VectorField& v) const {
  if (v.prolonged_order() > 0) throw std::logic_error("vector field is already prolonged");
  std::vector<Expr> xi;
  for (const auto& x : independents_) xi.push_back(v.coefficient(x));
  std::map<std::vector<int>, Expr> eta;
  eta[std::vector<int>(independents_.size(), 0)] = v.coefficient(dependent_);
  // D_i xi^k, reused for every order
  std::vector<std::vector<Expr>> dxi(independents_.size(), std::vector<Expr>(independents_.size()));
  for (std::size_t i = 0; i < independents_.size(); ++i)
    for (std::size_t k = 0; k < independents_.size(); ++k) dxi[i][k] = total_derivative(xi[k], independents_[i]);

  std::vector<std::string> coords = v.coordinates();
  std::vector<Expr> coeffs = v.coefficients();
  for (const auto& c : base_coordinates())
    if (std::find(coords.begin(), coords.end(), c) == coords.end()) {
      coords.push_back(c);
      coeffs.push_back(Expr(0));
    }
  for (const auto& m : multi_indices(order_)) {
    std::size_t i = independents_.size();
    while (i-- > 0)
      if (m[i] > 0) break;
    auto parent = m;
    --parent[i];
    std::vector<Expr> ts{total_derivative(eta.at(parent), independents_[i])};
    for (std::size_t k = 0; k < independents_.size(); ++k) {
      if (dxi[i][k].is_zero()) continue;
      auto pk = parent;
      ++pk[k];
      ts.push_back(Expr(-1) * jet(pk) * dxi[i][k]);
    }
    Expr e = add(ts);
    eta[m] = e;
    coords.push_back(jet(m).name());
    coeffs.push_back(e);
  }
  return VectorField(coords, coeffs, order_);
}

std::vector<std::string> JetSpace::auxiliary_coordinates() const {
  std::vector<std::string> out;
  for (const auto& v : arbitrary_)
    for (std::size_t b = 0; b < v.base.size(); ++b)
      if (v.frozen.count(v.base[b])) {
        std::vector<int> m(v.base.size(), 0);
        m[b] = 1;
        out.push_back(jet_symbol_name(v.name, v.base, m));
      }
  return out;
}

VectorField JetSpace::prolong_equivalence(const VectorField& v) const {
  if (!equivalence()) throw std::logic_error("equivalence prolongation needs arbitrary elements as jet variables");
  VectorField out = prolong(v);
  std::vector<std::string> coords = out.coordinates();
  std::vector<Expr> coeffs = out.coefficients();
  for (const auto& a : arbitrary_) {
    Expr zeta = v.coefficient(a.name);
    for (std::size_t j = 0; j < a.base.size(); ++j) {
      const std::string& dir = a.base[j];
      std::vector<Expr> ts{restricted_derivative(zeta, dir)};
      for (std::size_t c = 0; c < a.base.size(); ++c) {
        std::vector<int> m(a.base.size(), 0);
        m[c] = 1;
        Expr vc = element_jet(a, m);
        if (vc.is_zero()) continue;
        Expr dx = restricted_derivative(v.coefficient(a.base[c]), dir);
        if (!dx.is_zero()) ts.push_back(Expr(-1) * vc * dx);
      }
      std::vector<int> m(a.base.size(), 0);
      m[j] = 1;
      coords.push_back(jet_symbol_name(a.name, a.base, m));
      coeffs.push_back(add(ts));
    }
  }
  return VectorField(coords, coeffs, order_);
}

}  // namespace symmkit
