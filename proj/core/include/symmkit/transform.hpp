#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symmkit/expr.hpp"
#include "symmkit/jet.hpp"
#include "symmkit/problem.hpp"

namespace symmkit {

class UnsupportedFlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonInvertibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// new = solution of  int_{old}^{new} d(alpha)/g(alpha) = rhs
struct ImplicitComponent {
  Expr integrand;  // g, written in the component's own coordinate
  Expr rhs;
  std::string str(const std::string& coord) const;
};

// Point map with each new coordinate a function of its own old coordinate (and frozen ones).
struct Transformation {
  std::string name;
  std::vector<std::string> coords;
  std::vector<Expr> images;
  std::vector<std::optional<ImplicitComponent>> implicit;
  std::string parameter;  // empty for discrete maps
  std::vector<std::string> notes;

  static Transformation identity(std::vector<std::string> coords, std::string name = "id");
  Expr image(const std::string& coord) const;
  bool has_implicit() const;
  // t -> t*exp(2*s), ...
  std::string str() const;
  // second(first(p))
  friend Transformation compose(const Transformation& second, const Transformation& first);
};

Transformation compose(const Transformation& second, const Transformation& first);
bool same_map(const Transformation& a, const Transformation& b);

// One-parameter group generated by v, integrated component by component.
Transformation flow(const VectorField& v, const std::string& s = "s");
// d/ds at s = 0 of every explicit component
VectorField generator_of(const Transformation& T);

// t -> d1*t + d2, x -> d3*x + d4, u -> d5*u, E -> E*d3^2/d1, h -> h/d1
Transformation scaling_family(const std::vector<std::string>& coords);
// sign flips of the listed coordinates
Transformation reflection(const std::vector<std::string>& coords, const std::vector<std::string>& flipped);

struct PushforwardReport {
  bool fin_form = false;
  Expr E_new;  // induced conductivity, written at the old point
  Expr h_new;
  Expr first_order;  // coefficient of the new u_x (must vanish)
  std::string transformed;  // w_t = ... in the new jet variables
  // Agreement of the induced E, h with the transformation's own E, h components.
  std::optional<bool> E_consistent, h_consistent;
  std::vector<std::string> reasons;
};

// Chain-rule rewrite of a base-mode problem of the form u_t = E(u) u_xx + E_u u_x^2 + h(x) u
// under a separable (t,x,u) map.
PushforwardReport pushforward_equation(const Transformation& T, const ProblemSpec& spec);

// The printed transport convention: u_new = U(f(T_t(t), T_x(x))) where U is the u-map.
Expr transport_solution(const Transformation& T, const Expr& f, const ProblemSpec& spec);
std::string transport_signature(const Transformation& T, const std::string& fname, const ProblemSpec& spec);

}  // namespace symmkit
