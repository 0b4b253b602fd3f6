#pragma once

#include <memory>
#include <string>
#include <vector>

#include "symmkit/expr.hpp"
#include "symmkit/jet.hpp"
#include "symmkit/problem.hpp"

namespace symmkit {

// Where a constraint came from: raw coefficient = scale * constraint, attached to `monomial`.
struct Provenance {
  Expr monomial;
  Rational scale;
  std::string source;
};

struct Constraint {
  Expr expr;
  std::vector<Provenance> origins;
};

struct DeterminingSystem {
  std::shared_ptr<const ProblemSpec> spec;
  std::vector<Constraint> constraints;
  bool arbitrary_split = false;

  std::vector<Expr> expressions() const;
  std::size_t size() const { return constraints.size(); }
  // sum over origins of monomial * scale * constraint for one source
  Expr reconstruct(const std::string& source = "equation") const;
};

// Field whose components are the declared unknown functions.
VectorField general_field(const ProblemSpec& spec);

// pr(v)(Delta) with the leading derivative eliminated on solutions
Expr symmetry_condition(const VectorField& v, const ProblemSpec& spec);
// In equivalence mode: prolongation coefficients along frozen directions (E_t, E_x, h_t, h_u), which must vanish.
std::vector<std::pair<std::string, Expr>> auxiliary_conditions(const VectorField& v, const ProblemSpec& spec);

// Stage 1 collects jet monomials; with `arbitrary_mode` each cofactor is split
// again by monomials in the arbitrary elements the unknowns do not depend on.
DeterminingSystem split(const Expr& condition, const ProblemSpec& spec, bool arbitrary_mode,
                        const std::string& source = "equation");
void merge_into(DeterminingSystem& target, const DeterminingSystem& extra);

DeterminingSystem determining_system(const ProblemSpec& spec, bool arbitrary_mode);

struct Residual {
  std::string source;
  Expr monomial;
  Expr expr;
};

// Empty iff v is a symmetry (or, in equivalence mode, an equivalence generator).
std::vector<Residual> verify(const VectorField& v, const ProblemSpec& spec);
void check_dependencies(const VectorField& v, const ProblemSpec& spec);

struct FixtureEntry {
  int line = 0;
  std::string text;
  Expr expr;
  bool implied = false;
};

struct GeneratedEntry {
  Expr expr;
  bool implied = false;
};

struct FixtureDiff {
  std::vector<FixtureEntry> fixture;
  std::vector<GeneratedEntry> generated;
  bool fixture_implied() const;
  bool generated_implied() const;
  bool equivalent() const { return fixture_implied() && generated_implied(); }
};

std::vector<FixtureEntry> load_fixture(const std::string& text, const ProblemSpec& spec);
std::vector<FixtureEntry> load_fixture_file(const std::string& path, const ProblemSpec& spec);

// Linear-span comparison over the field of coefficient functions, decided
// exactly at several seeded random rational points.
FixtureDiff diff_fixture(const std::vector<Expr>& generated, std::vector<FixtureEntry> fixture, const ProblemSpec& spec,
                         unsigned points = 3, std::uint64_t seed = 0x5eed1234);

}  // namespace symmkit
