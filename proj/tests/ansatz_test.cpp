#include <gtest/gtest.h>

#include "support.hpp"
#include "symmkit/ansatz.hpp"
#include "symmkit/lie.hpp"

using namespace symmkit;
using testsupport::data;

TEST(Monomials, GradedOrder) {
  auto m = monomials({"t", "x"}, 2);
  ASSERT_EQ(m.size(), 6u);
  EXPECT_EQ(m[0], Expr(1));
  EXPECT_EQ(m[1], Expr::symbol("t"));
  EXPECT_EQ(m[2], Expr::symbol("x"));
  EXPECT_EQ(monomials({"t", "x", "u"}, 3).size(), 20u);
  EXPECT_EQ(monomials({"u"}, 0).size(), 1u);
}

TEST(Instantiate, ShapedEntry) {
  auto spec = ProblemSpec::load(data("fin_equiv.pde"));
  auto ansatz = AnsatzSpec::from_problem(spec, 3);
  auto inst = instantiate(spec, ansatz);
  std::size_t phi = 0;
  for (const auto& c : inst.constants)
    if (c.unknown == "phi") {
      ++phi;
      EXPECT_TRUE(depends_on(c.monomial, "u"));  // the exp(-u) factor
    }
  EXPECT_EQ(phi, 3u);
}

TEST(Solve, FinEquationIsOneDimensional) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  auto sol = solve(spec, 3, true);
  ASSERT_EQ(sol.dimension(), 1u);
  EXPECT_EQ(sol.basis[0], VectorField({"t", "x", "u"}, {Expr(1), Expr(0), Expr(0)}));
  EXPECT_TRUE(sol.stable());
}

TEST(Solve, EveryBasisFieldVerifies) {
  for (const char* f : {"fin.pde", "diffusion.pde", "fin_equiv.pde"}) {
    auto spec = ProblemSpec::load(data(f));
    auto sol = solve(spec, 2, false);
    for (const auto& b : sol.basis) EXPECT_TRUE(verify(b, spec).empty()) << f << ": " << b.str();
  }
}

TEST(Solve, DimensionMonotoneInDegree) {
  auto spec = ProblemSpec::load(data("diffusion.pde"));
  std::size_t last = 0;
  for (int d = 0; d <= 3; ++d) {
    auto sol = solve(spec, d, false);
    EXPECT_GE(sol.dimension(), last);
    last = sol.dimension();
  }
}

TEST(Solve, BasisIsIndependent) {
  auto spec = ProblemSpec::load(data("fin_equiv.pde"));
  auto sol = solve(spec, 3, false);
  RationalMatrix m = RationalMatrix::from_rows(sol.assignments, sol.constants.size());
  EXPECT_EQ(rank(m), sol.dimension());
}

TEST(Solve, EmptySystemKeepsTheFullAnsatz) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  DeterminingSystem empty;
  empty.spec = std::make_shared<const ProblemSpec>(spec);
  AnsatzSpec a = AnsatzSpec::from_problem(spec, 0);
  auto sol = solve(empty, a);
  EXPECT_EQ(sol.dimension(), 3u);  // one constant per unknown at degree 0
}

TEST(Solve, DiffusionHasTranslationsAndScaling) {
  auto spec = ProblemSpec::load(data("diffusion.pde"));
  auto sol = unrestricted_point_check(spec, 3, false);
  EXPECT_GE(sol.dimension(), 3u);
  for (const auto& c : spec.candidates) EXPECT_TRUE(expand_in(sol.basis, c.field).has_value()) << c.name;
}

TEST(Solve, UnrestrictedFinAnsatzStaysOneDimensional) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  EXPECT_EQ(unrestricted_point_check(spec, 3, false).dimension(), 1u);
}

TEST(Solve, Deterministic) {
  auto spec = ProblemSpec::load(data("fin_equiv.pde"));
  auto a = solve(spec, 2, false), b = solve(spec, 2, false);
  ASSERT_EQ(a.dimension(), b.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i) EXPECT_EQ(a.basis[i].str(), b.basis[i].str());
}
