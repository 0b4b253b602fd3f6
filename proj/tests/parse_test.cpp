#include <gtest/gtest.h>

#include "support.hpp"
#include "symmkit/parse.hpp"
#include "symmkit/problem.hpp"

using namespace symmkit;

TEST(Parse, DirectMapping) {
  Expr e = parse("u_t - E*u_xx");
  // without a problem scope, subscripts read as derivative atoms of an undeclared function
  EXPECT_EQ(e, Expr::func("u", {"t"}, {1}) - Expr::symbol("E") * Expr::func("u", {"x"}, {2}));
  auto spec = ProblemSpec::load(testsupport::data("fin.pde"));
  Scope sc = spec.scope();
  EXPECT_EQ(parse("u_t - E_u*u_xx", &sc), Expr::symbol("u_t") - Expr::func("E", {"u"}, {1}) * Expr::symbol("u_xx"));
  Expr r = parse("h^(1/2)*x");
  EXPECT_EQ(r, pow(Expr::symbol("h"), Rational(1, 2)) * Expr::symbol("x"));
}

TEST(Parse, UnbalancedParenthesisReportsPosition) {
  try {
    parse("2*(t");
    FAIL() << "expected a syntax error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_GE(e.column(), 3);
  }
}

TEST(Parse, PrintParseIsIdentityOnCanonicalText) {
  testsupport::RandomExpr gen(99, true);
  for (int i = 0; i < 80; ++i) {
    Expr e = testsupport::RandomExpr::build(*gen.tree(3));
    EXPECT_EQ(parse(e.str()), e) << e.str();
    EXPECT_EQ(parse(e.str()).str(), e.str());
  }
}

TEST(Parse, UndeclaredSymbolInScope) {
  auto spec = ProblemSpec::load(testsupport::data("fin.pde"));
  Scope sc = spec.scope();
  sc.strict = true;
  EXPECT_THROW(parse("q*u_x", &sc), UndeclaredSymbolError);
  EXPECT_NO_THROW(parse("E_u*u_x", &sc));
}

TEST(Parse, IllegalDerivativeOfArbitraryElement) {
  auto spec = ProblemSpec::load(testsupport::data("fin.pde"));
  Scope sc = spec.scope();
  EXPECT_THROW(parse("E_x", &sc), ParseError);
}

TEST(Parse, TotalDerivativeExpandsAtParseTime) {
  auto spec = ProblemSpec::load(testsupport::data("fin.pde"));
  Scope sc = spec.scope();
  EXPECT_EQ(parse("Dx(E*u_x)", &sc), parse("E*u_xx + E_u*u_x^2", &sc));
}

TEST(ProblemSpec, FinEquation) {
  auto spec = ProblemSpec::load(testsupport::data("fin.pde"));
  EXPECT_EQ(spec.independents, (std::vector<std::string>{"t", "x"}));
  EXPECT_EQ(spec.dependent, "u");
  EXPECT_EQ(spec.lhs, Expr::symbol("u_t"));
  EXPECT_EQ(spec.coordinates(), (std::vector<std::string>{"t", "x", "u"}));
  ASSERT_EQ(spec.unknowns.size(), 3u);
}

TEST(ProblemSpec, ConstantConductivityRejected) {
  const char* text =
      "independent t x\n"
      "dependent u\n"
      "arbitrary h(x)\n"
      "parameter k\n"
      "equation u_t = Dx(k*u_x) + h*u\n"
      "ansatz xi1(t,x) xi2(t,x) eta(t,x,u)\n";
  EXPECT_THROW(ProblemSpec::parse(text), SpecError);
}

TEST(ProblemSpec, MissingEquation) {
  EXPECT_THROW(ProblemSpec::parse("independent t x\ndependent u\nansatz a(t,x) b(t,x) c(t,x,u)\n"), SpecError);
}

TEST(ProblemSpec, ErrorsCarryLineNumbers) {
  try {
    ProblemSpec::parse("independent t x\ndependent u\nfrobnicate\n");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ProblemSpec, EquivalenceMode) {
  auto spec = ProblemSpec::load(testsupport::data("fin_equiv.pde"));
  EXPECT_TRUE(spec.equivalence());
  EXPECT_EQ(spec.coordinates(), (std::vector<std::string>{"t", "x", "u", "E", "h"}));
  EXPECT_EQ(spec.candidates.size(), 4u);
  ASSERT_EQ(spec.shapes.size(), 1u);
  EXPECT_EQ(spec.shapes[0].degree, 2);
}
