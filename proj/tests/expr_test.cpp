#include <gtest/gtest.h>

#include "support.hpp"
#include "symmkit/parse.hpp"

using namespace symmkit;

namespace {

Expr S(const char* n) { return Expr::symbol(n); }

Scope fin_scope() {
  Scope s;
  s.coordinates = {"t", "x", "u"};
  s.functions = {{"E", {"u"}}, {"h", {"x"}}};
  return s;
}

}  // namespace

TEST(Canonical, LikeTermsMerge) { EXPECT_EQ(S("u") + S("u"), 2 * S("u")); }

TEST(Canonical, ExponentsCancel) { EXPECT_EQ(S("x") * pow(S("x"), Rational(-1)), Expr(1)); }

TEST(Canonical, SelfSubtraction) {
  Scope sc = fin_scope();
  Expr a = parse("E_u*xi1_x", &sc);
  EXPECT_TRUE((a - a).is_zero());
}

TEST(Canonical, NumericFactorsMergeIntoOneCoefficient) {
  Expr e = Expr(2) * S("x") * Rational(3, 4) * S("y");
  ASSERT_EQ(e.kind(), Kind::Product);
  EXPECT_EQ(e.value(), Rational(3, 2));
  for (const auto& f : e.operands()) EXPECT_NE(f.kind(), Kind::Const);
}

TEST(Canonical, NoNestedSumsOrProducts) {
  Expr e = (S("a") + (S("b") + S("c"))) * (S("d") * (S("e") * S("f")));
  for (const auto& t : e.operands()) {
    EXPECT_NE(t.kind(), Kind::Sum);
    for (const auto& f : t.operands()) EXPECT_NE(f.kind(), Kind::Product);
  }
}

TEST(Canonical, OrderIndependent) {
  EXPECT_EQ(S("x") + S("y") * S("z"), S("z") * S("y") + S("x"));
  EXPECT_EQ(exp(S("u")) * S("a"), S("a") * exp(S("u")));
}

TEST(Canonical, Idempotent) {
  testsupport::RandomExpr gen(11, true);
  for (int i = 0; i < 50; ++i) {
    Expr e = testsupport::RandomExpr::build(*gen.tree(3));
    EXPECT_EQ(canonicalize(e), e);
    EXPECT_TRUE(e.is_canonical());
  }
}

TEST(Canonical, RadicalsNeedThePositiveBranch) {
  Expr h = S("h");
  Expr e = pow(pow(h, Rational(2)), Rational(1, 2));
  EXPECT_NE(e, h);
  Assumptions pos;
  pos.positive = {"h"};
  EXPECT_EQ(canonicalize(e, pos), h);
}

TEST(Canonical, ExpOfSumsCombine) {
  EXPECT_EQ(exp(S("u")) * exp(-S("u")), Expr(1));
  EXPECT_EQ(exp(Expr(0)), Expr(1));
}

TEST(Differentiate, ChainRuleThroughExp) { EXPECT_EQ(differentiate(exp(-S("u")), "u"), -exp(-S("u"))); }

TEST(Differentiate, FunctionAtomsFollowDeclaredArguments) {
  Expr E = Expr::func("E", {"u"}), h = Expr::func("h", {"x"});
  EXPECT_EQ(differentiate(E, "u"), Expr::func("E", {"u"}, {1}));
  EXPECT_EQ(differentiate(differentiate(E, "u"), "u"), Expr::func("E", {"u"}, {2}));
  EXPECT_TRUE(differentiate(h, "t").is_zero());
}

TEST(Differentiate, MixedPartialsCommute) {
  Expr chi = Expr::func("chi", {"x", "h"});
  EXPECT_EQ(differentiate(differentiate(chi, "x"), "h"), differentiate(differentiate(chi, "h"), "x"));
}

TEST(Differentiate, RationalPowers) {
  Expr h = S("h");
  EXPECT_EQ(differentiate(pow(h, Rational(1, 2)), "h"), Rational(1, 2) * pow(h, Rational(-1, 2)));
}

TEST(Substitute, ExactCancellation) {
  Expr ut = S("u_t"), h = S("h"), u = S("u");
  EXPECT_TRUE(substitute(ut - h * u, ut, h * u).is_zero());
  EXPECT_TRUE(substitute(S("E") * S("u_xx"), S("u_xx"), Expr(0)).is_zero());
}

TEST(Substitute, CompoundTargetRejected) { EXPECT_ANY_THROW(substitute(S("x"), S("x") + S("y"), Expr(1))); }

TEST(Substitute, PositiveBranchInvariant) {
  Expr c = S("c"), x = S("x"), h = S("h");
  Expr I = pow(h, Rational(1, 2)) * x;
  Expr hval = pow(c / x, Rational(2));
  Assumptions pos;
  pos.positive = {"c", "x"};
  EXPECT_EQ(substitute(I, h, hval, pos), c);
  EXPECT_NE(substitute(I, h, hval), c);
}

TEST(Collect, GroupsPowers) {
  Expr a = S("a"), b = S("b"), ux = S("u_x");
  Expr atoms[1] = {ux};
  auto m = collect(a * pow(ux, Rational(2)) + b * ux + a * pow(ux, Rational(2)), atoms);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at(pow(ux, Rational(2))), 2 * a);
  EXPECT_EQ(m.at(ux), b);
}

TEST(Collect, ConstantInAtom) {
  Expr atoms[1] = {S("u_x")};
  auto m = collect(S("E") * S("u_xx"), atoms);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.at(Expr(1)), S("E") * S("u_xx"));
}

TEST(Collect, NonPolynomialRejected) {
  Expr atoms[1] = {S("u_x")};
  EXPECT_THROW(collect(exp(S("u_x")), atoms), NonPolynomialError);
}

TEST(Collect, RoundTrip) {
  testsupport::RandomExpr gen(5);
  Expr atoms[2] = {S("x"), S("y")};
  for (int i = 0; i < 60; ++i) {
    Expr e = testsupport::RandomExpr::build(*gen.tree(3));
    ExprMap m;
    try {
      m = collect(e, atoms);
    } catch (const NonPolynomialError&) {
      continue;
    }
    Expr back(0);
    for (const auto& [mono, coeff] : m) {
      EXPECT_FALSE(depends_on(coeff, "x") || depends_on(coeff, "y"));
      back += mono * coeff;
    }
    EXPECT_EQ(back, e);
  }
}

TEST(Evaluate, AgreesWithIndependentOracle) {
  testsupport::RandomExpr gen(2024);
  int compared = 0;
  for (int i = 0; i < 100; ++i) {
    auto tree = gen.tree(4);
    Expr e = testsupport::RandomExpr::build(*tree);
    for (int k = 0; k < 5; ++k) {
      Rational pt[3] = {gen.rational(), gen.rational(), gen.rational()};
      auto want = testsupport::RandomExpr::eval(*tree, pt);
      if (!want) continue;
      auto got = evaluate(e, testsupport::at_point(pt));
      ASSERT_TRUE(got) << e.str();
      EXPECT_EQ(*got, *want) << e.str();
      ++compared;
    }
  }
  EXPECT_GT(compared, 300);
}

TEST(Expr, HashFollowsEquality) {
  Expr a = S("x") * S("y") + 1, b = 1 + S("y") * S("x");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
}
