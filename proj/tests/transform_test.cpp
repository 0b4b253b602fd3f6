#include <gtest/gtest.h>

#include "support.hpp"
#include "symmkit/algfile.hpp"
#include "symmkit/transform.hpp"

using namespace symmkit;
using testsupport::data;

namespace {

const std::vector<std::string> kCoords = {"t", "x", "u", "E", "h"};

VectorField field(const std::vector<std::string>& cs) {
  std::vector<Expr> e;
  Scope sc;
  sc.functions = {{"F", {"E"}}};
  for (const auto& c : cs) e.push_back(parse(c, &sc));
  return VectorField(kCoords, e);
}

Expr S(const char* n) { return Expr::symbol(n); }

}  // namespace

TEST(Flow, Translations) {
  auto T = flow(field({"1", "0", "0", "0", "0"}));
  EXPECT_EQ(T.image("t"), S("t") + S("s"));
  EXPECT_EQ(T.image("h"), S("h"));
}

TEST(Flow, ScalingOfTheFourDimensionalAlgebra) {
  auto T = flow(field({"2*t", "x", "0", "0", "-2*h"}));
  EXPECT_EQ(T.image("t"), S("t") * exp(2 * S("s")));
  EXPECT_EQ(T.image("x"), S("x") * exp(S("s")));
  EXPECT_EQ(T.image("h"), S("h") * exp(-2 * S("s")));
}

TEST(Flow, ExponentialFactorInTheConductivity) {
  // dE/ds = exp(-u) E  =>  E exp(s exp(-u))
  auto T = flow(field({"0", "0", "0", "exp(-u)*E", "0"}));
  EXPECT_EQ(T.image("E"), S("E") * exp(S("s") * exp(-S("u"))));
}

TEST(Flow, ArbitraryFunctionGivesImplicitComponent) {
  auto T = flow(field({"0", "0", "0", "exp(-u)*F(E)", "0"}));
  ASSERT_TRUE(T.has_implicit());
  ASSERT_TRUE(T.implicit[3].has_value());
  EXPECT_EQ(T.implicit[3]->rhs, S("s") * exp(-S("u")));
  // the (t, x, u) part is the identity, so the induced equation is unchanged; the E-component cannot be compared
  auto p = pushforward_equation(T, ProblemSpec::load(data("fin.pde")));
  EXPECT_TRUE(p.fin_form);
  EXPECT_FALSE(p.E_consistent.has_value());
}

TEST(Flow, IdentityAtZeroAndGeneratorRecovered) {
  auto file = load_algebra_file(data("g4.alg"));
  for (const auto& g : file.generators) {
    auto T = flow(g.field);
    for (std::size_t k = 0; k < T.coords.size(); ++k)
      EXPECT_EQ(substitute(T.images[k], S("s"), Expr(0)), S(T.coords[k].c_str())) << g.name;
    EXPECT_EQ(generator_of(T), g.field) << g.name;
  }
}

TEST(Flow, Composition) {
  auto a = flow(field({"1", "0", "0", "0", "0"}));
  auto b = flow(field({"2*t", "x", "0", "0", "-2*h"}));
  auto ab = compose(b, a);
  EXPECT_EQ(ab.image("t"), (S("t") + S("s")) * exp(2 * S("s")));
  EXPECT_TRUE(same_map(compose(a, Transformation::identity(kCoords)), a));
}

TEST(Pushforward, ScalingFamilyPreservesTheClass) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  auto p = pushforward_equation(scaling_family(kCoords), spec);
  EXPECT_TRUE(p.fin_form);
  EXPECT_TRUE(p.first_order.is_zero());
  EXPECT_EQ(p.h_new, Expr::func("h", {"x"}) / S("d1"));
  EXPECT_EQ(p.E_new, pow(S("d3"), Rational(2)) / S("d1") * Expr::func("E", {"u"}));
  ASSERT_TRUE(p.E_consistent.has_value());
  EXPECT_TRUE(*p.E_consistent);
  EXPECT_TRUE(*p.h_consistent);
}

TEST(Pushforward, TimeTranslationChangesNothing) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  auto p = pushforward_equation(flow(field({"1", "0", "0", "0", "0"})), spec);
  EXPECT_TRUE(p.fin_form);
  EXPECT_EQ(p.h_new, Expr::func("h", {"x"}));
  EXPECT_EQ(p.E_new, Expr::func("E", {"u"}));
}

TEST(Pushforward, ScalingFlowIsSelfConsistent) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  auto p = pushforward_equation(flow(field({"2*t", "x", "0", "0", "-2*h"})), spec);
  EXPECT_TRUE(p.fin_form);
  EXPECT_EQ(p.h_new, Expr::func("h", {"x"}) * exp(-2 * S("s")));
  EXPECT_TRUE(p.h_consistent.value_or(false));
}

TEST(Reflection, TimeAloneIsInconsistent) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  auto t = pushforward_equation(reflection(kCoords, {"t"}), spec);
  EXPECT_FALSE(t.E_consistent.value_or(true) && t.h_consistent.value_or(true));
  auto teh = pushforward_equation(reflection(kCoords, {"t", "E", "h"}), spec);
  EXPECT_TRUE(teh.E_consistent.value_or(false));
  EXPECT_TRUE(teh.h_consistent.value_or(false));
  for (const char* c : {"x", "u"}) {
    auto p = pushforward_equation(reflection(kCoords, {c}), spec);
    EXPECT_TRUE(p.fin_form) << c;
    EXPECT_TRUE(p.E_consistent.value_or(false) && p.h_consistent.value_or(false)) << c;
  }
}

TEST(Reflection, UnknownCoordinateRejected) { EXPECT_ANY_THROW(reflection(kCoords, {"q"})); }
