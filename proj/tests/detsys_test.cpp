#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"
#include "symmkit/ansatz.hpp"
#include "symmkit/detsys.hpp"

using namespace symmkit;
using testsupport::data;

namespace {

ProblemSpec fin() { return ProblemSpec::load(data("fin.pde")); }

VectorField txu(const std::vector<std::string>& coeffs, const ProblemSpec& spec) {
  std::vector<Expr> cs;
  for (const auto& c : coeffs) cs.push_back(spec.parse_expr(c));
  return VectorField({"t", "x", "u"}, cs);
}

}  // namespace

TEST(Prolong, CharacteristicFormula) {
  auto spec = fin();
  JetSpace js = spec.jet_space();
  // for v = u d/du the prolongation is u_J d/du_J
  auto pv = js.prolong(txu({"0", "0", "u"}, spec));
  EXPECT_EQ(pv.coefficient("u_t"), Expr::symbol("u_t"));
  EXPECT_EQ(pv.coefficient("u_xx"), Expr::symbol("u_xx"));
  // translation prolongs trivially
  auto pt = js.prolong(txu({"1", "0", "0"}, spec));
  for (const auto& j : js.jets()) EXPECT_TRUE(pt.coefficient(j.name()).is_zero());
  // scaling x -> e^s x scales u_x by e^-s
  auto px = js.prolong(txu({"0", "x", "0"}, spec));
  EXPECT_EQ(px.coefficient("u_x"), -Expr::symbol("u_x"));
  EXPECT_EQ(px.coefficient("u_xx"), -2 * Expr::symbol("u_xx"));
}

TEST(Prolong, ProlongedFieldRejected) {
  auto spec = fin();
  JetSpace js = spec.jet_space();
  auto pv = js.prolong(txu({"1", "0", "0"}, spec));
  EXPECT_ANY_THROW(js.prolong(pv));
}

TEST(Verify, TranslationInTimeIsASymmetry) {
  auto spec = fin();
  EXPECT_TRUE(verify(txu({"1", "0", "0"}, spec), spec).empty());
}

TEST(Verify, ScalingOfSpaceIsNot) {
  auto spec = fin();
  EXPECT_FALSE(verify(txu({"0", "x", "0"}, spec), spec).empty());
  EXPECT_FALSE(verify(txu({"0", "1", "0"}, spec), spec).empty());
}

TEST(Verify, DiffusionCandidates) {
  auto spec = ProblemSpec::load(data("diffusion.pde"));
  for (const auto& c : spec.candidates) EXPECT_TRUE(verify(c.field, spec).empty()) << c.name;
}

TEST(DeterminingSystem, SplitReconstructsTheCondition) {
  auto spec = fin();
  auto sys = determining_system(spec, false);
  Expr cond = symmetry_condition(general_field(spec), spec);
  EXPECT_EQ(sys.reconstruct("equation"), cond);
}

TEST(DeterminingSystem, ContainsThePrintedFirstOrderRelation) {
  auto spec = fin();
  auto exprs = determining_system(spec, false).expressions();
  Scope sc = spec.scope();
  EXPECT_NE(std::find(exprs.begin(), exprs.end(), parse("E*xi1_x", &sc)), exprs.end());
}

TEST(DeterminingSystem, ArbitrarySplitIsFiner) {
  auto spec = fin();
  auto plain = determining_system(spec, false);
  auto fine = determining_system(spec, true);
  EXPECT_TRUE(fine.arbitrary_split);
  EXPECT_GE(fine.size(), plain.size());
}

TEST(Fixture, SelfComparisonIsAFullMatch) {
  auto spec = fin();
  auto entries = load_fixture_file(data("fin_determining.fix"), spec);
  ASSERT_EQ(entries.size(), 7u);
  std::vector<Expr> exprs;
  for (const auto& e : entries) exprs.push_back(e.expr);
  auto diff = diff_fixture(exprs, entries, spec);
  EXPECT_TRUE(diff.equivalent());
}

TEST(Fixture, InconsistentLineIsFlagged) {
  auto spec = fin();
  auto entries = load_fixture_file(data("fin_determining.fix"), spec);
  std::vector<Expr> exprs;
  for (const auto& e : entries) exprs.push_back(e.expr);
  auto extra = load_fixture("1 = 0\n", spec);
  ASSERT_EQ(extra.size(), 1u);
  entries.push_back(extra[0]);
  auto diff = diff_fixture(exprs, entries, spec);
  EXPECT_FALSE(diff.fixture_implied());
  EXPECT_FALSE(diff.fixture.back().implied);
}

TEST(Fixture, GenericSplitImpliesEveryPrintedLine) {
  auto spec = fin();
  auto sys = determining_system(spec, true);
  auto diff = diff_fixture(sys.expressions(), load_fixture_file(data("fin_determining.fix"), spec), spec);
  EXPECT_TRUE(diff.fixture_implied());
}

TEST(Fixture, SolutionSetAgreesWithGeneratedSystem) {
  auto spec = fin();
  auto sys = determining_system(spec, false);
  DeterminingSystem printed;
  printed.spec = sys.spec;
  for (const auto& e : load_fixture_file(data("fin_determining.fix"), spec)) printed.constraints.push_back({e.expr, {}});
  auto a = solve(sys, AnsatzSpec::from_problem(spec, 2));
  auto b = solve(printed, AnsatzSpec::from_problem(spec, 2));
  EXPECT_EQ(a.dimension(), b.dimension());
}

TEST(Equivalence, AuxiliaryConditionsCoverFrozenDirections) {
  auto spec = ProblemSpec::load(data("fin_equiv.pde"));
  auto aux = auxiliary_conditions(general_field(spec), spec);
  std::vector<std::string> keys;
  for (const auto& [k, e] : aux) keys.push_back(k);
  for (const char* k : {"E_t", "E_x", "h_t", "h_u"}) EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
}
