#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "symmkit/cli.hpp"
#include "symmkit/parse.hpp"

using namespace symmkit;
using testsupport::data;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "symmkit");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// every string leaf in the results must re-parse to itself
void expect_reparses(const nlohmann::json& j, const Scope* scope, int& count) {
  if (j.is_string()) {
    const std::string& s = j.get<std::string>();
    Expr e;
    try {
      e = parse(s, scope);
    } catch (const ParseError&) {
      return;  // prose, e.g. a reason string
    }
    EXPECT_EQ(e.str(), s);
    ++count;
  } else if (j.is_array() || j.is_object()) {
    for (const auto& v : j) expect_reparses(v, scope, count);
  }
}

}  // namespace

TEST(Cli, SymmetriesOfTheFinEquation) {
  auto r = run({"symmetries", data("fin.pde")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("d/dt"), std::string::npos);
  EXPECT_NE(r.out.find("dimension 1"), std::string::npos);
}

TEST(Cli, KillingForm) {
  auto r = run({"algebra", "killing", data("g4.alg")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("K = 5*a3*b3"), std::string::npos);
}

TEST(Cli, ClassifyListsInfeasibleRowsAsFindings) {
  auto r = run({"classify", data("fin.pde"), "--json"});
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["results"]["feasible_rows"], 2);
  EXPECT_GE(j["findings"].size(), 2u);
}

TEST(Cli, FixtureMismatchExitsOne) {
  auto r = run({"determining", data("fin.pde"), "--fixture", data("fin_determining.fix")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("fixture-mismatch"), std::string::npos);
}

TEST(Cli, InfeasibleReductionExitsOne) { EXPECT_EQ(run({"optimal", data("g4.alg")}).code, 1); }

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run({"symmetries", "/nonexistent.pde"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"symmetries", data("fin.pde"), "--degree", "-1"}).code, 2);
  EXPECT_EQ(run({"symmetries", data("fin.pde"), "--param", "nonsense"}).code, 2);
  EXPECT_EQ(run({"transform", data("fin.pde"), "Y9"}).code, 2);
}

TEST(Cli, JsonShape) {
  auto r = run({"algebra", "table", data("g4.alg"), "--json"});
  auto j = nlohmann::json::parse(r.out);
  for (const char* k : {"command", "input", "results", "findings"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["command"], "algebra table");
}

TEST(Cli, JsonExpressionsReparse) {
  auto fin = ProblemSpec::load(data("fin.pde"));
  auto equiv = ProblemSpec::load(data("fin_equiv.pde"));
  Scope fs = fin.scope(true), es = equiv.scope(true);
  int count = 0;
  for (const auto& args : std::vector<std::vector<std::string>>{{"determining", data("fin.pde")},
                                                                {"symmetries", data("fin.pde")},
                                                                {"transform", data("fin.pde"), "Y3"}}) {
    auto a = args;
    a.push_back("--json");
    expect_reparses(nlohmann::json::parse(run(a).out)["results"], &fs, count);
  }
  expect_reparses(nlohmann::json::parse(run({"equivalence", data("fin_equiv.pde"), "--json"}).out)["results"], &es, count);
  expect_reparses(nlohmann::json::parse(run({"algebra", "adjoint", data("g4.alg"), "--json"}).out)["results"], nullptr, count);
  EXPECT_GT(count, 50);
}

TEST(Cli, ByteIdenticalReruns) {
  for (const auto& args : std::vector<std::vector<std::string>>{{"classify", data("fin.pde"), "--json"},
                                                                {"optimal", data("g4.alg")},
                                                                {"equivalence", data("fin_equiv.pde")}}) {
    auto a = run(args), b = run(args);
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST(Cli, ParamFixesAParameter) {
  auto r = run({"classify", data("fin.pde"), "--param", "beta=1", "--json"});
  EXPECT_NE(r.code, 2);
  EXPECT_EQ(r.out.find("beta"), std::string::npos);
}

TEST(Cli, TransformReportsTheMap) {
  auto r = run({"transform", data("fin.pde"), "scaling", "--json"});
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["results"]["pushforward"]["fin_form"].get<bool>());
}
