#include <benchmark/benchmark.h>

#include <string>

#include "symmkit/algfile.hpp"
#include "symmkit/ansatz.hpp"
#include "symmkit/classify.hpp"
#include "symmkit/detsys.hpp"
#include "symmkit/lie.hpp"
#include "symmkit/parse.hpp"

using namespace symmkit;

namespace {

std::string data(const char* name) { return std::string(SYMMKIT_DATA_DIR) + "/" + name; }

void BM_Canonicalize(benchmark::State& state) {
  Expr x = Expr::symbol("x"), y = Expr::symbol("y");
  for (auto _ : state) {
    Expr e = pow(x + y + 1, Rational(state.range(0))) - pow(x - y, Rational(state.range(0)));
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_Canonicalize)->Arg(2)->Arg(4)->Arg(6);

void BM_DeterminingSystem(benchmark::State& state) {
  auto spec = ProblemSpec::load(data(state.range(0) ? "fin_equiv.pde" : "fin.pde"));
  for (auto _ : state) benchmark::DoNotOptimize(determining_system(spec, false));
}
BENCHMARK(BM_DeterminingSystem)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  int degree = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec, degree, false));
}
BENCHMARK(BM_Solve)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_SolveEquivalence(benchmark::State& state) {
  auto spec = ProblemSpec::load(data("fin_equiv.pde"));
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec, 3, false));
}
BENCHMARK(BM_SolveEquivalence)->Unit(benchmark::kMillisecond);

void BM_AdjointTable(benchmark::State& state) {
  auto alg = load_algebra_file(data("g4.alg")).algebra();
  Expr s = Expr::symbol("s");
  for (auto _ : state)
    for (std::size_t i = 0; i < alg.dim(); ++i) benchmark::DoNotOptimize(alg.adjoint_matrix(i, s));
}
BENCHMARK(BM_AdjointTable);

void BM_ReductionSearch(benchmark::State& state) {
  auto alg = load_algebra_file(data("g4.alg")).algebra();
  Expr a1 = Expr::symbol("a1");
  ExprVector start = {a1, Expr(0), Expr(0), Expr(1)}, target = {Expr(0), Expr(0), Expr(0), Expr(1)};
  for (auto _ : state) benchmark::DoNotOptimize(search_reduction(alg, start, target, {"a1"}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ReductionSearch)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  auto spec = ProblemSpec::load(data("fin.pde"));
  auto file = load_algebra_file(data("g4.alg"));
  for (auto _ : state) benchmark::DoNotOptimize(classify(spec, file));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

}  // namespace

// the packaged benchmark_main archive is LTO bytecode from another compiler build
BENCHMARK_MAIN();
