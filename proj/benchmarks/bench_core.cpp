#include <benchmark/benchmark.h>

#include <cmath>

#include "nehari/model.hpp"
#include "nehari/optimizer.hpp"
#include "nehari/scenarios.hpp"
#include "nehari/spectral.hpp"

namespace {

nehari::ScenarioSpec example1_on(int M) {
  nehari::ScenarioSpec s = nehari::example1(8.0);
  s.subdivisions = M;
  return s;
}

void BM_Dst2(benchmark::State& state) {
  const nehari::Grid g(1.0, static_cast<int>(state.range(0)));
  const nehari::ScalarField f =
      nehari::ScalarField::sample(g, [](double x, double y) { return std::cos(x) * std::sin(3 * y); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(nehari::dst2(f));
  }
}
BENCHMARK(BM_Dst2)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_PoissonSolve(benchmark::State& state) {
  const nehari::Grid g(1.0, static_cast<int>(state.range(0)));
  const nehari::ScalarField f =
      nehari::ScalarField::sample(g, [](double x, double y) { return 1.0 + x * y; });
  for (auto _ : state) {
    benchmark::DoNotOptimize(nehari::poisson_solve(f, 1.0));
  }
}
BENCHMARK(BM_PoissonSolve)->Arg(64)->Arg(128);

void BM_DescentDirection(benchmark::State& state) {
  const nehari::ScenarioSpec s = example1_on(static_cast<int>(state.range(0)));
  const nehari::Problem p = nehari::build_problem(s);
  const nehari::Field u = nehari::initial_guess(s, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nehari::descent_direction(u, p));
  }
}
BENCHMARK(BM_DescentDirection)->Arg(64)->Arg(128);

void BM_Iteration(benchmark::State& state) {
  const nehari::ScenarioSpec s = example1_on(64);
  const nehari::Problem p = nehari::build_problem(s);
  const nehari::Field u0 = nehari::initial_guess(s, p);
  nehari::SolverOptions o;
  o.algorithm = static_cast<nehari::Algorithm>(state.range(0));
  o.max_iter = 10;
  o.tol = 1e-300;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nehari::run(p, u0, o));
  }
  state.SetItemsProcessed(state.iterations() * o.max_iter);
  state.SetLabel(std::string(nehari::to_string(o.algorithm)));
}
BENCHMARK(BM_Iteration)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
