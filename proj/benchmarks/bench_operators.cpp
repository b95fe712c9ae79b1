#include <benchmark/benchmark.h>

#include "pxlab/function_spaces.hpp"
#include "pxlab/linear_solver.hpp"
#include "pxlab/operators.hpp"
#include "pxlab/simulator.hpp"

namespace {

using namespace pxlab;

ScalarField bump(const Grid& g) { return make_initial(g, {"sine", 1.0}); }

void BM_PxLaplacian2D(benchmark::State& state) {
  const auto g = Grid::uniform(2, static_cast<int>(state.range(0)));
  const auto p = sample(ExponentField::sinusoidal(1.5, 0.3), g);
  const auto u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(px_laplacian(u, p));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_PxLaplacian2D)->Arg(32)->Arg(64)->Arg(128);

void BM_Luxemburg(benchmark::State& state) {
  const auto g = Grid::uniform(2, static_cast<int>(state.range(0)));
  const auto p = sample(ExponentField::sinusoidal(1.5, 0.3), g);
  const auto u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(u, p));
}
BENCHMARK(BM_Luxemburg)->Arg(64)->Arg(128);

void BM_SemiImplicitStep(benchmark::State& state) {
  SimConfig c;
  c.grid = Grid::uniform(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  c.exponent = ExponentField::constant(1.5);
  c.r = 2.0;
  const Model m(c);
  const auto u = bump(c.grid);
  for (auto _ : state) benchmark::DoNotOptimize(m.semi_implicit_step(u, 1e-4));
}
BENCHMARK(BM_SemiImplicitStep)->Args({1, 512})->Args({2, 64})->Args({3, 24});

void BM_ExplicitStep(benchmark::State& state) {
  SimConfig c;
  c.grid = Grid::uniform(2, static_cast<int>(state.range(0)));
  c.exponent = ExponentField::constant(2.5);
  c.r = 3.0;
  const Model m(c);
  const auto u = bump(c.grid);
  for (auto _ : state) benchmark::DoNotOptimize(m.explicit_step(u, 1e-6));
}
BENCHMARK(BM_ExplicitStep)->Arg(64)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
