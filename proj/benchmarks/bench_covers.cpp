#include <benchmark/benchmark.h>

#include "coarse/combinators.hpp"
#include "coarse/cover.hpp"
#include "coarse/free_product.hpp"
#include "coarse/generators.hpp"
#include "coarse/oracles.hpp"
#include "coarse/solver.hpp"
#include "coarse/tree.hpp"

namespace {

using namespace coarse;

void BM_TreeCover(benchmark::State& state) {
  const RootedTree tree = random_tree(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(tree_cover(tree, state.range(1)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TreeCover)->Args({5000, 1})->Args({5000, 16})->Args({50000, 4})->Unit(benchmark::kMillisecond);

void BM_VerifyGridWitness(benchmark::State& state) {
  const auto side = state.range(0);
  const ApcOracle oracle = grid_oracle(grid_space({side, side}), {side, side});
  const ScaleSequence scales({1, 2, 4});
  const CoverWitness w = oracle(scales.fresh());
  for (auto _ : state) benchmark::DoNotOptimize(verify_apc_witness(*oracle.space, scales.fresh(), w).ok);
}
BENCHMARK(BM_VerifyGridWitness)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ExactSolverPath(benchmark::State& state) {
  const SpacePtr path = path_space(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_families_at_scale(*path, 1, Length(0)).families);
}
BENCHMARK(BM_ExactSolverPath)->DenseRange(4, 12, 4);

void BM_ExactMinimalBoundCube(benchmark::State& state) {
  const SpacePtr cube = grid_space(std::vector<std::int64_t>(static_cast<std::size_t>(state.range(0)), 2));
  SolverOptions options;
  options.point_cap = 32;
  for (auto _ : state) benchmark::DoNotOptimize(exact_minimal_bound(*cube, 2, 2, options).bound);
}
BENCHMARK(BM_ExactMinimalBoundCube)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_ProductIntervals(benchmark::State& state) {
  const ApcOracle x = interval_oracle(interval_space(0, state.range(0)));
  const ApcOracle y = interval_oracle(interval_space(0, state.range(0)));
  const ScaleSequence scales({1, 2, 4, 8, 16});
  for (auto _ : state) benchmark::DoNotOptimize(product_cover(x, y, scales).witness.size());
}
BENCHMARK(BM_ProductIntervals)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FreeProductCover(benchmark::State& state) {
  const SpacePtr base = with_basepoint(matrix_space({"x0", "a", "b"}, {{Length(0), Length(1), Length(2)},
                                                                       {Length(1), Length(0), Length(2)},
                                                                       {Length(2), Length(2), Length(0)}}),
                                       0);
  const FreeProductWindow window(base, static_cast<std::size_t>(state.range(0)), state.range(1));
  const ScaleSequence scales({1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(free_product_cover(window, exact_oracle(base), scales).report.ok);
  state.counters["words"] = static_cast<double>(window.size());
}
BENCHMARK(BM_FreeProductCover)->Args({3, 9})->Args({6, 12})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
