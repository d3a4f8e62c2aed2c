#include <benchmark/benchmark.h>

#include "coarse/generators.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/tree.hpp"

namespace {

using namespace coarse;

void BM_GridComponents(benchmark::State& state) {
  const auto side = state.range(0);
  const SpacePtr grid = grid_space({side, side});
  PointSet half;
  for (PointIndex p = 0; p < grid->size(); p += 2) half.push_back(p);
  for (auto _ : state) benchmark::DoNotOptimize(r_components(*grid, half, 1));
  state.SetComplexityN(static_cast<std::int64_t>(grid->size()));
}
BENCHMARK(BM_GridComponents)->RangeMultiplier(2)->Range(16, 64)->Complexity();

void BM_SetDiameter(benchmark::State& state) {
  const SpacePtr grid = grid_space({state.range(0), state.range(0)});
  const PointSet all = all_points(*grid);
  for (auto _ : state) benchmark::DoNotOptimize(set_diameter(*grid, all));
}
BENCHMARK(BM_SetDiameter)->Arg(16)->Arg(32);

void BM_ValidateTree(benchmark::State& state) {
  const SpacePtr tree = random_tree(static_cast<std::size_t>(state.range(0)), 3).as_space();
  for (auto _ : state) benchmark::DoNotOptimize(validate_metric(*tree).valid);
}
BENCHMARK(BM_ValidateTree)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_TreeDistance(benchmark::State& state) {
  const RootedTree tree = random_tree(static_cast<std::size_t>(state.range(0)), 5, TreeShape::caterpillar);
  std::uint32_t u = 0;
  for (auto _ : state) {
    u = (u * 2654435761u + 1) % static_cast<std::uint32_t>(tree.size());
    benchmark::DoNotOptimize(tree.distance(u, static_cast<std::uint32_t>(tree.size() - 1 - u)));
  }
}
BENCHMARK(BM_TreeDistance)->Arg(5000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
