#include <benchmark/benchmark.h>

#include "coarse/groups.hpp"

namespace {

using namespace coarse;

void BM_CayleyBallLattice(benchmark::State& state) {
  const WeightedGeneratingSet gens = WeightedGeneratingSet::standard(integer_lattice(2));
  for (auto _ : state) benchmark::DoNotOptimize(CayleyWindow(gens, state.range(0)).size());
}
BENCHMARK(BM_CayleyBallLattice)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_CayleyBallFreeGroup(benchmark::State& state) {
  const WeightedGeneratingSet gens = WeightedGeneratingSet::standard(free_group(2));
  for (auto _ : state) benchmark::DoNotOptimize(CayleyWindow(gens, state.range(0)).size());
}
BENCHMARK(BM_CayleyBallFreeGroup)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_ExtensionLattice(benchmark::State& state) {
  const GroupPtr z2 = integer_lattice(2);
  const auto g = std::make_shared<const CayleyWindow>(WeightedGeneratingSet::standard(z2), state.range(0));
  const Homomorphism f = coordinate_projection(z2, {1});
  const auto h = std::make_shared<const CayleyWindow>(WeightedGeneratingSet::standard(f.target), state.range(0));
  const ScaleSequence scales({1, 2, 3});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        extension_cover(g, f, h, coordinate_kernel_provider(g, f, h, 0), integer_window_oracle(h), scales).report.ok);
  }
}
BENCHMARK(BM_ExtensionLattice)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
