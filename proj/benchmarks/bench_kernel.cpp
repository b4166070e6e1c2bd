#include <benchmark/benchmark.h>

#include "smm/inequality_kernel.hpp"

namespace {

using namespace smm;

void BM_AlgebraMonteCarlo(benchmark::State& state) {
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(algebra_monte_carlo(100000, 1, 1e-10, threads));
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_AlgebraMonteCarlo)->Arg(1)->Arg(4)->UseRealTime();

void BM_QuinticCutoff(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(quintic_cutoff(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_QuinticCutoff)->Arg(100000);

}  // namespace
