#include <benchmark/benchmark.h>

#include <cmath>

#include "smm/grid_ops.hpp"
#include "smm/solver.hpp"

namespace {

using namespace smm;

void BM_AssembleAndApply(benchmark::State& state) {
    const auto space = ModelSpace::spherical(3, 6, profiles::cosine(0.3, -0.3), M_PI);
    const auto grid = RadialGrid::for_space(space, static_cast<int>(state.range(0)));
    const Field u = Field::sample(grid, [](double r) { return 2.0 + std::cos(r); });
    for (auto _ : state) benchmark::DoNotOptimize(assemble_witten(space, grid).apply(u));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleAndApply)->RangeMultiplier(4)->Range(128, 8192)->Complexity(benchmark::oN);

void BM_BochnerIdentity(benchmark::State& state) {
    const auto space = ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 2.0);
    const auto grid = RadialGrid::for_space(space, 512);
    const Manufactured mf = manufacture(space, exact_profiles::gaussian_bump(1.0, 0.5, 1.0), grid);
    Field h(grid);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::log(mf.exact[i]);
    for (auto _ : state) benchmark::DoNotOptimize(check_bochner_identity(h, space, 1.5, mf.family));
}
BENCHMARK(BM_BochnerIdentity);

}  // namespace
