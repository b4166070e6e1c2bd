#include <benchmark/benchmark.h>

#include "smm/solver.hpp"

namespace {

using namespace smm;

void BM_SolveGaussianSqrt(benchmark::State& state) {
    const auto space = ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 2.0);
    PowerSum family;
    family.terms.push_back({profiles::constant(1.0), 0.5});
    const auto problem = make_problem(space, family, 0.5);
    const auto grid = RadialGrid::for_space(space, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_newton(problem, grid));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveGaussianSqrt)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oN);

void BM_ManufacturedSolve(benchmark::State& state) {
    const auto space = ModelSpace::hyperbolic(3, 5, profiles::constant(0.0), 1.5);
    const auto exact = exact_profiles::cosine_bump(2.0, 1.0);
    const auto grid = RadialGrid::for_space(space, static_cast<int>(state.range(0)));
    const Manufactured mf = manufacture(space, exact, grid);
    const auto problem = make_problem(space, mf.family, exact.value(space.r_max()));
    for (auto _ : state) benchmark::DoNotOptimize(solve_newton(problem, grid));
}
BENCHMARK(BM_ManufacturedSolve)->Arg(512);

}  // namespace
