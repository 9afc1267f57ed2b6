// Serial reference against the OpenMP kernels on the hot paths.

#include <benchmark/benchmark.h>

#include "levypot/energy.hpp"
#include "levypot/equilibrium.hpp"
#include "levypot/simulate.hpp"

using namespace levypot;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_AssembleRiesz(benchmark::State& state) {
    const auto gauge = riesz_kernel(1, 0.5);
    const SetDiscretization set = CubeGrid{{{0.0, 1.0}}, 1024};
    for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix(gauge, set, DiagonalPolicy::Regularized, mode(state)));
}

void BM_AssemblePotential(benchmark::State& state) {
    const ExponentVector psi({isotropic_stable(1, 1.5)});
    const SetDiscretization set = CubeGrid{{{0.0, 1.0}}, 200};
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_matrix(psi, set, QuadratureSpec{}, DiagonalPolicy::Regularized, mode(state)));
}

void BM_MutualEnergy(benchmark::State& state) {
    const auto gauge = riesz_kernel(1, 0.5);
    const auto mu = discretize(CubeGrid{{{0.0, 1.0}}, 2048});
    for (auto _ : state) benchmark::DoNotOptimize(mutual_energy_real(gauge, mu, mu, DiagonalMode::CellAverage, mode(state)));
}

void BM_HittingMC(benchmark::State& state) {
    MCConfig cfg;
    cfg.trials = 400;
    cfg.time_horizon = 4.0;
    cfg.n_steps = 4000;
    const auto target = AtomicMeasure::dirac({1.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(hitting_frequency(StableSystem{{1.5}, 1}, target, cfg, mode(state)));
}

void BM_IntersectionMC(benchmark::State& state) {
    MCConfig cfg;
    cfg.trials = 200;
    cfg.n_steps = 1000;
    for (auto _ : state) benchmark::DoNotOptimize(intersection_frequency(2.0, 2.0, 2, cfg, mode(state)));
}

}  // namespace

BENCHMARK(BM_AssembleRiesz)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssemblePotential)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MutualEnergy)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HittingMC)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntersectionMC)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
