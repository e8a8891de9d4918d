#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "feynpath/coherent.hpp"
#include "feynpath/grin.hpp"
#include "feynpath/kernels_exact.hpp"
#include "feynpath/lattice.hpp"
#include "feynpath/pimc.hpp"
#include "feynpath/qed_media.hpp"

using namespace feynpath;

static void BM_FreeKernel(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(free_kernel({0.0, x, 0.0, 1.0}));
        x += 1e-9;
    }
}
BENCHMARK(BM_FreeKernel);

static void BM_HoKernel(benchmark::State& state) {
    const OscillatorParams osc{{}, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(ho_kernel({0.3, -0.4, 0.0, 1.0}, osc));
}
BENCHMARK(BM_HoKernel);

static void BM_GaussianRecursion(benchmark::State& state) {
    const TimeSlicing slicing{static_cast<int>(state.range(0)), 1.0};
    const auto V = PotentialModel::harmonic(1.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            lattice_kernel({0.3, -0.4, 0.0, 1.0}, {}, V, slicing, LatticeMethod::gaussian_recursion));
}
BENCHMARK(BM_GaussianRecursion)->Arg(10)->Arg(100)->Arg(1000);

static void BM_GridTransfer(benchmark::State& state) {
    GridTransferOptions opt;
    opt.grid = {-8.0, 8.0, static_cast<int>(state.range(0))};
    opt.threads = 1;
    const auto V = PotentialModel::harmonic(1.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            grid_transfer_kernels({{0.3, -0.4}}, 0.0, {}, V, {100, 1.0}, SliceRule::trapezoid, opt));
}
BENCHMARK(BM_GridTransfer)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_ModeKernel(benchmark::State& state) {
    const GrinMedium m = GrinMedium::constant(1.0, 0.1, 0.2 * 3.141592653589793);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mode_kernel(0.3, -0.2, 0.0, 10.0, m, n));
}
BENCHMARK(BM_ModeKernel)->Arg(20)->Arg(60);

static void BM_SolveXYZ(benchmark::State& state) {
    const auto H = QuadraticHamiltonian::dpa(1.0, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(solve_xyz(H, 0.0, 2.0));
}
BENCHMARK(BM_SolveXYZ)->Unit(benchmark::kMillisecond);

static void BM_DpaPropagator(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(dpa_propagator({0.4, -0.2}, {-0.3, 0.6}, 0.0, 1.0, 1.0, 0.25));
}
BENCHMARK(BM_DpaPropagator);

static void BM_PimcSweep(benchmark::State& state) {
    ThermalSystem sys;
    RingPolymer poly = make_ring(static_cast<int>(state.range(0)), 1.0);
    std::mt19937_64 rng(1);
    const MoveConfig moves;
    for (auto _ : state) benchmark::DoNotOptimize(metropolis_sweep(poly, sys, rng, moves));
}
BENCHMARK(BM_PimcSweep)->Arg(16)->Arg(64);

static void BM_SpdcProbability(benchmark::State& state) {
    double dk = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(spdc_probability(dk, 0.5, 1.0));
        dk += 1e-6;
    }
}
BENCHMARK(BM_SpdcProbability);

static void BM_BiphotonQuadrature(benchmark::State& state) {
    const auto m = DispersiveMedium1D::from_mismatch(5.0, 0.5, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(biphoton_amplitude_numeric(1.0, 1.0, m, {1.0, 0.0}, {1.0, 0.0}));
}
BENCHMARK(BM_BiphotonQuadrature);
BENCHMARK_MAIN();
