#include <benchmark/benchmark.h>

#include "isofield/parallel.hpp"
#include "isofield/sphere.hpp"

using namespace isofield;

namespace {

AngularPowerSpectrum test_spectrum(int L) {
    Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
    A(0, 1) = A(1, 0) = 0.3;
    return AngularPowerSpectrum::power_law(L, A, 2.0);
}

}  // namespace

static void BM_SynthesizeAlm(benchmark::State& state) {
    const auto spec = test_spectrum(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(synthesize_alm(spec, ++seed));
}
BENCHMARK(BM_SynthesizeAlm)->Arg(16)->Arg(64);

static void BM_SphereBasis(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const auto grid = sphere_grid(L + 1);
    for (auto _ : state) benchmark::DoNotOptimize(SphereBasis(grid.nodes, L));
}
BENCHMARK(BM_SphereBasis)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_MapRoundTrip(benchmark::State& state) {
    set_thread_count(1);
    const int L = static_cast<int>(state.range(0));
    const auto grid = sphere_grid(L + 1);
    const SphereBasis basis(grid.nodes, L);
    const auto alm = synthesize_alm(test_spectrum(L), 3);
    for (auto _ : state) {
        const auto map = alm_to_stokes(alm, basis);
        benchmark::DoNotOptimize(stokes_to_alm(map, grid, basis));
    }
    set_thread_count(0);
}
BENCHMARK(BM_MapRoundTrip)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
