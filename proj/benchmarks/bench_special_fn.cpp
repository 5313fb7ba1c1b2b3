#include <benchmark/benchmark.h>

#include "isofield/special_fn.hpp"

using namespace isofield;

static void BM_SphericalBesselAll(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(spherical_bessel_all(L, x));
        x += 1e-9;
    }
}
BENCHMARK(BM_SphericalBesselAll)->Arg(8)->Arg(32)->Arg(128);

static void BM_RealHarmonicsAll(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const SphericalPoint p{0.7, 1.3};
    for (auto _ : state) benchmark::DoNotOptimize(real_harmonics_all(L, p));
}
BENCHMARK(BM_RealHarmonicsAll)->Arg(8)->Arg(32)->Arg(128);

static void BM_SpinHarmonicsAll(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const SphericalPoint p{0.7, 1.3};
    for (auto _ : state) benchmark::DoNotOptimize(spin_harmonics_all(2, L, p));
}
BENCHMARK(BM_SpinHarmonicsAll)->Arg(8)->Arg(32)->Arg(128);

static void BM_RayleighPartialSum(benchmark::State& state) {
    const Vec3 k{0.3, -1.1, 0.8}, r{1.2, 0.4, -0.9};
    for (auto _ : state) benchmark::DoNotOptimize(rayleigh_partial_sum(k, r, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_RayleighPartialSum)->Arg(10)->Arg(30);

static void BM_GaussLegendre(benchmark::State& state) {
    std::vector<double> x, w;
    for (auto _ : state) {
        gauss_legendre(static_cast<int>(state.range(0)), x, w);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_GaussLegendre)->Arg(16)->Arg(128);
