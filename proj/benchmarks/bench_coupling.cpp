#include <benchmark/benchmark.h>

#include "isofield/coupling.hpp"

using namespace isofield;

static void BM_ClebschGordan(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(clebsch_gordan(7, 2, 5, -1, 6, 1));
}
BENCHMARK(BM_ClebschGordan);

static void BM_GGBlock(benchmark::State& state) {
    const int l = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(compute_gg_block(l, l, 2));
}
BENCHMARK(BM_GGBlock)->Arg(2)->Arg(6)->Arg(12);

static void BM_GauntReal(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(gaunt_real(4, -2, 3, 1, 5, -1));
}
BENCHMARK(BM_GauntReal);
