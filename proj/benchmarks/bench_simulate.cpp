#include <benchmark/benchmark.h>

#include "isofield/parallel.hpp"
#include "isofield/simulate.hpp"

using namespace isofield;

namespace {

std::vector<Vec3> line_points(int n) {
    std::vector<Vec3> pts;
    for (int k = 0; k < n; ++k) pts.push_back({0.1 * k, 0.05 * k, -0.02 * k});
    return pts;
}

}  // namespace

static void BM_SimulateScalar(benchmark::State& state) {
    set_thread_count(1);
    SimulationPlan plan;
    plan.kind = FieldKind::scalar;
    plan.spectral = SpectralMeasure({{1.0, 1.0}, {2.0, 0.5}});
    plan.ell_max = static_cast<int>(state.range(0));
    plan.points = line_points(16);
    plan.realizations = 100;
    plan.master_seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(simulate(plan));
    set_thread_count(0);
}
BENCHMARK(BM_SimulateScalar)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SimulateVector(benchmark::State& state) {
    set_thread_count(1);
    SimulationPlan plan;
    plan.kind = FieldKind::vector;
    plan.pair.phi1 = SpectralMeasure({{0.8, 1.0}});
    plan.pair.phi2 = SpectralMeasure({{1.2, 0.6}});
    plan.ell_max = static_cast<int>(state.range(0));
    plan.points = line_points(8);
    plan.realizations = 20;
    plan.master_seed = 2;
    for (auto _ : state) benchmark::DoNotOptimize(simulate(plan));
    set_thread_count(0);
}
BENCHMARK(BM_SimulateVector)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_VectorCoefficientCovariance(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(vector_coefficient_covariance(1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_VectorCoefficientCovariance)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
