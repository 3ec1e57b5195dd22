#include <benchmark/benchmark.h>

#include "cmcgap/convexity.hpp"
#include "cmcgap/gap.hpp"
#include "cmcgap/profile.hpp"
#include "cmcgap/shooting.hpp"

using namespace cmcgap;

static void BM_IntegrateCatenoid(benchmark::State& state) {
    IntegrationOptions o;
    o.tol = 1e-10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(ConformalFactor::euclidean(), 0.0, 1.0, 0.0, 2.0, o));
    }
}
BENCHMARK(BM_IntegrateCatenoid);

static void BM_BuildPhi(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_phi(ConformalFactor::gaussian(), 1.4, state.range(0)));
    }
}
BENCHMARK(BM_BuildPhi)->Arg(256)->Arg(2048);

static void BM_ScanGap(benchmark::State& state) {
    IntegrationOptions o;
    o.sample_step = 1e-3;
    const auto curve = integrate_even(ConformalFactor::gaussian(), 0.0, 0.45, 0.6, o);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scan_gap(curve, 1e-8, static_cast<unsigned>(state.range(0))));
    }
}
BENCHMARK(BM_ScanGap)->Arg(1)->Arg(4);

static void BM_FreeBoundaryCatenoid(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(free_boundary_param(ConformalFactor::euclidean(), 0.0, 1.0, 0.5, 2.0));
    }
}
BENCHMARK(BM_FreeBoundaryCatenoid);

static void BM_AngenentWaist(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(angenent_waist());
    }
}
BENCHMARK(BM_AngenentWaist)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
