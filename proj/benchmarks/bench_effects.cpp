#include "bench_common.hpp"

#include <causalfair/decomposition.hpp>

#include <benchmark/benchmark.h>

using namespace causalfair;

static void FullLedger(benchmark::State& state) {
    Dataset d = bench::synthetic_dataset(static_cast<std::size_t>(state.range(0)));
    SfmRoles r = bench::synthetic_roles();
    Contrast c{"0", "1", "1"};
    for (auto _ : state) {
        SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
        benchmark::DoNotOptimize(effect_ledger(e, c));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(FullLedger)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

static void ZSpecificSlices(benchmark::State& state) {
    Dataset d = bench::synthetic_dataset(1 << 14);
    SfmEstimator e = SfmEstimator::fit(d, bench::synthetic_roles(), 1.0);
    Contrast c{"0", "1", "1"};
    for (auto _ : state) benchmark::DoNotOptimize(z_specific_effects(e, c));
}
BENCHMARK(ZSpecificSlices);
