#include "bench_common.hpp"

#include <benchmark/benchmark.h>

using namespace causalfair;

static void EstimatorFit(benchmark::State& state) {
    Dataset d = bench::synthetic_dataset(static_cast<std::size_t>(state.range(0)));
    SfmRoles r = bench::synthetic_roles();
    for (auto _ : state) {
        SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
        benchmark::DoNotOptimize(e.cprob({{"y", "1"}}, {{"x", "1"}}));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(EstimatorFit)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

static void ConditionalQueryCached(benchmark::State& state) {
    Dataset d = bench::synthetic_dataset(1 << 14);
    SfmEstimator e = SfmEstimator::fit(d, bench::synthetic_roles(), 1.0);
    (void)e.cprob({{"y", "1"}}, {{"x", "1"}, {"z", "z3"}});
    for (auto _ : state)
        benchmark::DoNotOptimize(e.cprob({{"y", "1"}}, {{"x", "1"}, {"z", "z3"}}));
}
BENCHMARK(ConditionalQueryCached);
