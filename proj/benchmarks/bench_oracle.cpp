#include <causalfair/scm.hpp>

#include <benchmark/benchmark.h>

using namespace causalfair;

static void ExactObservational(benchmark::State& state) {
    Scm scm(random_sfm_scm(11));
    for (auto _ : state) benchmark::DoNotOptimize(scm.exact_observational());
}
BENCHMARK(ExactObservational);

static void GroundTruthLedger(benchmark::State& state) {
    Scm scm(random_sfm_scm(11));
    for (auto _ : state) benchmark::DoNotOptimize(scm.ground_truth_ledger());
}
BENCHMARK(GroundTruthLedger);

static void SampleRows(benchmark::State& state) {
    Scm scm(random_sfm_scm(11));
    for (auto _ : state)
        benchmark::DoNotOptimize(scm.sample(static_cast<std::size_t>(state.range(0)), 5));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(SampleRows)->RangeMultiplier(8)->Range(1 << 10, 1 << 19)->Complexity();
