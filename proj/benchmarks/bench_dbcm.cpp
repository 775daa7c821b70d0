#include <benchmark/benchmark.h>

#include "multinet/dbcm.hpp"

#include "bench_common.hpp"

using namespace multinet;

static void BM_FitDbcm(benchmark::State& state) {
    const auto g = random_digraph(static_cast<int>(state.range(0)), 17);
    for (auto _ : state) {
        auto model = fit_dbcm(g);
        benchmark::DoNotOptimize(model.x.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitDbcm)->Arg(50)->Arg(128)->Arg(256)->Arg(533)->Complexity()
    ->Unit(benchmark::kMillisecond);

static void BM_SampleDbcm(benchmark::State& state) {
    const auto g = random_digraph(static_cast<int>(state.range(0)), 19);
    const auto model = fit_dbcm(g);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto sample = sample_dbcm(model, ++seed);
        benchmark::DoNotOptimize(sample.edge_count());
    }
}
BENCHMARK(BM_SampleDbcm)->Arg(128)->Arg(533);
