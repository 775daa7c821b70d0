#include <benchmark/benchmark.h>

#include "multinet/centrality.hpp"

#include "bench_common.hpp"

using namespace multinet;

static void BM_Betweenness(benchmark::State& state) {
    const auto g = random_digraph(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        auto v = betweenness(g);
        benchmark::DoNotOptimize(v.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Betweenness)->Arg(64)->Arg(128)->Arg(256)->Arg(533)->Complexity();

static void BM_Eigenvector(benchmark::State& state) {
    const auto g = random_digraph(static_cast<int>(state.range(0)), 11);
    for (auto _ : state) {
        auto v = eigenvector_centrality(g);
        benchmark::DoNotOptimize(v.values.data());
    }
}
BENCHMARK(BM_Eigenvector)->Arg(128)->Arg(533);

static void BM_DegreeStrength(benchmark::State& state) {
    const auto g = random_digraph(static_cast<int>(state.range(0)), 13);
    for (auto _ : state) {
        auto prof = degree_strength(g);
        benchmark::DoNotOptimize(prof.nodes.data());
    }
}
BENCHMARK(BM_DegreeStrength)->Arg(533);
