#pragma once

#include "multinet/graph.hpp"
#include "multinet/random.hpp"

// Sparse random digraph with mean degree ~8 and lognormal-ish weights.
inline multinet::DirectedGraph random_digraph(int n, std::uint64_t seed) {
    using namespace multinet;
    auto eng = rng::make_engine(seed);
    GraphBuilder builder(n);
    const double p = std::min(1.0, 8.0 / static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || rng::u01(eng) >= p) continue;
            builder.add(i, j, 0.5 + rng::u01(eng) * 9.5);
        }
    return std::move(builder).build();
}
