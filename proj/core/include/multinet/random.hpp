#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace multinet::rng {

// SplitMix64 step. Used both as a stream-derivation mixer and to seed engines.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a 64
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives an independent stream seed from a master seed and a path of tags.
/// Replicate r of a randomized procedure tagged T runs on
/// derive_seed(master, {hash_tag(T), r}); reruns with the same master seed are
/// reproducible and replicates can run in parallel.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = master;
    splitmix64(s);
    for (std::uint64_t p : path) {
        s ^= p + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        splitmix64(s);
    }
    return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64{seed};
}

// Draws below avoid std::*_distribution so that outputs are identical across
// standard-library versions, not just across reruns of one binary.

/// Uniform double in [0, 1).
inline double u01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1].
inline double u01_open_low(std::mt19937_64& eng) {
    return 1.0 - u01(eng);
}

/// Uniform integer in [0, bound). Lemire rejection, unbiased.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound) {
    if (bound == 0) return 0;
    std::uint64_t x = eng();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        std::uint64_t t = -bound % bound;
        while (lo < t) {
            x = eng();
            m = static_cast<__uint128_t>(x) * bound;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

inline int uniform_int(std::mt19937_64& eng, int lo, int hi_exclusive) {
    return lo + static_cast<int>(uniform_below(
                    eng, static_cast<std::uint64_t>(hi_exclusive - lo)));
}

/// Standard normal via Marsaglia polar method (pairs drawn, one discarded).
inline double standard_normal(std::mt19937_64& eng) {
    for (;;) {
        double u = 2.0 * u01(eng) - 1.0;
        double v = 2.0 * u01(eng) - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

/// Fisher-Yates shuffle with the explicit draw above.
template <class T>
void shuffle(std::mt19937_64& eng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = uniform_below(eng, i);
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace multinet::rng
