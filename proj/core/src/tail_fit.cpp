#include "multinet/tail_fit.hpp"

#include <algorithm>
#include <cmath>

#include "multinet/errors.hpp"

namespace multinet {

TailFit fit_power_law_tail(const std::vector<double>& samples) {
    constexpr int kMinTail = 50;
    if (static_cast<int>(samples.size()) < kMinTail)
        throw validation_error("power-law tail fit requires at least 50 samples, got " +
                               std::to_string(samples.size()));
    for (double v : samples)
        if (!(v > 0.0))
            throw validation_error("power-law tail fit requires strictly positive samples");

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    if (sorted.front() == sorted.back())
        throw computation_error("power-law tail fit is degenerate: all samples are equal");

    // Candidate cutoffs: distinct values between the 1st and 99th percentile.
    const double lo = sorted[static_cast<size_t>(std::floor(0.01 * static_cast<double>(n - 1)))];
    const double hi = sorted[static_cast<size_t>(std::ceil(0.99 * static_cast<double>(n - 1)))];

    // Suffix sums of log-values so each candidate's Hill estimate is O(1).
    std::vector<double> log_suffix(n + 1, 0.0);
    for (size_t i = n; i-- > 0;)
        log_suffix[i] = log_suffix[i + 1] + std::log(sorted[i]);

    bool found = false;
    bool any_tail = false;
    TailFit best;
    size_t i = 0;
    while (i < n) {
        const double x_min = sorted[i];
        size_t j = i;
        while (j < n && sorted[j] == x_min) ++j; // next distinct value
        if (x_min > hi) break;
        if (x_min < lo) {
            i = j;
            continue;
        }
        const auto k = n - i; // tail = samples >= x_min
        if (static_cast<int>(k) >= kMinTail) {
            any_tail = true;
            const double log_sum =
                log_suffix[i] - static_cast<double>(k) * std::log(x_min);
            // sorted[n-1] > x_min keeps constant tails out even when the
            // accumulated log sum rounds to a tiny positive value.
            if (sorted[n - 1] > x_min && log_sum > 0.0) {
                const double alpha = static_cast<double>(k) / log_sum;
                double ks = 0.0;
                for (size_t t = i; t < n; ++t) {
                    // Fitted CDF inside the tail vs the empirical step around
                    // the t-th tail point.
                    const double f = 1.0 - std::pow(x_min / sorted[t], alpha);
                    const double e_lo = static_cast<double>(t - i) / static_cast<double>(k);
                    const double e_hi = static_cast<double>(t - i + 1) / static_cast<double>(k);
                    ks = std::max(ks, std::max(std::abs(f - e_lo), std::abs(f - e_hi)));
                }
                if (!found || ks < best.ks) {
                    found = true;
                    best.alpha = alpha;
                    best.x_min = x_min;
                    best.ks = ks;
                    best.n_tail = static_cast<int>(k);
                }
            }
        }
        i = j;
    }
    if (!found) {
        if (any_tail)
            throw computation_error("power-law tail fit is degenerate: every candidate tail "
                                    "is constant");
        throw validation_error("power-law tail fit: no candidate cutoff keeps at least 50 "
                               "tail samples");
    }
    return best;
}

} // namespace multinet
