#pragma once

#include <vector>

namespace multinet {

/// Power-law tail fit. `alpha` is the CCDF exponent: P(X > x) ~ x^{-alpha}
/// for x >= x_min. The density-exponent convention differs by +1
/// (p(x) ~ x^{-(alpha+1)}); serializers note this next to the value.
struct TailFit {
    double alpha = 0.0;
    double x_min = 0.0;
    double ks = 0.0;
    int n_tail = 0;
};

/// Continuous maximum-likelihood (Hill) estimate of the CCDF tail exponent,
/// with x_min chosen to minimize the Kolmogorov-Smirnov distance between the
/// empirical tail and the fitted law. Candidate cutoffs are the distinct
/// sample values between the 1st and 99th percentiles; candidates leaving
/// fewer than 50 tail samples are skipped. Errors on non-positive samples,
/// on inputs where no candidate keeps 50 tail samples, and on degenerate
/// (all-equal) tails.
TailFit fit_power_law_tail(const std::vector<double>& samples);

} // namespace multinet
