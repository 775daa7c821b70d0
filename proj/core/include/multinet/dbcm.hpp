#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "multinet/centrality.hpp"
#include "multinet/graph.hpp"

namespace multinet {

struct DbcmDiagnostics {
    double max_residual = 0.0;
    int sweeps = 0;
    bool near_boundary = false;
    std::vector<std::string> warnings;
    // log-likelihood after each sweep; non-decreasing by construction
    std::vector<double> likelihood;
};

/// Directed binary configuration model: the maximum-entropy ensemble over
/// simple digraphs on n nodes constrained to reproduce every node's in- and
/// out-degree on average. Each ordered pair (i, j), i != j, carries an edge
/// independently with probability p_ij = x_i y_j / (1 + x_i y_j).
struct DbcmModel {
    int n = 0;
    std::vector<double> x; // out-multipliers, x_i = 0 iff out-degree 0
    std::vector<double> y; // in-multipliers, y_i = 0 iff in-degree 0
    DbcmDiagnostics diagnostics;

    double link_probability(int i, int j) const;
};

/// Maximum-likelihood fit of the 2n moment equations
/// k_out_i = sum_{j != i} p_ij and k_in_j = sum_{i != j} p_ij.
/// Gauss-Seidel sweeps of exact single-coordinate solves; each solve
/// maximizes the likelihood in that coordinate, so the log-likelihood is
/// non-decreasing across sweeps. Stops when the max moment residual falls
/// below an internal target well under the 1e-8 contract; throws after 1e5
/// sweeps if the residual still exceeds 1e-8. Nodes whose constraint can
/// only be met in the p -> 1 limit (out-degree n-1 in the extreme) drive
/// their multipliers to a large cap; the fit reports a near-boundary warning
/// when any p_ij >= 1 - 1e-6.
DbcmModel fit_dbcm(const DirectedGraph& g);

/// Row/column sums of the fitted p matrix; reproduce the observed degrees
/// within fit tolerance. Values are fractional, hence not a
/// DegreeStrengthProfile.
struct ExpectedDegreeProfile {
    std::vector<int> nodes; // all model nodes, ascending
    std::vector<double> out_degree;
    std::vector<double> in_degree;
};

ExpectedDegreeProfile expected_degrees(const DbcmModel& model);

/// One independent draw from the ensemble: each ordered pair (i, j), i != j,
/// gets an edge of weight 1 with probability p_ij. Deterministic given seed.
DirectedGraph sample_dbcm(const DbcmModel& model, std::uint64_t seed);

enum class TestSide { two_sided, upper, lower };

struct PValueTable {
    std::vector<int> nodes;
    std::vector<double> observed;
    std::vector<double> null_mean;
    std::vector<double> null_sd;
    std::vector<double> p_upper;
    std::vector<double> p_lower;
    std::vector<char> rejected;
    int replicates = 0;
    double alpha = 0.0;
};

/// Monte Carlo node-level test of an observed centrality against the model.
/// For node v: p_upper = (1 + #{samples with stat >= observed}) / (M + 1),
/// p_lower symmetric. Two-sided rejection: min(2 min(p_upper, p_lower), 1)
/// < alpha. A node inactive in a sample contributes statistic 0 there
/// (isolated nodes lie on no path and sit outside the LSCC). Replicate r
/// draws from an independent stream derived from (master_seed, r).
PValueTable centrality_pvalues(const DirectedGraph& g, const DbcmModel& model,
                               Metric metric, int replicates, double alpha,
                               std::uint64_t master_seed,
                               TestSide side = TestSide::two_sided);

struct NullDistribution {
    std::vector<double> values; // replicate order
    double mean = 0.0;
    double sd = 0.0;
    /// Nearest-rank empirical quantile, q in [0, 1].
    double quantile(double q) const;
};

/// Summarizes raw replicate values into a NullDistribution.
NullDistribution make_distribution(std::vector<double> values);

/// Evaluates a graph-level statistic on M independent samples. A statistic
/// failure is rethrown with the offending replicate's seed.
NullDistribution null_statistic_distribution(
    const DbcmModel& model, const std::function<double(const DirectedGraph&)>& statistic,
    int replicates, std::uint64_t master_seed);

} // namespace multinet
