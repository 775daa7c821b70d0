#pragma once

#include <map>
#include <string>
#include <vector>

#include "multinet/graph.hpp"
#include "multinet/multiplex.hpp"

namespace multinet {

/// Per-node values of one metric on the active node set it was computed on.
/// `nodes` is sorted ascending and `values` is parallel to it.
struct NodeMetricVector {
    std::string metric;
    std::vector<int> nodes;
    std::vector<double> values;
    std::map<std::string, std::string> meta;

    bool defined_for(int node) const;
    /// Value for a node in the active set; throws validation_error otherwise.
    double value_of(int node) const;
};

/// Exact per-node degree counts and strength sums over the active set.
struct DegreeStrengthProfile {
    std::vector<int> nodes;
    std::vector<int> in_degree;
    std::vector<int> out_degree;
    std::vector<double> in_strength;
    std::vector<double> out_strength;

    NodeMetricVector total_degree() const;
    NodeMetricVector total_strength() const;
};

struct CorrelationPair {
    double pearson = 0.0;
    double spearman = 0.0;
    int sample_size = 0;
};

DegreeStrengthProfile degree_strength(const DirectedGraph& g);

/// Betweenness centrality: for every node v, the average over ordered pairs
/// (i, j), i != j, both != v, of the fraction of shortest directed paths
/// from i to j passing through v, normalized by 1/((n-1)(n-2)) with n the
/// active-set size. Shortest paths are hop-count; unreachable pairs
/// contribute 0. Brandes accumulation, parallel over sources.
NodeMetricVector betweenness(const DirectedGraph& g);

enum class AdjacencyMode { weighted, binary };
enum class EigenvectorOrientation { right, left };

/// Principal-eigenvector centrality of the adjacency operator, restricted to
/// the largest strongly connected component; nodes outside it get 0. Output
/// has unit 1-norm on its support. Defaults follow the adjacency equation
/// A x = lambda_max x literally: weighted matrix, right eigenvector.
NodeMetricVector eigenvector_centrality(
    const DirectedGraph& g, AdjacencyMode mode = AdjacencyMode::weighted,
    EigenvectorOrientation orientation = EigenvectorOrientation::right);

/// Pearson on raw values and Spearman on mid-ranks, over the intersection
/// of the two active sets. Requires >= 3 common nodes; zero variance on
/// either side is a computation_error, never a silent NaN.
CorrelationPair metric_correlation(const NodeMetricVector& a,
                                   const NodeMetricVector& b);

enum class Metric { degree, strength, betweenness, eigenvector };

Metric metric_from_name(const std::string& name);
std::string metric_name(Metric metric);

/// Computes one metric on a graph (degree and strength are in+out totals).
NodeMetricVector metric_vector(const DirectedGraph& g, Metric metric);

struct CrossLayerComparison {
    CorrelationPair correlation;
    // (node, value in layer a, value in layer b) over the intersection of
    // the two active sets, ordered by node index
    std::vector<std::tuple<int, double, double>> pairs;
};

/// Computes the metric on each full layer, then correlates the two vectors
/// on the nodes active in both layers.
CrossLayerComparison cross_layer_comparison(const Multiplex& m, Metric metric,
                                            const std::string& layer_a,
                                            const std::string& layer_b);

} // namespace multinet
