#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multinet/graph.hpp"
#include "multinet/multiplex.hpp"

namespace multinet {

/// Descriptive statistics of one layer. Fields that are undefined for the
/// given graph (density of a single node, diameter of an edgeless layer)
/// are left empty rather than set to a sentinel.
struct LayerStats {
    int active_nodes = 0;
    std::int64_t edges = 0;
    double volume = 0.0;
    std::optional<double> density;
    /// Fraction of directed edges whose reverse edge also exists.
    std::optional<double> reciprocity;
    /// Transitivity (3 x triangles / wedges) of the undirected binarized
    /// projection.
    std::optional<double> clustering;
    /// Pearson correlation over directed edges of out-degree(source) vs
    /// in-degree(target).
    std::optional<double> assortativity;
    /// Diameter (hop metric, undirected) of the largest weakly connected
    /// component.
    std::optional<int> diameter;
};

LayerStats layer_stats(const DirectedGraph& g);

/// |E_a intersect E_b| / |E_a union E_b| over binary directed edge sets.
/// Both graphs must share the node index space; two empty edge sets have no
/// defined similarity and raise an error.
double jaccard_similarity(const DirectedGraph& a, const DirectedGraph& b);

struct SimilarityMatrix {
    std::vector<std::string> layers;
    std::vector<std::vector<double>> values; // symmetric, 1 on the diagonal
    double off_diagonal_mean = 0.0;
};

/// Pairwise Jaccard similarity of all layers. Requires at least two
/// non-empty layers; the diagonal is 1 by convention and a pair of empty
/// layers scores 0.
SimilarityMatrix similarity_matrix(const Multiplex& m);

} // namespace multinet
