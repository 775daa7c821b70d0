#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "multinet/graph.hpp"

namespace multinet {

/// Multi-layer directed weighted network: a node registry shared by all
/// layers, and one DirectedGraph per named layer over that index space.
/// A node may be inactive (degree 0) in any subset of layers. Immutable
/// after construction.
class Multiplex {
public:
    Multiplex() = default;
    Multiplex(std::vector<std::string> labels,
              std::map<std::string, DirectedGraph> layers);

    int node_count() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int index) const { return labels_[index]; }

    /// Dense index of a label; throws validation_error when unknown.
    int index_of(const std::string& label) const;
    bool has_node(const std::string& label) const;

    bool has_layer(const std::string& name) const;
    std::vector<std::string> layer_names() const;
    int layer_count() const { return static_cast<int>(layers_.size()); }

    /// The named layer's graph (carries its own active node set).
    /// A pure projection; throws validation_error for unknown layers.
    const DirectedGraph& layer_view(const std::string& name) const;

    const std::map<std::string, DirectedGraph>& layers() const { return layers_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
    std::map<std::string, DirectedGraph> layers_;
};

/// bank label -> banking-group label. Must cover every node of the multiplex
/// it is applied to.
using GroupMap = std::map<std::string, std::string>;

struct ConsolidationStats {
    std::int64_t intragroup_edges_removed = 0;
    double intragroup_weight_removed = 0.0;
};

/// Merges nodes by group: group labels form the new registry, parallel edges
/// are summed per layer, and intragroup edges are removed.
Multiplex consolidate_groups(const Multiplex& m, const GroupMap& groups,
                             ConsolidationStats* stats = nullptr);

/// Union of the selected layers: an edge is present iff present in at least
/// one of them, with weights summed. Selection must be non-empty and known.
DirectedGraph aggregate_layers(const Multiplex& m,
                               const std::vector<std::string>& layers);

/// Label-based structural equality: same node labels, same layers, same
/// edges with exactly equal weights.
bool equivalent(const Multiplex& a, const Multiplex& b);

} // namespace multinet
