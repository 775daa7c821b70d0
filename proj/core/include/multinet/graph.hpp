#pragma once

#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

namespace multinet {

/// One directed link with a strictly positive weight (millions of currency).
struct Edge {
    int neighbor = 0;
    double weight = 0.0;
};

/// A single layer (or an aggregate): a simple directed weighted graph over a
/// fixed node index space 0..n-1. No self-loops, at most one edge per ordered
/// pair, every stored weight > 0. Immutable after construction and safe to
/// share across threads.
class DirectedGraph {
public:
    DirectedGraph() = default;

    int node_count() const { return n_; }
    std::int64_t edge_count() const { return edge_count_; }
    double total_weight() const { return total_weight_; }

    /// Out-edges of i, sorted by target index.
    std::span<const Edge> out_edges(int i) const { return {out_[i]}; }
    /// In-edges of i, sorted by source index.
    std::span<const Edge> in_edges(int i) const { return {in_[i]}; }

    int out_degree(int i) const { return static_cast<int>(out_[i].size()); }
    int in_degree(int i) const { return static_cast<int>(in_[i].size()); }

    bool has_edge(int src, int dst) const;
    /// Weight of (src, dst), or 0 when the edge is absent.
    double weight(int src, int dst) const;

    /// Nodes with in-degree + out-degree >= 1, sorted ascending.
    const std::vector<int>& active_nodes() const { return active_; }

    /// All edges as (src, dst, weight), sorted by (src, dst).
    std::vector<std::tuple<int, int, double>> edges() const;

private:
    friend class GraphBuilder;
    int n_ = 0;
    std::int64_t edge_count_ = 0;
    double total_weight_ = 0.0;
    std::vector<std::vector<Edge>> out_;
    std::vector<std::vector<Edge>> in_;
    std::vector<int> active_;
};

/// Accumulates directed edges into a DirectedGraph. Weights of repeated
/// (src, dst) pairs are summed; zero weights add nothing. Self-loops and
/// negative weights are rejected (callers filter self-loops beforehand and
/// keep their own diagnostics).
class GraphBuilder {
public:
    explicit GraphBuilder(int node_count);

    void add(int src, int dst, double weight);
    DirectedGraph build() &&;

private:
    int n_;
    std::vector<std::vector<Edge>> out_; // unsorted, may hold duplicates
};

} // namespace multinet
