#include "multinet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "multinet/errors.hpp"

namespace multinet {

bool DirectedGraph::has_edge(int src, int dst) const {
    const auto& row = out_[src];
    auto it = std::lower_bound(row.begin(), row.end(), dst,
                               [](const Edge& e, int t) { return e.neighbor < t; });
    return it != row.end() && it->neighbor == dst;
}

double DirectedGraph::weight(int src, int dst) const {
    const auto& row = out_[src];
    auto it = std::lower_bound(row.begin(), row.end(), dst,
                               [](const Edge& e, int t) { return e.neighbor < t; });
    return (it != row.end() && it->neighbor == dst) ? it->weight : 0.0;
}

std::vector<std::tuple<int, int, double>> DirectedGraph::edges() const {
    std::vector<std::tuple<int, int, double>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int i = 0; i < n_; ++i) {
        for (const Edge& e : out_[i]) out.emplace_back(i, e.neighbor, e.weight);
    }
    return out;
}

GraphBuilder::GraphBuilder(int node_count) : n_(node_count), out_(node_count) {
    if (node_count < 0) throw validation_error("graph: negative node count");
}

void GraphBuilder::add(int src, int dst, double weight) {
    if (src < 0 || src >= n_ || dst < 0 || dst >= n_)
        throw validation_error("graph: edge endpoint out of range");
    if (src == dst)
        throw validation_error("graph: self-loops are not representable");
    if (!(weight >= 0.0) || !std::isfinite(weight))
        throw validation_error("graph: edge weight must be finite and non-negative");
    if (weight == 0.0) return;
    out_[src].push_back({dst, weight});
}

DirectedGraph GraphBuilder::build() && {
    DirectedGraph g;
    g.n_ = n_;
    g.out_.assign(n_, {});
    g.in_.assign(n_, {});

    for (int i = 0; i < n_; ++i) {
        auto& row = out_[i];
        std::sort(row.begin(), row.end(),
                  [](const Edge& a, const Edge& b) { return a.neighbor < b.neighbor; });
        // merge duplicates by summing
        std::size_t w = 0;
        for (std::size_t r = 0; r < row.size(); ++r) {
            if (w > 0 && row[w - 1].neighbor == row[r].neighbor) {
                row[w - 1].weight += row[r].weight;
            } else {
                row[w++] = row[r];
            }
        }
        row.resize(w);
        g.out_[i] = std::move(row);
        for (const Edge& e : g.out_[i]) {
            g.edge_count_ += 1;
            g.total_weight_ += e.weight;
        }
    }
    for (int i = 0; i < n_; ++i) {
        for (const Edge& e : g.out_[i]) g.in_[e.neighbor].push_back({i, e.weight});
    }
    for (int i = 0; i < n_; ++i) {
        std::sort(g.in_[i].begin(), g.in_[i].end(),
                  [](const Edge& a, const Edge& b) { return a.neighbor < b.neighbor; });
        if (!g.out_[i].empty() || !g.in_[i].empty()) g.active_.push_back(i);
    }
    return g;
}

} // namespace multinet
