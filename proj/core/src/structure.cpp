#include "multinet/structure.hpp"

#include <algorithm>
#include <cmath>

#include "multinet/errors.hpp"

namespace multinet {

namespace {

// Sorted unique undirected neighbor lists over the binarized projection.
std::vector<std::vector<int>> undirected_projection(const DirectedGraph& g) {
    std::vector<std::vector<int>> adj(static_cast<size_t>(g.node_count()));
    for (int v = 0; v < g.node_count(); ++v) {
        auto& row = adj[static_cast<size_t>(v)];
        for (const Edge& e : g.out_edges(v)) row.push_back(e.neighbor);
        for (const Edge& e : g.in_edges(v)) row.push_back(e.neighbor);
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

} // namespace

LayerStats layer_stats(const DirectedGraph& g) {
    LayerStats s;
    const std::vector<int>& active = g.active_nodes();
    const auto na = static_cast<double>(active.size());
    s.active_nodes = static_cast<int>(active.size());
    s.edges = g.edge_count();
    s.volume = g.total_weight();

    if (active.size() >= 2)
        s.density = static_cast<double>(g.edge_count()) / (na * (na - 1.0));

    if (g.edge_count() > 0) {
        std::int64_t reciprocated = 0;
        for (int v : active)
            for (const Edge& e : g.out_edges(v))
                if (g.has_edge(e.neighbor, v)) ++reciprocated;
        s.reciprocity = static_cast<double>(reciprocated) / static_cast<double>(g.edge_count());
    }

    const auto adj = undirected_projection(g);
    std::int64_t closed = 0; // ordered (v, u, w) wedge endpoints that are adjacent
    std::int64_t wedges = 0; // unordered neighbor pairs per center
    for (int v : active) {
        const auto& nb = adj[static_cast<size_t>(v)];
        const auto d = static_cast<std::int64_t>(nb.size());
        wedges += d * (d - 1) / 2;
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) {
                const auto& row = adj[static_cast<size_t>(nb[i])];
                if (std::binary_search(row.begin(), row.end(), nb[j])) ++closed;
            }
    }
    if (wedges > 0) s.clustering = static_cast<double>(closed) / static_cast<double>(wedges);

    if (g.edge_count() >= 2) {
        // Pearson over directed edges of (out-degree of source, in-degree of
        // target); undefined when either marginal is constant.
        double mx = 0.0, my = 0.0;
        std::int64_t m = 0;
        for (int v : active)
            for (const Edge& e : g.out_edges(v)) {
                mx += g.out_degree(v);
                my += g.in_degree(e.neighbor);
                ++m;
            }
        mx /= static_cast<double>(m);
        my /= static_cast<double>(m);
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (int v : active)
            for (const Edge& e : g.out_edges(v)) {
                const double dx = g.out_degree(v) - mx;
                const double dy = g.in_degree(e.neighbor) - my;
                sxx += dx * dx;
                syy += dy * dy;
                sxy += dx * dy;
            }
        if (sxx > 0.0 && syy > 0.0) s.assortativity = sxy / std::sqrt(sxx * syy);
    }

    // Largest weakly connected component, then its diameter by BFS from
    // every member over the undirected projection.
    if (!active.empty()) {
        const int n = g.node_count();
        std::vector<int> comp(static_cast<size_t>(n), -1);
        std::vector<int> queue;
        int comp_count = 0;
        for (int root : active) {
            if (comp[static_cast<size_t>(root)] != -1) continue;
            const int c = comp_count++;
            comp[static_cast<size_t>(root)] = c;
            queue.clear();
            queue.push_back(root);
            for (size_t head = 0; head < queue.size(); ++head)
                for (int w : adj[static_cast<size_t>(queue[head])])
                    if (comp[static_cast<size_t>(w)] == -1) {
                        comp[static_cast<size_t>(w)] = c;
                        queue.push_back(w);
                    }
        }
        std::vector<int> size(static_cast<size_t>(comp_count), 0);
        for (int v : active) ++size[static_cast<size_t>(comp[static_cast<size_t>(v)])];
        int best = 0;
        for (int c = 1; c < comp_count; ++c)
            if (size[static_cast<size_t>(c)] > size[static_cast<size_t>(best)]) best = c;
        if (size[static_cast<size_t>(best)] >= 2) {
            std::vector<int> dist(static_cast<size_t>(n));
            int diameter = 0;
            for (int srt : active) {
                if (comp[static_cast<size_t>(srt)] != best) continue;
                std::fill(dist.begin(), dist.end(), -1);
                dist[static_cast<size_t>(srt)] = 0;
                queue.clear();
                queue.push_back(srt);
                for (size_t head = 0; head < queue.size(); ++head) {
                    const int v = queue[head];
                    for (int w : adj[static_cast<size_t>(v)])
                        if (dist[static_cast<size_t>(w)] == -1) {
                            dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
                            diameter = std::max(diameter, dist[static_cast<size_t>(w)]);
                            queue.push_back(w);
                        }
                }
            }
            s.diameter = diameter;
        }
    }
    return s;
}

double jaccard_similarity(const DirectedGraph& a, const DirectedGraph& b) {
    if (a.node_count() != b.node_count())
        throw validation_error("jaccard similarity requires graphs on the same node index space");
    if (a.edge_count() == 0 && b.edge_count() == 0)
        throw validation_error("jaccard similarity of two empty edge sets is undefined");
    std::int64_t common = 0;
    for (int v = 0; v < a.node_count(); ++v)
        for (const Edge& e : a.out_edges(v))
            if (b.has_edge(v, e.neighbor)) ++common;
    const std::int64_t uni = a.edge_count() + b.edge_count() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

SimilarityMatrix similarity_matrix(const Multiplex& m) {
    SimilarityMatrix out;
    int non_empty = 0;
    for (const auto& name : m.layer_names()) {
        out.layers.push_back(name);
        if (m.layer_view(name).edge_count() > 0) ++non_empty;
    }
    if (non_empty < 2)
        throw validation_error("similarity matrix requires at least 2 non-empty layers, got " +
                               std::to_string(non_empty));
    const size_t L = out.layers.size();
    out.values.assign(L, std::vector<double>(L, 1.0));
    double sum = 0.0;
    int pairs = 0;
    for (size_t i = 0; i < L; ++i)
        for (size_t j = i + 1; j < L; ++j) {
            const DirectedGraph& a = m.layer_view(out.layers[i]);
            const DirectedGraph& b = m.layer_view(out.layers[j]);
            // two empty layers share no evidence; score the pair 0 rather
            // than poisoning the whole matrix
            const double v = (a.edge_count() == 0 && b.edge_count() == 0)
                                 ? 0.0
                                 : jaccard_similarity(a, b);
            out.values[i][j] = out.values[j][i] = v;
            sum += v;
            ++pairs;
        }
    out.off_diagonal_mean = sum / static_cast<double>(pairs);
    return out;
}

} // namespace multinet
