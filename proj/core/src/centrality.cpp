#include "multinet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "multinet/detail/text.hpp"
#include "multinet/errors.hpp"
#include "multinet/parallel.hpp"

namespace multinet {

bool NodeMetricVector::defined_for(int node) const {
    return std::binary_search(nodes.begin(), nodes.end(), node);
}

double NodeMetricVector::value_of(int node) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node)
        throw validation_error("node " + std::to_string(node) +
                               " is not in the active set of metric '" + metric + "'");
    return values[static_cast<size_t>(it - nodes.begin())];
}

NodeMetricVector DegreeStrengthProfile::total_degree() const {
    NodeMetricVector v;
    v.metric = "degree";
    v.nodes = nodes;
    v.values.reserve(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        v.values.push_back(static_cast<double>(in_degree[i] + out_degree[i]));
    return v;
}

NodeMetricVector DegreeStrengthProfile::total_strength() const {
    NodeMetricVector v;
    v.metric = "strength";
    v.nodes = nodes;
    v.values.reserve(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        v.values.push_back(in_strength[i] + out_strength[i]);
    return v;
}

DegreeStrengthProfile degree_strength(const DirectedGraph& g) {
    DegreeStrengthProfile p;
    p.nodes = g.active_nodes();
    p.in_degree.reserve(p.nodes.size());
    p.out_degree.reserve(p.nodes.size());
    p.in_strength.reserve(p.nodes.size());
    p.out_strength.reserve(p.nodes.size());
    for (int v : p.nodes) {
        p.in_degree.push_back(g.in_degree(v));
        p.out_degree.push_back(g.out_degree(v));
        double si = 0.0, so = 0.0;
        for (const Edge& e : g.in_edges(v)) si += e.weight;
        for (const Edge& e : g.out_edges(v)) so += e.weight;
        p.in_strength.push_back(si);
        p.out_strength.push_back(so);
    }
    return p;
}

NodeMetricVector betweenness(const DirectedGraph& g) {
    const std::vector<int>& active = g.active_nodes();
    const int na = static_cast<int>(active.size());
    if (na < 3)
        throw validation_error(
            "betweenness normalization requires at least 3 active nodes, got " +
            std::to_string(na));
    const int n = g.node_count();

    // Parallel over fixed-size source chunks; each chunk owns an accumulator
    // merged in chunk order afterwards, so results do not depend on the
    // worker count.
    const int chunk_size = 32;
    const int chunks = (na + chunk_size - 1) / chunk_size;
    std::vector<std::vector<double>> partial(static_cast<size_t>(chunks));

    parallel_for(0, chunks, [&](int c) {
        std::vector<double> acc(static_cast<size_t>(n), 0.0);
        std::vector<double> sigma(static_cast<size_t>(n));
        std::vector<double> delta(static_cast<size_t>(n));
        std::vector<int> dist(static_cast<size_t>(n));
        std::vector<std::vector<int>> pred(static_cast<size_t>(n));
        std::vector<int> order;
        order.reserve(static_cast<size_t>(n));

        const int lo = c * chunk_size;
        const int hi = std::min(lo + chunk_size, na);
        for (int si = lo; si < hi; ++si) {
            const int s = active[static_cast<size_t>(si)];
            std::fill(dist.begin(), dist.end(), -1);
            std::fill(sigma.begin(), sigma.end(), 0.0);
            order.clear();

            dist[static_cast<size_t>(s)] = 0;
            sigma[static_cast<size_t>(s)] = 1.0;
            order.push_back(s);
            // BFS; `order` doubles as queue and as the stack for the
            // accumulation phase (BFS order is non-decreasing in distance).
            for (size_t head = 0; head < order.size(); ++head) {
                const int v = order[head];
                for (const Edge& e : g.out_edges(v)) {
                    const int w = e.neighbor;
                    if (dist[static_cast<size_t>(w)] < 0) {
                        dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
                        order.push_back(w);
                    }
                    if (dist[static_cast<size_t>(w)] == dist[static_cast<size_t>(v)] + 1) {
                        sigma[static_cast<size_t>(w)] += sigma[static_cast<size_t>(v)];
                        pred[static_cast<size_t>(w)].push_back(v);
                    }
                }
            }
            std::fill(delta.begin(), delta.end(), 0.0);
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                const int w = *it;
                for (int v : pred[static_cast<size_t>(w)])
                    delta[static_cast<size_t>(v)] +=
                        sigma[static_cast<size_t>(v)] / sigma[static_cast<size_t>(w)] *
                        (1.0 + delta[static_cast<size_t>(w)]);
                if (w != s) acc[static_cast<size_t>(w)] += delta[static_cast<size_t>(w)];
            }
            for (int v : order) pred[static_cast<size_t>(v)].clear();
        }
        partial[static_cast<size_t>(c)] = std::move(acc);
    });

    std::vector<double> raw(static_cast<size_t>(n), 0.0);
    for (const auto& acc : partial)
        for (int v = 0; v < n; ++v) raw[static_cast<size_t>(v)] += acc[static_cast<size_t>(v)];

    const double scale =
        1.0 / (static_cast<double>(na - 1) * static_cast<double>(na - 2));
    NodeMetricVector out;
    out.metric = "betweenness";
    out.nodes = active;
    out.values.reserve(active.size());
    for (int v : active) out.values.push_back(raw[static_cast<size_t>(v)] * scale);
    return out;
}

namespace {

// Tarjan's algorithm, iterative. Returns the member list (ascending) of the
// largest strongly connected component; ties resolved toward the component
// containing the smallest node index.
std::vector<int> largest_scc(const DirectedGraph& g) {
    const int n = g.node_count();
    std::vector<int> index(static_cast<size_t>(n), -1);
    std::vector<int> low(static_cast<size_t>(n), 0);
    std::vector<int> comp(static_cast<size_t>(n), -1);
    std::vector<char> on_stack(static_cast<size_t>(n), 0);
    std::vector<int> stack;
    struct Frame {
        int v;
        size_t ei;
    };
    std::vector<Frame> dfs;
    int next_index = 0;
    int comp_count = 0;

    for (int root = 0; root < n; ++root) {
        if (index[static_cast<size_t>(root)] != -1) continue;
        index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = next_index++;
        stack.push_back(root);
        on_stack[static_cast<size_t>(root)] = 1;
        dfs.push_back({root, 0});
        while (!dfs.empty()) {
            Frame& f = dfs.back();
            const auto edges = g.out_edges(f.v);
            bool descended = false;
            while (f.ei < edges.size()) {
                const int w = edges[f.ei++].neighbor;
                if (index[static_cast<size_t>(w)] == -1) {
                    index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = next_index++;
                    stack.push_back(w);
                    on_stack[static_cast<size_t>(w)] = 1;
                    dfs.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<size_t>(w)])
                    low[static_cast<size_t>(f.v)] =
                        std::min(low[static_cast<size_t>(f.v)], index[static_cast<size_t>(w)]);
            }
            if (descended) continue;
            const int v = dfs.back().v;
            dfs.pop_back();
            if (!dfs.empty())
                low[static_cast<size_t>(dfs.back().v)] =
                    std::min(low[static_cast<size_t>(dfs.back().v)], low[static_cast<size_t>(v)]);
            if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
                const int c = comp_count++;
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<size_t>(w)] = 0;
                    comp[static_cast<size_t>(w)] = c;
                    if (w == v) break;
                }
            }
        }
    }

    std::vector<int> size(static_cast<size_t>(comp_count), 0);
    std::vector<int> min_node(static_cast<size_t>(comp_count), n);
    for (int v = 0; v < n; ++v) {
        const int c = comp[static_cast<size_t>(v)];
        ++size[static_cast<size_t>(c)];
        min_node[static_cast<size_t>(c)] = std::min(min_node[static_cast<size_t>(c)], v);
    }
    int best = 0;
    for (int c = 1; c < comp_count; ++c) {
        if (size[static_cast<size_t>(c)] > size[static_cast<size_t>(best)] ||
            (size[static_cast<size_t>(c)] == size[static_cast<size_t>(best)] &&
             min_node[static_cast<size_t>(c)] < min_node[static_cast<size_t>(best)]))
            best = c;
    }
    std::vector<int> members;
    members.reserve(static_cast<size_t>(size[static_cast<size_t>(best)]));
    for (int v = 0; v < n; ++v)
        if (comp[static_cast<size_t>(v)] == best) members.push_back(v);
    return members;
}

} // namespace

NodeMetricVector eigenvector_centrality(const DirectedGraph& g, AdjacencyMode mode,
                                        EigenvectorOrientation orientation) {
    if (g.edge_count() == 0)
        throw validation_error("eigenvector centrality requires a graph with at least one edge");

    const std::vector<int> lscc = largest_scc(g);
    const int k = static_cast<int>(lscc.size());
    if (k < 2)
        throw computation_error(
            "largest strongly connected component is a single node without a cycle; "
            "the maximal eigenvalue is 0 and eigenvector centrality is undefined");

    std::vector<int> pos(static_cast<size_t>(g.node_count()), -1);
    for (int i = 0; i < k; ++i) pos[static_cast<size_t>(lscc[static_cast<size_t>(i)])] = i;

    // Compact operator over the LSCC. Right orientation iterates
    // y_i = sum_j A_ij x_j (rows from out-edges); left uses the transpose.
    struct Entry {
        int col;
        double w;
    };
    std::vector<std::vector<Entry>> rows(static_cast<size_t>(k));
    double max_row_sum = 0.0;
    for (int i = 0; i < k; ++i) {
        const int v = lscc[static_cast<size_t>(i)];
        const auto edges = orientation == EigenvectorOrientation::right
                               ? g.out_edges(v)
                               : g.in_edges(v);
        double row_sum = 0.0;
        for (const Edge& e : edges) {
            const int j = pos[static_cast<size_t>(e.neighbor)];
            if (j < 0) continue;
            const double w = mode == AdjacencyMode::binary ? 1.0 : e.weight;
            rows[static_cast<size_t>(i)].push_back({j, w});
            row_sum += w;
        }
        max_row_sum = std::max(max_row_sum, row_sum);
    }

    // Positive diagonal shift makes the irreducible non-negative operator
    // primitive, so power iteration converges even on periodic components
    // (a bare directed cycle, for one). Scaling the shift with the operator
    // keeps the iteration invariant under uniform weight rescaling.
    const double shift = 0.5 * max_row_sum;
    // Slow geometric convergence (spectral gap ~1e-5 after the shift) shows
    // up on weighted graphs with weakly coupled blocks; the cap is sized so
    // those still finish rather than throw.
    const double tol = 1e-12;
    const int max_iterations = 2000000;

    std::vector<double> x(static_cast<size_t>(k), 1.0 / static_cast<double>(k));
    std::vector<double> y(static_cast<size_t>(k));
    int iterations = 0;
    while (true) {
        ++iterations;
        double norm = 0.0;
        for (int i = 0; i < k; ++i) {
            double acc = shift * x[static_cast<size_t>(i)];
            for (const Entry& e : rows[static_cast<size_t>(i)])
                acc += e.w * x[static_cast<size_t>(e.col)];
            y[static_cast<size_t>(i)] = acc;
            norm += acc;
        }
        double diff = 0.0;
        for (int i = 0; i < k; ++i) {
            y[static_cast<size_t>(i)] /= norm;
            diff = std::max(diff, std::abs(y[static_cast<size_t>(i)] - x[static_cast<size_t>(i)]));
        }
        x.swap(y);
        if (diff < tol) break;
        if (iterations >= max_iterations)
            throw computation_error("eigenvector power iteration did not converge within " +
                                    std::to_string(max_iterations) + " iterations");
    }

    const std::vector<int>& active = g.active_nodes();
    NodeMetricVector out;
    out.metric = "eigenvector";
    out.nodes = active;
    out.values.reserve(active.size());
    for (int v : active) {
        const int i = pos[static_cast<size_t>(v)];
        out.values.push_back(i >= 0 ? x[static_cast<size_t>(i)] : 0.0);
    }
    out.meta["mode"] = mode == AdjacencyMode::binary ? "binary" : "weighted";
    out.meta["orientation"] =
        orientation == EigenvectorOrientation::right ? "right" : "left";
    out.meta["lscc_size"] = std::to_string(k);
    out.meta["zeroed_outside_lscc"] =
        std::to_string(static_cast<int>(active.size()) - k);
    out.meta["iterations"] = std::to_string(iterations);
    return out;
}

namespace {

std::vector<double> midrank(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && v[idx[j]] == v[idx[i]]) ++j;
        const double avg = (static_cast<double>(i + j - 1)) / 2.0 + 1.0;
        for (size_t t = i; t < j; ++t) r[idx[t]] = avg;
        i = j;
    }
    return r;
}

double pearson_of(const std::vector<double>& x, const std::vector<double>& y,
                  const char* what) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw computation_error(std::string(what) +
                                " correlation undefined: an input has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

CorrelationPair metric_correlation(const NodeMetricVector& a, const NodeMetricVector& b) {
    std::vector<double> xa, xb;
    size_t i = 0, j = 0;
    while (i < a.nodes.size() && j < b.nodes.size()) {
        if (a.nodes[i] < b.nodes[j]) {
            ++i;
        } else if (a.nodes[i] > b.nodes[j]) {
            ++j;
        } else {
            xa.push_back(a.values[i]);
            xb.push_back(b.values[j]);
            ++i;
            ++j;
        }
    }
    if (xa.size() < 3)
        throw validation_error("correlation requires at least 3 common active nodes, got " +
                               std::to_string(xa.size()));
    CorrelationPair out;
    out.sample_size = static_cast<int>(xa.size());
    out.pearson = pearson_of(xa, xb, "pearson");
    out.spearman = pearson_of(midrank(xa), midrank(xb), "spearman");
    return out;
}

Metric metric_from_name(const std::string& name) {
    if (name == "degree") return Metric::degree;
    if (name == "strength") return Metric::strength;
    if (name == "betweenness") return Metric::betweenness;
    if (name == "eigenvector") return Metric::eigenvector;
    throw validation_error("unknown metric '" + name +
                           "' (expected degree, strength, betweenness or eigenvector)");
}

std::string metric_name(Metric metric) {
    switch (metric) {
    case Metric::degree: return "degree";
    case Metric::strength: return "strength";
    case Metric::betweenness: return "betweenness";
    case Metric::eigenvector: return "eigenvector";
    }
    throw validation_error("invalid metric enum value");
}

NodeMetricVector metric_vector(const DirectedGraph& g, Metric metric) {
    switch (metric) {
    case Metric::degree: return degree_strength(g).total_degree();
    case Metric::strength: return degree_strength(g).total_strength();
    case Metric::betweenness: return betweenness(g);
    case Metric::eigenvector: return eigenvector_centrality(g);
    }
    throw validation_error("invalid metric enum value");
}

CrossLayerComparison cross_layer_comparison(const Multiplex& m, Metric metric,
                                            const std::string& layer_a,
                                            const std::string& layer_b) {
    const NodeMetricVector va = metric_vector(m.layer_view(layer_a), metric);
    const NodeMetricVector vb = metric_vector(m.layer_view(layer_b), metric);
    CrossLayerComparison out;
    out.correlation = metric_correlation(va, vb);
    size_t i = 0, j = 0;
    while (i < va.nodes.size() && j < vb.nodes.size()) {
        if (va.nodes[i] < vb.nodes[j]) {
            ++i;
        } else if (va.nodes[i] > vb.nodes[j]) {
            ++j;
        } else {
            out.pairs.emplace_back(va.nodes[i], va.values[i], vb.values[j]);
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace multinet
