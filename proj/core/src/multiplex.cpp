#include "multinet/multiplex.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "multinet/errors.hpp"

namespace multinet {

Multiplex::Multiplex(std::vector<std::string> labels,
                     std::map<std::string, DirectedGraph> layers)
    : labels_(std::move(labels)), layers_(std::move(layers)) {
    index_.reserve(labels_.size());
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
        auto [it, inserted] = index_.emplace(labels_[i], i);
        (void)it;
        if (!inserted)
            throw validation_error("multiplex: duplicate node label '" + labels_[i] + "'");
    }
    for (const auto& [name, g] : layers_) {
        if (g.node_count() != node_count())
            throw validation_error("multiplex: layer '" + name +
                                   "' does not share the registry index space");
    }
}

int Multiplex::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
        throw validation_error("multiplex: unknown node label '" + label + "'");
    return it->second;
}

bool Multiplex::has_node(const std::string& label) const {
    return index_.find(label) != index_.end();
}

bool Multiplex::has_layer(const std::string& name) const {
    return layers_.find(name) != layers_.end();
}

std::vector<std::string> Multiplex::layer_names() const {
    std::vector<std::string> names;
    names.reserve(layers_.size());
    for (const auto& [name, g] : layers_) names.push_back(name);
    return names;
}

const DirectedGraph& Multiplex::layer_view(const std::string& name) const {
    auto it = layers_.find(name);
    if (it == layers_.end())
        throw validation_error("multiplex: unknown layer '" + name + "'");
    return it->second;
}

Multiplex consolidate_groups(const Multiplex& m, const GroupMap& groups,
                             ConsolidationStats* stats) {
    // group labels form the consolidated registry, sorted for determinism
    std::set<std::string> group_labels;
    std::vector<int> node_to_group(m.node_count());
    for (int i = 0; i < m.node_count(); ++i) {
        auto it = groups.find(m.label(i));
        if (it == groups.end())
            throw validation_error("consolidate: node '" + m.label(i) +
                                   "' missing from group map");
        group_labels.insert(it->second);
    }
    std::vector<std::string> labels(group_labels.begin(), group_labels.end());
    std::map<std::string, int> group_index;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) group_index[labels[i]] = i;
    for (int i = 0; i < m.node_count(); ++i)
        node_to_group[i] = group_index.at(groups.at(m.label(i)));

    ConsolidationStats local;
    std::map<std::string, DirectedGraph> layers;
    for (const auto& [name, g] : m.layers()) {
        GraphBuilder builder(static_cast<int>(labels.size()));
        for (int i = 0; i < g.node_count(); ++i) {
            for (const Edge& e : g.out_edges(i)) {
                int gi = node_to_group[i];
                int gj = node_to_group[e.neighbor];
                if (gi == gj) {
                    local.intragroup_edges_removed += 1;
                    local.intragroup_weight_removed += e.weight;
                } else {
                    builder.add(gi, gj, e.weight);
                }
            }
        }
        layers.emplace(name, std::move(builder).build());
    }
    if (stats) *stats = local;
    return Multiplex(std::move(labels), std::move(layers));
}

DirectedGraph aggregate_layers(const Multiplex& m,
                               const std::vector<std::string>& layers) {
    if (layers.empty())
        throw validation_error("aggregate: empty layer selection");
    GraphBuilder builder(m.node_count());
    for (const auto& name : layers) {
        const DirectedGraph& g = m.layer_view(name);
        for (int i = 0; i < g.node_count(); ++i) {
            for (const Edge& e : g.out_edges(i)) builder.add(i, e.neighbor, e.weight);
        }
    }
    return std::move(builder).build();
}

bool equivalent(const Multiplex& a, const Multiplex& b) {
    if (a.node_count() != b.node_count()) return false;
    std::vector<std::string> la = a.labels(), lb = b.labels();
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    if (la != lb) return false;
    if (a.layer_names() != b.layer_names()) return false;
    for (const auto& [name, ga] : a.layers()) {
        const DirectedGraph& gb = b.layer_view(name);
        if (ga.edge_count() != gb.edge_count()) return false;
        for (int i = 0; i < ga.node_count(); ++i) {
            int ib = b.index_of(a.label(i));
            auto ea = ga.out_edges(i);
            auto eb = gb.out_edges(ib);
            if (ea.size() != eb.size()) return false;
            for (const Edge& e : ea) {
                if (gb.weight(ib, b.index_of(a.label(e.neighbor))) != e.weight)
                    return false;
            }
        }
    }
    return true;
}

} // namespace multinet
