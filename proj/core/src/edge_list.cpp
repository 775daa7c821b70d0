#include "multinet/edge_list.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "multinet/detail/text.hpp"
#include "multinet/errors.hpp"

namespace multinet {

namespace {

constexpr std::string_view kEdgeHeader = "layer,source,target,weight";
constexpr std::string_view kGroupHeader = "bank,group";

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

[[noreturn]] void bad_row(std::int64_t line_no, const std::string& what) {
    throw validation_error("edge list line " + std::to_string(line_no) + ": " + what);
}

} // namespace

Multiplex parse_edge_list(std::istream& in, EdgeListFormat format,
                          ParseDiagnostics* diagnostics) {
    if (format != EdgeListFormat::csv)
        throw validation_error("edge list: unsupported format");

    ParseDiagnostics diag;
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> index;
    auto intern = [&](std::string_view label) {
        auto it = index.find(std::string(label));
        if (it != index.end()) return it->second;
        int id = static_cast<int>(labels.size());
        labels.emplace_back(label);
        index.emplace(labels.back(), id);
        return id;
    };

    // per layer: (src, dst) -> summed weight
    std::map<std::string, std::map<std::pair<int, int>, double>> layer_edges;

    std::string line;
    std::int64_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view row = strip_cr(line);
        if (row.empty()) continue;
        if (!header_seen) {
            if (row != kEdgeHeader)
                bad_row(line_no, "expected header '" + std::string(kEdgeHeader) + "'");
            header_seen = true;
            continue;
        }
        auto fields = detail::split(row, ',');
        if (fields.size() != 4) bad_row(line_no, "expected 4 fields");
        auto [layer, source, target, weight_text] =
            std::tie(fields[0], fields[1], fields[2], fields[3]);
        if (layer.empty() || source.empty() || target.empty())
            bad_row(line_no, "empty field");
        double w = 0.0;
        if (!detail::parse_double(weight_text, w) || !std::isfinite(w))
            bad_row(line_no, "malformed weight '" + std::string(weight_text) + "'");
        if (w < 0.0) bad_row(line_no, "negative weight");

        ++diag.rows;
        int src = intern(source);
        int dst = intern(target);
        auto& edges = layer_edges[std::string(layer)];
        if (src == dst) {
            ++diag.self_loops_dropped;
            continue;
        }
        if (w == 0.0) {
            ++diag.zero_weight_dropped;
            continue;
        }
        auto [it, inserted] = edges.emplace(std::make_pair(src, dst), w);
        if (!inserted) {
            it->second += w;
            ++diag.duplicates_summed;
        }
    }

    std::map<std::string, DirectedGraph> built;
    for (auto& [name, edges] : layer_edges) {
        GraphBuilder builder(static_cast<int>(labels.size()));
        for (const auto& [key, w] : edges) builder.add(key.first, key.second, w);
        built.emplace(name, std::move(builder).build());
    }
    if (diagnostics) *diagnostics = diag;
    return Multiplex(std::move(labels), std::move(built));
}

Multiplex parse_edge_list_file(const std::string& path, EdgeListFormat format,
                               ParseDiagnostics* diagnostics) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open edge list file '" + path + "'");
    return parse_edge_list(in, format, diagnostics);
}

void serialize_edge_list(const Multiplex& m, std::ostream& out) {
    out << kEdgeHeader << '\n';
    for (const auto& [name, g] : m.layers()) {
        std::vector<std::tuple<std::string, std::string, double>> rows;
        rows.reserve(static_cast<std::size_t>(g.edge_count()));
        for (int i = 0; i < g.node_count(); ++i) {
            for (const Edge& e : g.out_edges(i))
                rows.emplace_back(m.label(i), m.label(e.neighbor), e.weight);
        }
        std::sort(rows.begin(), rows.end());
        for (const auto& [src, dst, w] : rows) {
            out << name << ',' << src << ',' << dst << ','
                << detail::format_double(w) << '\n';
        }
    }
}

std::string serialize_edge_list(const Multiplex& m) {
    std::ostringstream out;
    serialize_edge_list(m, out);
    return out.str();
}

GroupMap parse_group_map(std::istream& in) {
    GroupMap map;
    std::string line;
    std::int64_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view row = strip_cr(line);
        if (row.empty()) continue;
        if (!header_seen) {
            if (row != kGroupHeader)
                throw validation_error("group map line " + std::to_string(line_no) +
                                       ": expected header '" + std::string(kGroupHeader) + "'");
            header_seen = true;
            continue;
        }
        auto fields = detail::split(row, ',');
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            throw validation_error("group map line " + std::to_string(line_no) +
                                   ": expected 'bank,group'");
        auto [it, inserted] = map.emplace(std::string(fields[0]), std::string(fields[1]));
        if (!inserted && it->second != fields[1])
            throw validation_error("group map line " + std::to_string(line_no) +
                                   ": conflicting group for bank '" +
                                   std::string(fields[0]) + "'");
    }
    return map;
}

GroupMap parse_group_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open group map file '" + path + "'");
    return parse_group_map(in);
}

} // namespace multinet
