#pragma once

#include <iosfwd>
#include <string>

#include "multinet/multiplex.hpp"

namespace multinet {

enum class EdgeListFormat {
    csv, // header "layer,source,target,weight"
};

/// Ingestion counters. Self-loop and zero-weight rows are dropped (counted,
/// not errors); duplicate (layer, source, target) rows are summed.
struct ParseDiagnostics {
    std::int64_t rows = 0;
    std::int64_t self_loops_dropped = 0;
    std::int64_t zero_weight_dropped = 0;
    std::int64_t duplicates_summed = 0;
};

/// Reads an edge-list stream into a Multiplex. Node labels and layer names
/// are registered for every well-formed row, including dropped ones.
/// Malformed rows and negative weights raise validation_error with the
/// 1-based line number.
Multiplex parse_edge_list(std::istream& in,
                          EdgeListFormat format = EdgeListFormat::csv,
                          ParseDiagnostics* diagnostics = nullptr);

Multiplex parse_edge_list_file(const std::string& path,
                               EdgeListFormat format = EdgeListFormat::csv,
                               ParseDiagnostics* diagnostics = nullptr);

/// Canonical serialization: header plus rows sorted by (layer, source,
/// target) labels, weights printed in shortest round-trip form.
void serialize_edge_list(const Multiplex& m, std::ostream& out);
std::string serialize_edge_list(const Multiplex& m);

/// Reads a "bank,group" CSV.
GroupMap parse_group_map(std::istream& in);
GroupMap parse_group_map_file(const std::string& path);

} // namespace multinet
