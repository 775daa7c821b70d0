// multinet: batch front end for multiplex interbank-network analysis.
//
// Subcommands: ingest (CSV -> canonical multiplex), analyze (per-layer stats,
// centralities, cross-layer tables, tail fits), nulltest (configuration-model
// significance tests), synth (calibrated synthetic multiplex). Every command
// writes a JSON manifest listing inputs, an input digest, the seed, and all
// output files. Exit codes: 0 ok, 1 validation error, 2 computation error.

#include <cctype>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multinet/centrality.hpp"
#include "multinet/core_periphery.hpp"
#include "multinet/dbcm.hpp"
#include "multinet/detail/text.hpp"
#include "multinet/edge_list.hpp"
#include "multinet/errors.hpp"
#include "multinet/multiplex.hpp"
#include "multinet/random.hpp"
#include "multinet/structure.hpp"
#include "multinet/synth.hpp"
#include "multinet/tail_fit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace multinet;

namespace {

std::string fmt(double v) { return detail::format_double(v); }

// -- manifest ---------------------------------------------------------------

std::uint64_t fnv1a_update(std::uint64_t h, const char* data, size_t len) {
    for (size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a_file(std::uint64_t h, const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open input file '" + path.string() + "'");
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        h = fnv1a_update(h, buf, static_cast<size_t>(in.gcount()));
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

// Collects what the manifest records and writes every output file, so the
// output list can never go stale.
struct Run {
    std::string command;
    fs::path out_dir;
    std::vector<std::string> inputs;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Run(std::string cmd, const std::string& out)
        : command(std::move(cmd)), out_dir(out) {
        fs::create_directories(out_dir);
    }

    void add_input(const std::string& path) { inputs.push_back(path); }

    void write_output(const std::string& name, const std::string& content) {
        std::ofstream out(out_dir / name, std::ios::binary);
        if (!out) throw validation_error("cannot write output file '" + (out_dir / name).string() +
                                         "'");
        out << content;
        if (!out) throw validation_error("failed writing output file '" +
                                         (out_dir / name).string() + "'");
        outputs.push_back(name);
    }

    // The digest is a function of the input file bytes alone.
    std::string input_digest() const {
        std::uint64_t h = 14695981039346656037ULL;
        for (const auto& path : inputs) h = fnv1a_file(h, path);
        return hex64(h);
    }

    void finish() {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        const double ms =
            std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count() / 1000.0;
        json doc;
        doc["command"] = command;
        doc["inputs"] = inputs;
        doc["input_digest"] = input_digest();
        doc["seed"] = seed;
        doc["version"] = MULTINET_VERSION;
        doc["outputs"] = outputs;
        doc["duration_ms"] = ms; // varies run to run; all other bytes are seed-determined
        std::ofstream out(out_dir / "manifest.json", std::ios::binary);
        out << doc.dump(2) << "\n";
    }
};

std::string sanitize(const std::string& name) {
    std::string s = name;
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_'))
            c = '_';
    return s;
}

template <class F>
auto with_context(const std::string& ctx, F&& f) {
    try {
        return f();
    } catch (const validation_error& e) {
        throw validation_error(ctx + ": " + e.what());
    } catch (const computation_error& e) {
        throw computation_error(ctx + ": " + e.what());
    }
}

std::optional<CorrelationPair> try_correlation(const NodeMetricVector& a,
                                               const NodeMetricVector& b) {
    try {
        return metric_correlation(a, b);
    } catch (const error&) {
        return std::nullopt;
    }
}

// -- shared emitters ----------------------------------------------------------

std::string metric_csv(const Multiplex& m, const NodeMetricVector& v) {
    std::string out = "node,value\n";
    for (size_t i = 0; i < v.nodes.size(); ++i)
        out += m.label(v.nodes[i]) + "," + fmt(v.values[i]) + "\n";
    return out;
}

std::string ccdf_csv(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    std::string out = "value,ccdf\n";
    for (size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && values[i] == values[i - 1]) continue;
        // fraction of samples >= values[i]
        out += fmt(values[i]) + "," + fmt(static_cast<double>(values.size() - i) / n) + "\n";
    }
    return out;
}

json tail_fit_json(const TailFit& fit, size_t samples) {
    json doc;
    doc["alpha"] = fit.alpha;
    doc["alpha_convention"] = "ccdf exponent: P(X > x) ~ x^-alpha; density exponent is alpha + 1";
    doc["x_min"] = fit.x_min;
    doc["ks"] = fit.ks;
    doc["n_tail"] = fit.n_tail;
    doc["samples"] = samples;
    return doc;
}

json distribution_json(const NullDistribution& d) {
    json doc;
    doc["mean"] = d.mean;
    doc["sd"] = d.sd;
    doc["q01"] = d.quantile(0.01);
    doc["q99"] = d.quantile(0.99);
    return doc;
}

// -- ingest -------------------------------------------------------------------

struct IngestArgs {
    std::string edges;
    std::string groups;
    std::string out;
};

void cmd_ingest(const IngestArgs& args) {
    Run run("ingest", args.out);
    run.add_input(args.edges);
    if (!args.groups.empty()) run.add_input(args.groups);

    ParseDiagnostics diag;
    Multiplex m = parse_edge_list_file(args.edges, EdgeListFormat::csv, &diag);
    ConsolidationStats consolidation;
    if (!args.groups.empty()) {
        const GroupMap groups = parse_group_map_file(args.groups);
        m = consolidate_groups(m, groups, &consolidation);
    }

    run.write_output("multiplex.csv", serialize_edge_list(m));
    json d;
    d["rows"] = diag.rows;
    d["self_loops_dropped"] = diag.self_loops_dropped;
    d["zero_weight_dropped"] = diag.zero_weight_dropped;
    d["duplicates_summed"] = diag.duplicates_summed;
    d["nodes"] = m.node_count();
    d["layers"] = m.layer_count();
    if (!args.groups.empty()) {
        d["intragroup_edges_removed"] = consolidation.intragroup_edges_removed;
        d["intragroup_weight_removed"] = consolidation.intragroup_weight_removed;
    }
    run.write_output("ingest_diagnostics.json", d.dump(2) + "\n");
    run.finish();
}

// -- analyze ------------------------------------------------------------------

struct AnalyzeArgs {
    std::string input;
    std::vector<std::string> layers;
    std::vector<std::string> metrics;
    std::string out;
};

void cmd_analyze(const AnalyzeArgs& args) {
    Run run("analyze", args.out);
    run.add_input(args.input);
    const Multiplex m = parse_edge_list_file(args.input);

    std::vector<std::string> layers = args.layers.empty() ? m.layer_names() : args.layers;
    for (const auto& name : layers)
        if (!m.has_layer(name)) throw validation_error("unknown layer '" + name + "'");

    std::vector<Metric> metrics;
    if (args.metrics.empty()) {
        metrics = {Metric::degree, Metric::strength, Metric::betweenness, Metric::eigenvector};
    } else {
        for (const auto& name : args.metrics) metrics.push_back(metric_from_name(name));
    }

    // layer_stats.csv covers every selected layer, including empty ones
    {
        std::string out =
            "layer,active_nodes,edges,volume,density,reciprocity,clustering,assortativity,"
            "diameter\n";
        for (const auto& name : layers) {
            const LayerStats s =
                with_context("layer '" + name + "'", [&] { return layer_stats(m.layer_view(name)); });
            out += name + "," + std::to_string(s.active_nodes) + "," + std::to_string(s.edges) +
                   "," + fmt(s.volume);
            auto opt = [&](const std::optional<double>& v) {
                out += ",";
                if (v) out += fmt(*v);
            };
            opt(s.density);
            opt(s.reciprocity);
            opt(s.clustering);
            opt(s.assortativity);
            out += ",";
            if (s.diameter) out += std::to_string(*s.diameter);
            out += "\n";
        }
        run.write_output("layer_stats.csv", out);
    }

    // metric vectors, computed once per (layer, metric); empty layers are
    // reported in layer_stats only
    std::vector<std::string> live;
    for (const auto& name : layers)
        if (m.layer_view(name).edge_count() > 0) live.push_back(name);

    std::map<std::pair<std::string, Metric>, NodeMetricVector> computed;
    for (const auto& name : live) {
        const DirectedGraph& g = m.layer_view(name);
        const DegreeStrengthProfile prof = degree_strength(g);
        {
            std::string out = "node,in_degree,out_degree,in_strength,out_strength\n";
            for (size_t i = 0; i < prof.nodes.size(); ++i)
                out += m.label(prof.nodes[i]) + "," + std::to_string(prof.in_degree[i]) + "," +
                       std::to_string(prof.out_degree[i]) + "," + fmt(prof.in_strength[i]) + "," +
                       fmt(prof.out_strength[i]) + "\n";
            run.write_output(sanitize(name) + "_degree_strength.csv", out);
        }
        for (Metric metric : metrics) {
            const std::string ctx = "layer '" + name + "', metric '" + metric_name(metric) + "'";
            NodeMetricVector v = with_context(ctx, [&] { return metric_vector(g, metric); });
            run.write_output(sanitize(name) + "_" + metric_name(metric) + ".csv",
                             metric_csv(m, v));
            run.write_output(sanitize(name) + "_" + metric_name(metric) + "_ccdf.csv",
                             ccdf_csv(v.values));
            std::vector<double> positive;
            for (double x : v.values)
                if (x > 0.0) positive.push_back(x);
            try {
                const TailFit fit = fit_power_law_tail(positive);
                run.write_output(sanitize(name) + "_" + metric_name(metric) + "_tail.json",
                                 tail_fit_json(fit, positive.size()).dump(2) + "\n");
            } catch (const error&) {
                // too few or degenerate positive samples: no tail to report
            }
            computed.emplace(std::make_pair(name, metric), std::move(v));
        }
    }

    // within-layer correlations between the selected metrics
    for (const auto& name : live) {
        std::string out = "metric_a,metric_b,pearson,spearman,common_nodes\n";
        for (size_t i = 0; i < metrics.size(); ++i)
            for (size_t j = i + 1; j < metrics.size(); ++j) {
                const auto& a = computed.at({name, metrics[i]});
                const auto& b = computed.at({name, metrics[j]});
                out += metric_name(metrics[i]) + "," + metric_name(metrics[j]) + ",";
                if (auto c = try_correlation(a, b))
                    out += fmt(c->pearson) + "," + fmt(c->spearman) + "," +
                           std::to_string(c->sample_size);
                else
                    out += ",,";
                out += "\n";
            }
        run.write_output(sanitize(name) + "_metric_correlations.csv", out);
    }

    // cross-layer comparisons: same metric, two layers, nodes active in both
    if (live.size() >= 2) {
        std::string summary = "metric,layer_a,layer_b,pearson,spearman,common_nodes\n";
        for (Metric metric : metrics)
            for (size_t i = 0; i < live.size(); ++i)
                for (size_t j = i + 1; j < live.size(); ++j) {
                    const auto& a = computed.at({live[i], metric});
                    const auto& b = computed.at({live[j], metric});
                    summary += metric_name(metric) + "," + live[i] + "," + live[j] + ",";
                    if (auto c = try_correlation(a, b)) {
                        summary += fmt(c->pearson) + "," + fmt(c->spearman) + "," +
                                   std::to_string(c->sample_size);
                        std::string table = "node,value_a,value_b\n";
                        for (size_t k = 0; k < a.nodes.size(); ++k) {
                            const int node = a.nodes[k];
                            if (!b.defined_for(node)) continue;
                            table += m.label(node) + "," + fmt(a.values[k]) + "," +
                                     fmt(b.value_of(node)) + "\n";
                        }
                        run.write_output(metric_name(metric) + "_" + sanitize(live[i]) + "_vs_" +
                                             sanitize(live[j]) + ".csv",
                                         table);
                    } else {
                        summary += ",,";
                    }
                    summary += "\n";
                }
        run.write_output("cross_layer_correlations.csv", summary);
    }

    // pairwise edge-set similarity over the selected layers
    if (live.size() >= 2) {
        std::map<std::string, DirectedGraph> selected;
        for (const auto& name : live) selected.emplace(name, m.layer_view(name));
        const SimilarityMatrix sim = similarity_matrix(Multiplex(m.labels(), std::move(selected)));
        std::string out = "layer";
        for (const auto& name : sim.layers) out += "," + name;
        out += "\n";
        for (size_t i = 0; i < sim.layers.size(); ++i) {
            out += sim.layers[i];
            for (size_t j = 0; j < sim.layers.size(); ++j) out += "," + fmt(sim.values[i][j]);
            out += "\n";
        }
        run.write_output("similarity_matrix.csv", out);
        json s;
        s["off_diagonal_mean"] = sim.off_diagonal_mean;
        run.write_output("similarity_summary.json", s.dump(2) + "\n");
    }

    run.finish();
}

// -- nulltest -------------------------------------------------------------------

struct NulltestArgs {
    std::string input;
    std::string layer;
    std::string metric = "betweenness";
    int replicates = 999;
    double alpha = 0.01;
    std::uint64_t seed = 0;
    std::string definition = "be";
    int restarts = 50;
    std::string out;
};

CpDefinition parse_definition(const std::string& name) {
    if (name == "be") return CpDefinition::be;
    if (name == "cvp") return CpDefinition::cvp;
    throw validation_error("unknown core-periphery definition '" + name +
                           "' (expected be or cvp)");
}

void cmd_nulltest(const NulltestArgs& args) {
    Run run("nulltest", args.out);
    run.add_input(args.input);
    run.seed = args.seed;
    const Multiplex m = parse_edge_list_file(args.input);
    const DirectedGraph& g = m.layer_view(args.layer);
    if (g.active_nodes().size() < 3)
        throw validation_error("layer '" + args.layer +
                               "' has fewer than 3 active nodes; nothing to test");
    const Metric metric = metric_from_name(args.metric);
    const CpDefinition definition = parse_definition(args.definition);

    const DbcmModel model =
        with_context("layer '" + args.layer + "'", [&] { return fit_dbcm(g); });
    {
        std::string out = "node,x,y\n";
        for (int i = 0; i < model.n; ++i)
            out += m.label(i) + "," + fmt(model.x[static_cast<size_t>(i)]) + "," +
                   fmt(model.y[static_cast<size_t>(i)]) + "\n";
        run.write_output("dbcm_model.csv", out);
    }
    {
        json d;
        d["max_residual"] = model.diagnostics.max_residual;
        d["sweeps"] = model.diagnostics.sweeps;
        d["near_boundary"] = model.diagnostics.near_boundary;
        d["warnings"] = model.diagnostics.warnings;
        d["log_likelihood"] = model.diagnostics.likelihood.empty()
                                  ? json(nullptr)
                                  : json(model.diagnostics.likelihood.back());
        d["sweep_log_likelihood"] = model.diagnostics.likelihood;
        run.write_output("dbcm_diagnostics.json", d.dump(2) + "\n");
    }

    const PValueTable table = centrality_pvalues(g, model, metric, args.replicates, args.alpha,
                                                 args.seed);
    {
        std::string out = "node,observed,null_mean,null_sd,p_upper,p_lower,rejected\n";
        for (size_t i = 0; i < table.nodes.size(); ++i)
            out += m.label(table.nodes[i]) + "," + fmt(table.observed[i]) + "," +
                   fmt(table.null_mean[i]) + "," + fmt(table.null_sd[i]) + "," +
                   fmt(table.p_upper[i]) + "," + fmt(table.p_lower[i]) + "," +
                   (table.rejected[i] ? "1" : "0") + "\n";
        run.write_output("pvalues.csv", out);
    }
    {
        std::string out = "node,observed,null_mean\n";
        for (size_t i = 0; i < table.nodes.size(); ++i)
            out += m.label(table.nodes[i]) + "," + fmt(table.observed[i]) + "," +
                   fmt(table.null_mean[i]) + "\n";
        run.write_output("observed_vs_null.csv", out);
    }

    int rejected = 0;
    for (char r : table.rejected) rejected += r ? 1 : 0;
    NodeMetricVector obs_vec{"observed", table.nodes, table.observed, {}};
    NodeMetricVector null_vec{"null_mean", table.nodes, table.null_mean, {}};
    const auto scatter_corr = try_correlation(obs_vec, null_vec);

    // a separate stream for the core-periphery null keeps its samples
    // independent of the p-value replicates
    const CorePeripheryNullReport cp = core_periphery_vs_null(
        g, model, definition, args.replicates,
        rng::derive_seed(args.seed, {rng::hash_tag("nulltest-cp")}), args.restarts);
    {
        json d;
        d["definition"] = args.definition;
        d["replicates"] = args.replicates;
        d["observed_core_size"] = cp.observed.core_size();
        d["observed_error"] = cp.observed.error;
        d["core_size"] = distribution_json(cp.core_size);
        d["core_size_low_99"] = cp.core_size_low_99;
        d["core_size_high_99"] = cp.core_size_high_99;
        d["observed_core_size_in_99"] = cp.observed_core_size_in_99;
        d["agreement"] = distribution_json(cp.agreement);
        d["mean_agreement"] = cp.mean_agreement;
        d["error_score"] = distribution_json(cp.error_score);
        std::string core = "node,is_core\n";
        for (size_t i = 0; i < cp.observed.nodes.size(); ++i)
            core += m.label(cp.observed.nodes[i]) + std::string(",") +
                    (cp.observed.is_core[i] ? "1" : "0") + "\n";
        run.write_output("core_periphery.csv", core);
        run.write_output("cp_null_report.json", d.dump(2) + "\n");
    }
    {
        json s;
        s["layer"] = args.layer;
        s["metric"] = args.metric;
        s["replicates"] = args.replicates;
        s["alpha"] = args.alpha;
        s["rejected_count"] = rejected;
        s["tested_nodes"] = table.nodes.size();
        if (scatter_corr) {
            s["observed_vs_null_pearson"] = scatter_corr->pearson;
            s["observed_vs_null_spearman"] = scatter_corr->spearman;
        } else {
            s["observed_vs_null_pearson"] = nullptr;
            s["observed_vs_null_spearman"] = nullptr;
        }
        s["model_max_residual"] = model.diagnostics.max_residual;
        run.write_output("nulltest_summary.json", s.dump(2) + "\n");
    }
    run.finish();
}

// -- synth ----------------------------------------------------------------------

struct SynthArgs {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out;
};

void cmd_synth(const SynthArgs& args) {
    Run run("synth", args.out);
    SynthConfig cfg;
    if (args.config.empty()) {
        cfg = SynthConfig::paper_default();
    } else {
        run.add_input(args.config);
        std::ifstream in(args.config, std::ios::binary);
        if (!in) throw validation_error("cannot open config '" + args.config + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        cfg = SynthConfig::from_json(buf.str());
    }
    if (args.seed_given) cfg.seed = args.seed;
    run.seed = cfg.seed;

    SynthInfo info;
    const Multiplex m = generate_multiplex(cfg, &info);
    run.write_output("multiplex.csv", serialize_edge_list(m));
    run.write_output("synth_config.json", cfg.to_json());
    {
        json d;
        d["copy_probability"] = info.copy_probability;
        d["gamma"] = info.gamma;
        d["measured_spearman"] = info.measured_spearman;
        d["notes"] = info.notes;
        run.write_output("synth_info.json", d.dump(2) + "\n");
    }
    const CalibrationReport report = calibration_report(m, cfg);
    run.write_output("calibration_report.json", report.to_json());
    run.finish();
    if (!report.all_pass)
        std::cerr << json{{"warning", "calibration"},
                          {"message", "one or more calibration rows failed; see "
                                      "calibration_report.json"}}
                         .dump()
                  << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiplex interbank-network analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MULTINET_VERSION);

    IngestArgs ingest;
    auto* cmd_in = app.add_subcommand("ingest", "read edge CSV, emit canonical multiplex");
    cmd_in->add_option("edges", ingest.edges, "edge-list CSV (layer,source,target,weight)")
        ->required();
    cmd_in->add_option("groups", ingest.groups, "optional bank,group consolidation CSV");
    cmd_in->add_option("--out", ingest.out, "output directory")->required();

    AnalyzeArgs analyze;
    auto* cmd_an = app.add_subcommand("analyze", "layer stats, centralities, cross-layer tables");
    cmd_an->add_option("multiplex", analyze.input, "canonical multiplex CSV")->required();
    cmd_an->add_option("--layers", analyze.layers, "layers to analyze (default: all)")
        ->delimiter(',');
    cmd_an
        ->add_option("--metrics", analyze.metrics,
                     "metrics: degree, strength, betweenness, eigenvector (default: all)")
        ->delimiter(',');
    cmd_an->add_option("--out", analyze.out, "output directory")->required();

    NulltestArgs nulltest;
    auto* cmd_nt = app.add_subcommand("nulltest", "configuration-model significance tests");
    cmd_nt->add_option("multiplex", nulltest.input, "canonical multiplex CSV")->required();
    cmd_nt->add_option("--layer", nulltest.layer, "layer to test")->required();
    cmd_nt->add_option("--metric", nulltest.metric, "metric to test (default: betweenness)");
    cmd_nt->add_option("--replicates", nulltest.replicates, "null-sample count (default: 999)");
    cmd_nt->add_option("--alpha", nulltest.alpha, "rejection level (default: 0.01)");
    cmd_nt->add_option("--seed", nulltest.seed, "master seed (default: 0)");
    cmd_nt->add_option("--definition", nulltest.definition,
                       "core-periphery error definition: be or cvp (default: be)");
    cmd_nt->add_option("--restarts", nulltest.restarts,
                       "core-periphery greedy restarts (default: 50)");
    cmd_nt->add_option("--out", nulltest.out, "output directory")->required();

    SynthArgs synth;
    auto* cmd_sy = app.add_subcommand("synth", "generate a calibrated synthetic multiplex");
    cmd_sy->add_option("config", synth.config, "JSON config (default: built-in calibration)");
    auto* seed_opt = cmd_sy->add_option("--seed", synth.seed, "overrides the config seed");
    cmd_sy->add_option("--out", synth.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*cmd_in) cmd_ingest(ingest);
        if (*cmd_an) cmd_analyze(analyze);
        if (*cmd_nt) cmd_nulltest(nulltest);
        if (*cmd_sy) {
            synth.seed_given = seed_opt->count() > 0;
            cmd_synth(synth);
        }
    } catch (const validation_error& e) {
        std::cerr << json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const computation_error& e) {
        std::cerr << json{{"error", "computation"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << json{{"error", "computation"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
    return 0;
}
