#include "multinet/synth.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "multinet/centrality.hpp"
#include "multinet/errors.hpp"
#include "multinet/random.hpp"
#include "multinet/structure.hpp"
#include "multinet/tail_fit.hpp"

namespace multinet {

using namespace multinet::rng;
using nlohmann::json;

namespace {

constexpr int kMinDegree = 3;
constexpr double kNoiseSigma = 0.5;

// Share of participants that only lend and share that only borrow. Reported
// interbank networks have a thick fringe of one-sided banks; a node with no
// in-edges or no out-edges lies on no shortest-path interior, so the role
// split also reproduces the observed mass of exact-zero betweenness. The
// fringe is small by definition, so one-sided degree draws are capped.
constexpr double kOneSidedShare = 0.25;
constexpr int kOneSidedDegreeCap = 8;

std::uint64_t pair_key(int u, int v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

// Discrete sample with P(K >= k) ~ (k / k_min)^-alpha via inverse CCDF.
int power_degree(std::mt19937_64& eng, double alpha, int cap) {
    const double u = u01_open_low(eng);
    const double k = std::floor(kMinDegree * std::pow(u, -1.0 / alpha));
    return static_cast<int>(std::min(k, static_cast<double>(cap)));
}

// Equal in/out stub totals are required for stub matching; the larger side
// is trimmed at its highest-degree entry (ties toward the earliest rank).
long equalize_stubs(std::vector<int>& out_k, std::vector<int>& in_k) {
    long so = 0, si = 0;
    for (int k : out_k) so += k;
    for (int k : in_k) si += k;
    long trimmed = 0;
    while (so != si) {
        auto& side = so > si ? out_k : in_k;
        size_t best = 0;
        for (size_t i = 1; i < side.size(); ++i)
            if (side[i] > side[best]) best = i;
        --side[best];
        ++trimmed;
        (so > si ? so : si) -= 1;
    }
    return trimmed;
}

// Directed stub matching with rejection of self-loops and edges already in
// `present`. Out-stubs are served smallest owner first: fringe nodes match
// while the in-stub pool is still rich, and the largest owners wire last into
// whatever the fringe left behind. That depletion order points the top tier
// outward to the fringe, the disassortative mixing interbank markets show.
// Stops after max_new accepted edges, trimming the shuffled out-stub list up
// front so the cap hits every owner proportionally. Returns the number of
// out-stubs abandoned after exhausting their retries.
long stub_match(std::mt19937_64& eng, const std::vector<int>& nodes,
                const std::vector<int>& out_k, const std::vector<int>& in_k,
                std::unordered_set<std::uint64_t>& present,
                std::vector<std::pair<int, int>>& edges, long max_new) {
    std::vector<int> out_stubs, in_stubs; // local indices into `nodes`
    for (size_t i = 0; i < nodes.size(); ++i) {
        out_stubs.insert(out_stubs.end(), static_cast<size_t>(out_k[i]), static_cast<int>(i));
        in_stubs.insert(in_stubs.end(), static_cast<size_t>(in_k[i]), static_cast<int>(i));
    }
    shuffle(eng, out_stubs);
    shuffle(eng, in_stubs);
    if (max_new < static_cast<long>(out_stubs.size()))
        out_stubs.resize(static_cast<size_t>(std::max<long>(max_new, 0)));
    const auto owner_degree = [&](int i) {
        return out_k[static_cast<size_t>(i)] + in_k[static_cast<size_t>(i)];
    };
    std::stable_sort(out_stubs.begin(), out_stubs.end(),
                     [&](int a, int b) { return owner_degree(a) < owner_degree(b); });
    long dropped = 0;
    for (int u : out_stubs) {
        if (in_stubs.empty()) break;
        const int src = nodes[static_cast<size_t>(u)];
        bool placed = false;
        for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
            const auto idx =
                static_cast<size_t>(uniform_below(eng, in_stubs.size()));
            const int v = nodes[static_cast<size_t>(in_stubs[idx])];
            if (v == src || present.count(pair_key(src, v))) continue;
            present.insert(pair_key(src, v));
            edges.emplace_back(src, v);
            in_stubs[idx] = in_stubs.back();
            in_stubs.pop_back();
            placed = true;
        }
        if (!placed) ++dropped;
    }
    return dropped;
}

std::string node_label(int index, int width) {
    std::string d = std::to_string(index + 1);
    if (static_cast<int>(d.size()) < width)
        d.insert(0, static_cast<size_t>(width) - d.size(), '0');
    return "B" + d;
}

} // namespace

void validate_config(const SynthConfig& cfg) {
    if (cfg.n < 2) throw validation_error("synth config field 'n' must be at least 2");
    if (cfg.layers.empty())
        throw validation_error("synth config field 'layers' must not be empty");
    if (!(cfg.kappa >= 0.0 && cfg.kappa <= 1.0))
        throw validation_error("synth config field 'kappa' must lie in [0, 1]");
    if (!(cfg.total_volume > 0.0))
        throw validation_error("synth config field 'total_volume' must be positive");
    double share_sum = 0.0;
    std::unordered_set<std::string> names;
    for (const auto& lc : cfg.layers) {
        if (lc.name.empty())
            throw validation_error("synth config field 'layers[].name' must not be empty");
        if (!names.insert(lc.name).second)
            throw validation_error("synth config field 'layers[].name' duplicates '" + lc.name +
                                   "'");
        if (lc.active < 0 || lc.active > cfg.n)
            throw validation_error("synth config field 'active' of layer '" + lc.name +
                                   "' must lie in [0, n]");
        if (lc.active == 1)
            throw validation_error("synth config field 'active' of layer '" + lc.name +
                                   "' cannot be 1: a single node cannot be active in a simple "
                                   "directed layer");
        if (!(lc.tail_alpha > 1.0))
            throw validation_error("synth config field 'tail_alpha' of layer '" + lc.name +
                                   "' must exceed 1");
        if (!(lc.volume_share >= 0.0))
            throw validation_error("synth config field 'volume_share' of layer '" + lc.name +
                                   "' must be non-negative");
        if (lc.active > 0 && !(lc.volume_share > 0.0))
            throw validation_error("synth config field 'volume_share' of layer '" + lc.name +
                                   "' must be positive when the layer has active nodes");
        if (!(lc.degree_strength_spearman >= -1.0 && lc.degree_strength_spearman <= 1.0))
            throw validation_error("synth config field 'degree_strength_spearman' of layer '" +
                                   lc.name + "' must lie in [-1, 1]");
        share_sum += lc.volume_share;
    }
    if (std::abs(share_sum - 1.0) > 1e-9)
        throw validation_error("synth config field 'volume_share' must sum to 1 across layers, "
                               "got " + std::to_string(share_sum));
}

Multiplex generate_multiplex(const SynthConfig& cfg, SynthInfo* info) {
    validate_config(cfg);
    SynthInfo scratch;
    SynthInfo& out = info ? *info : scratch;
    out = SynthInfo{};

    const int n = cfg.n;
    const int width = std::max<int>(4, static_cast<int>(std::to_string(n).size()));
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) labels.push_back(node_label(i, width));

    // Shared rank order: layer l's active set is the first `active` ranks,
    // so smaller layers nest inside larger ones and the backbone's
    // high-degree nodes stay usable by every layer.
    auto eng_perm = make_engine(derive_seed(cfg.seed, {hash_tag("synth-perm")}));
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    shuffle(eng_perm, perm);
    std::vector<int> rank(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) rank[static_cast<size_t>(perm[static_cast<size_t>(r)])] = r;

    double alpha_sum = 0.0;
    int alpha_count = 0;
    for (const auto& lc : cfg.layers)
        if (lc.overlap_target) {
            alpha_sum += lc.tail_alpha;
            ++alpha_count;
        }
    if (alpha_count == 0)
        for (const auto& lc : cfg.layers) {
            alpha_sum += lc.tail_alpha;
            ++alpha_count;
        }
    const double backbone_alpha = alpha_sum / static_cast<double>(alpha_count);

    // Backbone pool: one scale-free digraph over all ranks; each layer copies
    // a prefix of its eligible (both-endpoints-active) slice.
    // Persistent roles: some banks only lend, some only borrow, and they keep
    // that role in every segment they join.
    auto eng_side = make_engine(derive_seed(cfg.seed, {hash_tag("synth-side")}));
    std::vector<int> side(static_cast<size_t>(n), 0); // 0 both, 1 send-only, 2 receive-only
    for (int r = 0; r < n; ++r) {
        const double u = u01(eng_side);
        if (u < kOneSidedShare)
            side[static_cast<size_t>(r)] = 1;
        else if (u < 2.0 * kOneSidedShare)
            side[static_cast<size_t>(r)] = 2;
    }

    auto eng_bb = make_engine(derive_seed(cfg.seed, {hash_tag("synth-backbone")}));
    std::vector<int> bb_out(static_cast<size_t>(n)), bb_in(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) {
        const int s = side[static_cast<size_t>(r)];
        const int cap = s == 0 ? n - 1 : std::min(n - 1, kOneSidedDegreeCap);
        bb_out[static_cast<size_t>(r)] = s == 2 ? 0 : power_degree(eng_bb, backbone_alpha, cap);
        bb_in[static_cast<size_t>(r)] = s == 1 ? 0 : power_degree(eng_bb, backbone_alpha, cap);
    }
    const long bb_trimmed = equalize_stubs(bb_out, bb_in);
    long bb_stub_total = 0;
    for (int k : bb_out) bb_stub_total += k;
    std::unordered_set<std::uint64_t> bb_present;
    std::vector<std::pair<int, int>> backbone;
    const long bb_dropped =
        stub_match(eng_bb, perm, bb_out, bb_in, bb_present, backbone, LONG_MAX);
    if (bb_stub_total > 0 &&
        static_cast<double>(bb_trimmed + bb_dropped) > 0.01 * static_cast<double>(2 * bb_stub_total))
        out.notes.push_back("backbone degree sequence bias: " +
                            std::to_string(bb_trimmed + bb_dropped) + " of " +
                            std::to_string(2 * bb_stub_total) +
                            " stubs trimmed or dropped (> 1%)");

    // kappa is a Jaccard target; for two layers drawing copy prefixes of
    // fraction p from a shared pool, J ~ p / (2 - p), hence p = 2k / (1 + k).
    const double p_copy = cfg.kappa >= 1.0 ? 1.0 : 2.0 * cfg.kappa / (1.0 + cfg.kappa);
    out.copy_probability = p_copy;

    std::map<std::string, DirectedGraph> layer_graphs;
    for (size_t li = 0; li < cfg.layers.size(); ++li) {
        const auto& lc = cfg.layers[li];
        auto eng = make_engine(
            derive_seed(cfg.seed, {hash_tag("synth-layer"), static_cast<std::uint64_t>(li)}));
        GraphBuilder builder(n);
        const int a = lc.active;
        if (a == 0) {
            layer_graphs.emplace(lc.name, std::move(builder).build());
            continue;
        }

        std::vector<std::pair<int, int>> eligible;
        for (const auto& [u, v] : backbone)
            if (rank[static_cast<size_t>(u)] < a && rank[static_cast<size_t>(v)] < a)
                eligible.push_back({u, v});

        std::vector<int> nodes(static_cast<size_t>(a));
        for (int r = 0; r < a; ++r) nodes[static_cast<size_t>(r)] = perm[static_cast<size_t>(r)];
        std::vector<int> lout(static_cast<size_t>(a)), lin(static_cast<size_t>(a));
        for (int r = 0; r < a; ++r) {
            const int s = side[static_cast<size_t>(r)];
            const int cap = s == 0 ? a - 1 : std::min(a - 1, kOneSidedDegreeCap);
            lout[static_cast<size_t>(r)] = s == 2 ? 0 : power_degree(eng, lc.tail_alpha, cap);
            lin[static_cast<size_t>(r)] = s == 1 ? 0 : power_degree(eng, lc.tail_alpha, cap);
        }
        const long layer_trimmed = equalize_stubs(lout, lin);
        long e_raw = 0;
        for (int k : lout) e_raw += k;

        std::unordered_set<std::uint64_t> present;
        std::vector<std::pair<int, int>> edges;
        long copied;
        if (cfg.kappa >= 1.0) {
            copied = static_cast<long>(eligible.size());
        } else {
            copied = std::min<long>(
                std::lround(p_copy * static_cast<double>(eligible.size())), e_raw);
        }
        for (long e = 0; e < copied; ++e) {
            const auto& [u, v] = eligible[static_cast<size_t>(e)];
            present.insert(pair_key(u, v));
            edges.emplace_back(u, v);
        }
        long dropped = 0;
        if (cfg.kappa < 1.0 && e_raw > copied)
            dropped = stub_match(eng, nodes, lout, lin, present, edges, e_raw - copied);
        if (e_raw > 0 &&
            static_cast<double>(layer_trimmed + dropped) > 0.01 * static_cast<double>(2 * e_raw))
            out.notes.push_back("layer '" + lc.name + "' degree sequence bias: " +
                                std::to_string(layer_trimmed + dropped) + " of " +
                                std::to_string(2 * e_raw) + " stubs trimmed or dropped (> 1%)");

        // Deterministic activity patch: every configured-active node must
        // carry at least one edge. Attaches isolated nodes to the busiest
        // active node, alternating direction; consumes no randomness.
        std::vector<int> degl(static_cast<size_t>(n), 0);
        for (const auto& [u, v] : edges) {
            ++degl[static_cast<size_t>(u)];
            ++degl[static_cast<size_t>(v)];
        }
        int hub = nodes[0];
        for (int r = 1; r < a; ++r) {
            const int v = perm[static_cast<size_t>(r)];
            if (degl[static_cast<size_t>(v)] > degl[static_cast<size_t>(hub)]) hub = v;
        }
        int patched = 0;
        for (int r = 0; r < a; ++r) {
            const int v = perm[static_cast<size_t>(r)];
            if (degl[static_cast<size_t>(v)] != 0) continue;
            const int h = v == hub ? (r == 0 ? perm[1] : perm[0]) : hub;
            // Keep one-sided roles intact; two-sided nodes alternate.
            bool outward = patched % 2 == 0;
            if (side[static_cast<size_t>(r)] == 1) outward = true;
            if (side[static_cast<size_t>(r)] == 2) outward = false;
            const int src = outward ? v : h;
            const int dst = outward ? h : v;
            present.insert(pair_key(src, dst));
            edges.emplace_back(src, dst);
            ++degl[static_cast<size_t>(v)];
            ++degl[static_cast<size_t>(h)];
            ++patched;
        }
        if (patched > 0)
            out.notes.push_back("layer '" + lc.name + "': attached " + std::to_string(patched) +
                                " isolated active node(s) to the hub");

        // Weights: w = d_out(src)^gamma * lognormal noise. The noise is drawn
        // once so the Spearman measured during the gamma bisection is a
        // deterministic function of gamma.
        const size_t ecount = edges.size();
        std::vector<double> noise(ecount);
        for (size_t e = 0; e < ecount; ++e)
            noise[e] = std::exp(kNoiseSigma * standard_normal(eng));
        std::vector<int> dout(static_cast<size_t>(n), 0);
        for (const auto& [u, v] : edges) {
            (void)v;
            ++dout[static_cast<size_t>(u)];
        }

        std::vector<int> act_sorted = nodes;
        std::sort(act_sorted.begin(), act_sorted.end());
        NodeMetricVector deg_vec;
        deg_vec.metric = "degree";
        deg_vec.nodes = act_sorted;
        for (int v : act_sorted)
            deg_vec.values.push_back(static_cast<double>(degl[static_cast<size_t>(v)]));

        auto spearman_at = [&](double gamma, double& measured) {
            std::vector<double> strength(static_cast<size_t>(n), 0.0);
            for (size_t e = 0; e < ecount; ++e) {
                const auto& [u, v] = edges[e];
                const double w =
                    std::pow(static_cast<double>(dout[static_cast<size_t>(u)]), gamma) * noise[e];
                strength[static_cast<size_t>(u)] += w;
                strength[static_cast<size_t>(v)] += w;
            }
            NodeMetricVector str_vec;
            str_vec.metric = "strength";
            str_vec.nodes = act_sorted;
            for (int v : act_sorted) str_vec.values.push_back(strength[static_cast<size_t>(v)]);
            try {
                measured = metric_correlation(deg_vec, str_vec).spearman;
                return true;
            } catch (const error&) {
                return false;
            }
        };

        double gamma = 1.0;
        double measured = std::numeric_limits<double>::quiet_NaN();
        double glo = -0.99, ghi = 4.0;
        double mlo, mhi;
        const double target = lc.degree_strength_spearman;
        if (!spearman_at(glo, mlo) || !spearman_at(ghi, mhi)) {
            out.notes.push_back("layer '" + lc.name +
                                "': degree-strength Spearman is undefined (constant ranks); "
                                "weight exponent left at 1");
        } else if (target <= std::min(mlo, mhi)) {
            gamma = mlo <= mhi ? glo : ghi;
            spearman_at(gamma, measured);
            out.notes.push_back("layer '" + lc.name + "': Spearman target " +
                                std::to_string(target) + " below reachable range; using boundary");
            out.measured_spearman[lc.name] = measured;
        } else if (target >= std::max(mlo, mhi)) {
            gamma = mhi >= mlo ? ghi : glo;
            spearman_at(gamma, measured);
            out.notes.push_back("layer '" + lc.name + "': Spearman target " +
                                std::to_string(target) + " above reachable range; using boundary");
            out.measured_spearman[lc.name] = measured;
        } else {
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (glo + ghi);
                double m;
                spearman_at(mid, m);
                gamma = mid;
                measured = m;
                if (std::abs(m - target) <= 0.02) break;
                if ((m < target) == (mlo < mhi))
                    glo = mid;
                else
                    ghi = mid;
            }
            out.measured_spearman[lc.name] = measured;
        }
        out.gamma[lc.name] = gamma;

        double total = 0.0;
        std::vector<double> weights(ecount);
        for (size_t e = 0; e < ecount; ++e) {
            const auto& [u, v] = edges[e];
            (void)v;
            weights[e] =
                std::pow(static_cast<double>(dout[static_cast<size_t>(u)]), gamma) * noise[e];
            total += weights[e];
        }
        const double factor = lc.volume_share * cfg.total_volume / total;
        for (size_t e = 0; e < ecount; ++e)
            builder.add(edges[e].first, edges[e].second, weights[e] * factor);
        layer_graphs.emplace(lc.name, std::move(builder).build());
    }
    return Multiplex(std::move(labels), std::move(layer_graphs));
}

SynthConfig SynthConfig::paper_default() {
    SynthConfig cfg;
    cfg.n = 533;
    cfg.kappa = 0.17;
    cfg.total_volume = 220000.0;
    cfg.seed = 1;
    // Published segment shares are rounded percentages summing to 98%;
    // renormalized here so the shares partition the total volume exactly.
    cfg.layers = {
        {"OVN", 532, 2.3, 0.28 / 0.98, 0.84, true},
        {"U_ST", 521, 2.3, 0.18 / 0.98, 0.80, true},
        {"U_LT", 450, 2.4, 0.41 / 0.98, 0.72, true},
        {"S_ST", 45, 2.3, 0.09 / 0.98, 0.65, false},
        {"S_LT", 25, 2.3, 0.02 / 0.98, 0.60, false},
    };
    return cfg;
}

SynthConfig SynthConfig::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("synth config is not valid JSON: ") + e.what());
    }
    SynthConfig cfg;
    cfg.layers.clear();
    try {
        cfg.n = doc.at("n").get<int>();
        cfg.kappa = doc.value("kappa", 0.17);
        cfg.total_volume = doc.value("total_volume", 220000.0);
        cfg.seed = doc.value("seed", std::uint64_t{1});
        for (const auto& item : doc.at("layers")) {
            SynthLayerConfig lc;
            lc.name = item.at("name").get<std::string>();
            lc.active = item.at("active").get<int>();
            lc.tail_alpha = item.at("tail_alpha").get<double>();
            lc.volume_share = item.at("volume_share").get<double>();
            lc.degree_strength_spearman = item.at("degree_strength_spearman").get<double>();
            lc.overlap_target = item.value("overlap_target", true);
            cfg.layers.push_back(std::move(lc));
        }
    } catch (const json::exception& e) {
        throw validation_error(std::string("synth config is missing or mistypes a field: ") +
                               e.what());
    }
    validate_config(cfg);
    return cfg;
}

std::string SynthConfig::to_json() const {
    json doc;
    doc["n"] = n;
    doc["kappa"] = kappa;
    doc["total_volume"] = total_volume;
    doc["seed"] = seed;
    doc["layers"] = json::array();
    for (const auto& lc : layers) {
        json item;
        item["name"] = lc.name;
        item["active"] = lc.active;
        item["tail_alpha"] = lc.tail_alpha;
        item["volume_share"] = lc.volume_share;
        item["degree_strength_spearman"] = lc.degree_strength_spearman;
        item["overlap_target"] = lc.overlap_target;
        doc["layers"].push_back(item);
    }
    return doc.dump(2) + "\n";
}

namespace {

CalibrationRow make_row(std::string layer, std::string field, double target, double tolerance) {
    CalibrationRow row;
    row.layer = std::move(layer);
    row.field = std::move(field);
    row.target = target;
    row.tolerance = tolerance;
    return row;
}

void finish_row(CalibrationRow& row, double measured) {
    row.measured = measured;
    row.measurable = true;
    row.pass = std::abs(measured - row.target) <= row.tolerance;
}

} // namespace

CalibrationReport calibration_report(const Multiplex& m, const SynthConfig& cfg) {
    CalibrationReport report;

    CalibrationRow n_row = make_row("", "n", static_cast<double>(cfg.n), 0.0);
    finish_row(n_row, static_cast<double>(m.node_count()));
    report.rows.push_back(n_row);

    double grand_total = 0.0;
    for (const auto& name : m.layer_names()) grand_total += m.layer_view(name).total_weight();

    CalibrationRow vol_row =
        make_row("", "total_volume", cfg.total_volume, 1e-6 * cfg.total_volume);
    finish_row(vol_row, grand_total);
    report.rows.push_back(vol_row);

    for (const auto& lc : cfg.layers) {
        const bool have = m.has_layer(lc.name);
        const DirectedGraph* g = have ? &m.layer_view(lc.name) : nullptr;

        CalibrationRow active =
            make_row(lc.name, "active_nodes", static_cast<double>(lc.active), 2.0);
        if (have)
            finish_row(active, static_cast<double>(g->active_nodes().size()));
        else
            active.note = "layer missing";
        report.rows.push_back(active);

        CalibrationRow alpha = make_row(lc.name, "tail_alpha", lc.tail_alpha, 0.6);
        if (!have) {
            alpha.note = "layer missing";
        } else {
            std::vector<double> degrees;
            for (int v : g->active_nodes())
                degrees.push_back(static_cast<double>(g->in_degree(v) + g->out_degree(v)));
            try {
                finish_row(alpha, fit_power_law_tail(degrees).alpha);
            } catch (const error& e) {
                alpha.note = e.what();
            }
        }
        report.rows.push_back(alpha);

        CalibrationRow share = make_row(lc.name, "volume_share", lc.volume_share, 0.02);
        if (!have) {
            share.note = "layer missing";
        } else if (grand_total > 0.0) {
            finish_row(share, g->total_weight() / grand_total);
        } else {
            share.note = "multiplex carries no weight";
        }
        report.rows.push_back(share);

        CalibrationRow sp = make_row(lc.name, "degree_strength_spearman",
                                     lc.degree_strength_spearman, 0.1);
        if (!have) {
            sp.note = "layer missing";
        } else {
            try {
                const DegreeStrengthProfile prof = degree_strength(*g);
                finish_row(sp, metric_correlation(prof.total_degree(), prof.total_strength())
                                   .spearman);
            } catch (const error& e) {
                sp.note = e.what();
            }
        }
        report.rows.push_back(sp);
    }

    CalibrationRow jac = make_row("", "mean_jaccard", cfg.kappa, 0.05);
    std::vector<const DirectedGraph*> overlap_layers;
    for (const auto& lc : cfg.layers)
        if (lc.overlap_target && m.has_layer(lc.name) && m.layer_view(lc.name).edge_count() > 0)
            overlap_layers.push_back(&m.layer_view(lc.name));
    if (overlap_layers.size() >= 2) {
        double sum = 0.0;
        int pairs = 0;
        for (size_t i = 0; i < overlap_layers.size(); ++i)
            for (size_t j = i + 1; j < overlap_layers.size(); ++j) {
                sum += jaccard_similarity(*overlap_layers[i], *overlap_layers[j]);
                ++pairs;
            }
        finish_row(jac, sum / static_cast<double>(pairs));
    } else {
        jac.note = "fewer than 2 non-empty overlap-target layers";
    }
    report.rows.push_back(jac);

    bool any = false, all = true;
    for (const auto& row : report.rows) {
        if (!row.measurable) continue;
        any = true;
        if (!row.pass) all = false;
    }
    report.all_pass = any && all;
    return report;
}

std::string CalibrationReport::to_json() const {
    json doc;
    doc["all_pass"] = all_pass;
    doc["rows"] = json::array();
    for (const auto& row : rows) {
        json item;
        item["layer"] = row.layer;
        item["field"] = row.field;
        item["target"] = row.target;
        if (row.measurable)
            item["measured"] = row.measured;
        else
            item["measured"] = nullptr;
        item["tolerance"] = row.tolerance;
        item["measurable"] = row.measurable;
        item["pass"] = row.pass;
        if (!row.note.empty()) item["note"] = row.note;
        doc["rows"].push_back(item);
    }
    return doc.dump(2) + "\n";
}

} // namespace multinet
