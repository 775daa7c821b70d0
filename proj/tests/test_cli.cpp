// End-to-end tests that spawn the installed binary. The binary path comes in
// through MULTINET_CLI_PATH at compile time.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multinet/edge_list.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "multinet_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing file: " << p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

CliResult run_cli(const std::string& args, const fs::path& scratch,
                  const std::string& env = "") {
    const fs::path out = scratch / "stdout.txt";
    const fs::path err = scratch / "stderr.txt";
    std::string cmd = env.empty() ? "" : env + " ";
    cmd += "\"" MULTINET_CLI_PATH "\" " + args + " >\"" + out.string() + "\" 2>\"" +
           err.string() + "\"";
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = read_file(out);
    r.err = read_file(err);
    return r;
}

// Every file the manifest lists must exist, and the header fields must be
// filled in.
json check_manifest(const fs::path& dir, const std::string& command) {
    const json m = read_json(dir / "manifest.json");
    CHECK(m.at("command").get<std::string>() == command);
    CHECK(m.at("input_digest").get<std::string>().size() == 16);
    CHECK(!m.at("version").get<std::string>().empty());
    CHECK(m.at("duration_ms").get<double>() >= 0.0);
    for (const auto& name : m.at("outputs"))
        CHECK_MESSAGE(fs::exists(dir / name.get<std::string>()),
                      "manifest lists missing output " << name.get<std::string>());
    return m;
}

// Reruns must agree byte for byte, except the manifest's wall-clock field.
void check_identical_runs(const fs::path& a, const fs::path& b) {
    std::vector<std::string> names_a, names_b;
    for (const auto& e : fs::directory_iterator(a)) names_a.push_back(e.path().filename());
    for (const auto& e : fs::directory_iterator(b)) names_b.push_back(e.path().filename());
    std::sort(names_a.begin(), names_a.end());
    std::sort(names_b.begin(), names_b.end());
    CHECK(names_a == names_b);
    for (const auto& name : names_a) {
        if (name == "manifest.json") {
            json ma = read_json(a / name);
            json mb = read_json(b / name);
            ma.erase("duration_ms");
            mb.erase("duration_ms");
            CHECK_MESSAGE(ma == mb, "manifests disagree beyond duration_ms");
        } else {
            CHECK_MESSAGE(read_file(a / name) == read_file(b / name),
                          name << " differs between identical runs");
        }
    }
}

const char* kTwoLayerCsv =
    "layer,source,target,weight\n"
    "A,a,b,1\n"
    "A,b,c,2\n"
    "A,c,a,3\n"
    "A,a,c,4\n"
    "B,a,b,5\n"
    "B,b,c,6\n"
    "B,c,a,7\n"
    "B,a,c,8\n";

std::string circulant_csv(int n, int d, const std::string& layer) {
    std::string out = "layer,source,target,weight\n";
    for (int i = 0; i < n; ++i)
        for (int k = 1; k <= d; ++k)
            out += layer + ",n" + std::to_string(i) + ",n" + std::to_string((i + k) % n) +
                   ",1\n";
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

} // namespace

TEST_CASE("ingest canonicalizes and reports the drop counters") {
    const auto dir = fresh_dir("ingest");
    write_file(dir / "raw.csv",
               "layer,source,target,weight\n"
               "ovn,B2,B1,3.5\n"
               "ovn,B1,B2,1\n"
               "ovn,B1,B2,2\n"
               "ovn,B3,B3,9\n"
               "lt,B1,B3,0\n"
               "lt,B2,B1,4\n");
    const auto out = dir / "out";
    const auto r = run_cli("ingest \"" + (dir / "raw.csv").string() + "\" --out \"" +
                               out.string() + "\"",
                           dir);
    REQUIRE(r.exit_code == 0);

    CHECK(read_file(out / "multiplex.csv") ==
          "layer,source,target,weight\n"
          "lt,B2,B1,4\n"
          "ovn,B1,B2,3\n"
          "ovn,B2,B1,3.5\n");
    const json d = read_json(out / "ingest_diagnostics.json");
    CHECK(d.at("rows") == 6);
    CHECK(d.at("self_loops_dropped") == 1);
    CHECK(d.at("zero_weight_dropped") == 1);
    CHECK(d.at("duplicates_summed") == 1);
    CHECK(d.at("nodes") == 3); // dropped rows still register their labels
    CHECK(d.at("layers") == 2);
    check_manifest(out, "ingest");

    // the digest is a pure function of the input bytes
    const auto out2 = dir / "out2";
    REQUIRE(run_cli("ingest \"" + (dir / "raw.csv").string() + "\" --out \"" + out2.string() +
                        "\"",
                    dir)
                .exit_code == 0);
    check_identical_runs(out, out2);
}

TEST_CASE("ingest consolidates banking groups") {
    const auto dir = fresh_dir("ingest_groups");
    write_file(dir / "raw.csv",
               "layer,source,target,weight\n"
               "ovn,A1,A2,1\n"
               "ovn,A1,B1,2\n"
               "ovn,A2,B1,3\n");
    write_file(dir / "groups.csv", "bank,group\nA1,G1\nA2,G1\nB1,G2\n");
    const auto out = dir / "out";
    const auto r = run_cli("ingest \"" + (dir / "raw.csv").string() + "\" \"" +
                               (dir / "groups.csv").string() + "\" --out \"" + out.string() +
                               "\"",
                           dir);
    REQUIRE(r.exit_code == 0);
    CHECK(read_file(out / "multiplex.csv") ==
          "layer,source,target,weight\n"
          "ovn,G1,G2,5\n");
    const json d = read_json(out / "ingest_diagnostics.json");
    CHECK(d.at("intragroup_edges_removed") == 1);
    CHECK(d.at("intragroup_weight_removed") == 1.0);
    CHECK(d.at("nodes") == 2);
    const json m = check_manifest(out, "ingest");
    CHECK(m.at("inputs").size() == 2);
}

TEST_CASE("ingest rejects malformed rows with the line number") {
    const auto dir = fresh_dir("ingest_bad");
    write_file(dir / "raw.csv",
               "layer,source,target,weight\n"
               "ovn,B1,B2,1\n"
               "ovn,B1,B2\n");
    const auto r = run_cli("ingest \"" + (dir / "raw.csv").string() + "\" --out \"" +
                               (dir / "out").string() + "\"",
                           dir);
    CHECK(r.exit_code == 1);
    const json e = json::parse(r.err);
    CHECK(e.at("error") == "validation");
    CHECK(e.at("message").get<std::string>().find("line 3") != std::string::npos);
}

TEST_CASE("analyze writes the full inventory for a two-layer multiplex") {
    const auto dir = fresh_dir("analyze");
    write_file(dir / "m.csv", kTwoLayerCsv);
    const auto out = dir / "out";
    const auto r =
        run_cli("analyze \"" + (dir / "m.csv").string() + "\" --out \"" + out.string() + "\"",
                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const char* metrics[] = {"degree", "strength", "betweenness", "eigenvector"};
    for (const std::string layer : {"A", "B"}) {
        CHECK(fs::exists(out / (layer + "_degree_strength.csv")));
        CHECK(fs::exists(out / (layer + "_metric_correlations.csv")));
        for (const std::string metric : metrics) {
            CHECK(fs::exists(out / (layer + "_" + metric + ".csv")));
            CHECK(fs::exists(out / (layer + "_" + metric + "_ccdf.csv")));
        }
    }
    for (const std::string metric : metrics)
        CHECK(fs::exists(out / (metric + "_A_vs_B.csv")));

    const auto stats = split_lines(read_file(out / "layer_stats.csv"));
    REQUIRE(stats.size() == 3);
    CHECK(stats[0] ==
          "layer,active_nodes,edges,volume,density,reciprocity,clustering,assortativity,"
          "diameter");
    CHECK(split_fields(stats[1])[0] == "A");
    CHECK(split_fields(stats[1])[1] == "3");
    CHECK(split_fields(stats[1])[2] == "4");

    // identical edge sets: cross-layer degree correlation is 1 over 3 nodes
    bool found = false;
    for (const auto& line : split_lines(read_file(out / "cross_layer_correlations.csv"))) {
        const auto f = split_fields(line);
        if (f.size() == 6 && f[0] == "degree" && f[1] == "A" && f[2] == "B") {
            found = true;
            CHECK(std::stod(f[3]) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::stod(f[4]) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(f[5] == "3");
        }
    }
    CHECK(found);

    CHECK(read_json(out / "similarity_summary.json").at("off_diagonal_mean") == 1.0);
    const auto sim = split_lines(read_file(out / "similarity_matrix.csv"));
    REQUIRE(sim.size() == 3);
    CHECK(sim[0] == "layer,A,B");
    CHECK(sim[1] == "A,1,1");
    CHECK(sim[2] == "B,1,1");

    check_manifest(out, "analyze");
}

TEST_CASE("analyze narrows to the selected layers and metrics") {
    const auto dir = fresh_dir("analyze_narrow");
    write_file(dir / "m.csv", kTwoLayerCsv);
    const auto out = dir / "out";
    const auto r = run_cli("analyze \"" + (dir / "m.csv").string() +
                               "\" --layers A --metrics degree --out \"" + out.string() + "\"",
                           dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    CHECK(fs::exists(out / "A_degree.csv"));
    CHECK_FALSE(fs::exists(out / "B_degree.csv"));
    CHECK_FALSE(fs::exists(out / "A_betweenness.csv"));
    CHECK_FALSE(fs::exists(out / "cross_layer_correlations.csv"));
    CHECK_FALSE(fs::exists(out / "similarity_matrix.csv"));
    // one metric: no pairs to correlate
    CHECK(read_file(out / "A_metric_correlations.csv") ==
          "metric_a,metric_b,pearson,spearman,common_nodes\n");
    CHECK(split_lines(read_file(out / "layer_stats.csv")).size() == 2);

    const auto bad = run_cli("analyze \"" + (dir / "m.csv").string() +
                                 "\" --layers Z --out \"" + (dir / "bad").string() + "\"",
                             dir);
    CHECK(bad.exit_code == 1);
    CHECK(json::parse(bad.err).at("error") == "validation");
    CHECK(bad.err.find("unknown layer") != std::string::npos);

    const auto badm = run_cli("analyze \"" + (dir / "m.csv").string() +
                                  "\" --metrics pagerank --out \"" + (dir / "badm").string() +
                                  "\"",
                              dir);
    CHECK(badm.exit_code == 1);
    CHECK(json::parse(badm.err).at("error") == "validation");
}

TEST_CASE("analyze reports computation failures with layer and metric context") {
    const auto dir = fresh_dir("analyze_dag");
    write_file(dir / "m.csv",
               "layer,source,target,weight\n"
               "D,a,b,1\n"
               "D,b,c,1\n");
    const auto r = run_cli("analyze \"" + (dir / "m.csv").string() + "\" --out \"" +
                               (dir / "out").string() + "\"",
                           dir);
    CHECK(r.exit_code == 2);
    const json e = json::parse(r.err);
    CHECK(e.at("error") == "computation");
    const auto msg = e.at("message").get<std::string>();
    CHECK(msg.find("layer 'D'") != std::string::npos);
    CHECK(msg.find("eigenvector") != std::string::npos);
}

TEST_CASE("missing input files are validation failures") {
    const auto dir = fresh_dir("missing_input");
    const auto r = run_cli("analyze \"" + (dir / "nope.csv").string() + "\" --out \"" +
                               (dir / "out").string() + "\"",
                           dir);
    CHECK(r.exit_code == 1);
    CHECK(json::parse(r.err).at("error") == "validation");
}

TEST_CASE("nulltest emits the model, p-values, and core-periphery report") {
    const auto dir = fresh_dir("nulltest");
    write_file(dir / "m.csv", circulant_csv(6, 2, "net"));
    const auto out = dir / "out";
    const auto r = run_cli("nulltest \"" + (dir / "m.csv").string() +
                               "\" --layer net --seed 3 --out \"" + out.string() + "\"",
                           dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);

    const json diag = read_json(out / "dbcm_diagnostics.json");
    CHECK(diag.at("max_residual").get<double>() < 1e-8);
    CHECK_FALSE(diag.at("near_boundary").get<bool>());

    const auto pvalues = split_lines(read_file(out / "pvalues.csv"));
    REQUIRE(pvalues.size() == 7);
    CHECK(pvalues[0] == "node,observed,null_mean,null_sd,p_upper,p_lower,rejected");
    for (size_t i = 1; i < pvalues.size(); ++i) {
        const auto f = split_fields(pvalues[i]);
        REQUIRE(f.size() == 7);
        const double pu = std::stod(f[4]);
        const double pl = std::stod(f[5]);
        CHECK(pu > 0.0);
        CHECK(pu <= 1.0);
        CHECK(pl > 0.0);
        CHECK(pl <= 1.0);
        CHECK(pu + pl >= 1.0);
    }

    const json summary = read_json(out / "nulltest_summary.json");
    CHECK(summary.at("replicates") == 999);
    CHECK(summary.at("alpha") == 0.01);
    CHECK(summary.at("tested_nodes") == 6);
    CHECK(summary.at("layer") == "net");
    CHECK(summary.at("metric") == "betweenness");

    const json cp = read_json(out / "cp_null_report.json");
    CHECK(cp.at("replicates") == 999);
    CHECK(cp.at("definition") == "be");
    CHECK(split_lines(read_file(out / "core_periphery.csv")).size() == 7);
    check_manifest(out, "nulltest");

    // same seed, same bytes; thread count must not matter
    const auto out2 = dir / "out2";
    REQUIRE(run_cli("nulltest \"" + (dir / "m.csv").string() +
                        "\" --layer net --seed 3 --out \"" + out2.string() + "\"",
                    dir, "MULTINET_THREADS=3")
                .exit_code == 0);
    check_identical_runs(out, out2);

    // a different seed must actually change the replicate stream
    const auto out3 = dir / "out3";
    REQUIRE(run_cli("nulltest \"" + (dir / "m.csv").string() +
                        "\" --layer net --seed 4 --out \"" + out3.string() + "\"",
                    dir)
                .exit_code == 0);
    CHECK(read_file(out / "pvalues.csv") != read_file(out3 / "pvalues.csv"));
}

TEST_CASE("nulltest validates its arguments") {
    const auto dir = fresh_dir("nulltest_bad");
    write_file(dir / "m.csv", circulant_csv(6, 2, "net"));
    const std::string base = "nulltest \"" + (dir / "m.csv").string() + "\" ";

    auto r = run_cli(base + "--layer net --replicates 50 --out \"" + (dir / "r").string() +
                         "\"",
                     dir);
    CHECK(r.exit_code == 1);
    CHECK(json::parse(r.err).at("error") == "validation");

    r = run_cli(base + "--layer net --definition foo --out \"" + (dir / "d").string() + "\"",
                dir);
    CHECK(r.exit_code == 1);

    r = run_cli(base + "--layer nope --out \"" + (dir / "l").string() + "\"", dir);
    CHECK(r.exit_code == 1);

    r = run_cli(base + "--out \"" + (dir / "n").string() + "\"", dir); // --layer missing
    CHECK(r.exit_code == 1);
}

TEST_CASE("synth generates deterministically and records the seed override") {
    const auto dir = fresh_dir("synth");
    write_file(dir / "cfg.json", R"({
  "n": 80,
  "kappa": 0.3,
  "total_volume": 5000.0,
  "seed": 11,
  "layers": [
    {"name": "X", "active": 70, "tail_alpha": 2.3,
     "volume_share": 0.6, "degree_strength_spearman": 0.8},
    {"name": "Y", "active": 60, "tail_alpha": 2.3,
     "volume_share": 0.4, "degree_strength_spearman": 0.7}
  ]
})");
    const auto s1 = dir / "s1";
    const auto s2 = dir / "s2";
    const auto s3 = dir / "s3";
    const std::string cfg = "\"" + (dir / "cfg.json").string() + "\"";
    REQUIRE(run_cli("synth " + cfg + " --out \"" + s1.string() + "\"", dir).exit_code == 0);
    REQUIRE(run_cli("synth " + cfg + " --out \"" + s2.string() + "\"", dir).exit_code == 0);
    check_identical_runs(s1, s2);
    check_manifest(s1, "synth");

    REQUIRE(run_cli("synth " + cfg + " --seed 12 --out \"" + s3.string() + "\"", dir)
                .exit_code == 0);
    CHECK(read_file(s1 / "multiplex.csv") != read_file(s3 / "multiplex.csv"));
    CHECK(read_json(s3 / "synth_config.json").at("seed") == 12);
    CHECK(read_json(s3 / "manifest.json").at("seed") == 12);

    // the emitted multiplex honors the structural targets exactly; the edge
    // list carries only nodes with at least one link, so the ten banks
    // inactive in every layer drop out of the round trip
    const auto m = multinet::parse_edge_list_file((s1 / "multiplex.csv").string());
    CHECK(m.node_count() == 70);
    CHECK(m.layer_view("X").active_nodes().size() == 70);
    CHECK(m.layer_view("Y").active_nodes().size() == 60);

    const json report = read_json(s1 / "calibration_report.json");
    for (const auto& row : report.at("rows")) {
        const std::string field = row.at("field");
        if (field == "n" || field == "total_volume" || field == "active_nodes" ||
            field == "volume_share") {
            CHECK(row.at("measurable") == true);
            CHECK_MESSAGE(row.at("pass") == true, row.dump());
        }
    }
}

TEST_CASE("synth rejects bad configs") {
    const auto dir = fresh_dir("synth_bad");
    write_file(dir / "cfg.json", R"({
  "n": 40,
  "layers": [
    {"name": "X", "active": 30, "tail_alpha": 2.3,
     "volume_share": 0.6, "degree_strength_spearman": 0.8},
    {"name": "Y", "active": 30, "tail_alpha": 2.3,
     "volume_share": 0.6, "degree_strength_spearman": 0.8}
  ]
})");
    auto r = run_cli("synth \"" + (dir / "cfg.json").string() + "\" --out \"" +
                         (dir / "out").string() + "\"",
                     dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("sum to 1") != std::string::npos);

    r = run_cli("synth \"" + (dir / "nope.json").string() + "\" --out \"" +
                    (dir / "out2").string() + "\"",
                dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("top-level flags behave") {
    const auto dir = fresh_dir("toplevel");
    CHECK(run_cli("--help", dir).exit_code == 0);
    CHECK(run_cli("--version", dir).out.size() > 0);
    CHECK(run_cli("", dir).exit_code == 1);           // a subcommand is required
    CHECK(run_cli("frobnicate", dir).exit_code == 1); // unknown subcommand
}
