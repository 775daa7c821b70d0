#include <doctest.h>

#include <cmath>
#include <sstream>

#include "multinet/centrality.hpp"
#include "multinet/edge_list.hpp"
#include "multinet/errors.hpp"

#include "oracles.hpp"

using namespace multinet;

namespace {

DirectedGraph path3() {
    GraphBuilder b(3);
    b.add(0, 1, 1.0);
    b.add(1, 2, 1.0);
    return std::move(b).build();
}

DirectedGraph two_cycle() {
    GraphBuilder b(2);
    b.add(0, 1, 1.0);
    b.add(1, 0, 1.0);
    return std::move(b).build();
}

DirectedGraph complete(int n) {
    GraphBuilder b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) b.add(i, j, 1.0);
    return std::move(b).build();
}

NodeMetricVector vec(std::vector<int> nodes, std::vector<double> values) {
    return NodeMetricVector{"test", std::move(nodes), std::move(values), {}};
}

} // namespace

TEST_CASE("degree and strength profile") {
    GraphBuilder b(4);
    b.add(0, 1, 2.0);
    b.add(0, 2, 3.0);
    b.add(2, 0, 5.0);
    const auto g = std::move(b).build();
    const auto p = degree_strength(g);
    REQUIRE(p.nodes == std::vector<int>{0, 1, 2});
    CHECK(p.out_degree == std::vector<int>{2, 0, 1});
    CHECK(p.in_degree == std::vector<int>{1, 1, 1});
    CHECK(p.out_strength[0] == doctest::Approx(5.0));
    CHECK(p.in_strength[0] == doctest::Approx(5.0));
    const auto total = p.total_degree();
    CHECK(total.values == std::vector<double>{3.0, 1.0, 2.0});
}

TEST_CASE("betweenness of the directed 3-path puts 1/2 on the middle") {
    const auto v = betweenness(path3());
    REQUIRE(v.nodes == std::vector<int>{0, 1, 2});
    CHECK(v.values[0] == doctest::Approx(0.0));
    CHECK(v.values[1] == doctest::Approx(0.5));
    CHECK(v.values[2] == doctest::Approx(0.0));
}

TEST_CASE("betweenness of a bidirectional star is 1 at the center") {
    const int leaves = 5;
    GraphBuilder b(leaves + 1);
    for (int l = 1; l <= leaves; ++l) {
        b.add(0, l, 1.0);
        b.add(l, 0, 1.0);
    }
    const auto v = betweenness(std::move(b).build());
    CHECK(v.values[0] == doctest::Approx(1.0));
    for (int l = 1; l <= leaves; ++l) CHECK(v.values[static_cast<size_t>(l)] == doctest::Approx(0.0));
}

TEST_CASE("complete digraph has zero betweenness everywhere") {
    const auto v = betweenness(complete(4));
    for (double x : v.values) CHECK(x == doctest::Approx(0.0));
}

TEST_CASE("betweenness needs 3 active nodes") {
    CHECK_THROWS_AS(betweenness(two_cycle()), validation_error);
}

TEST_CASE("betweenness values stay in [0, 1] and ignore weights") {
    auto weighted = oracle::random_digraph(9, 404, 0.3, true);
    const auto v = betweenness(weighted);
    for (double x : v.values) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
    // hop-count paths: reweighting must not change anything
    GraphBuilder b(9);
    for (const auto& [u, w, wt] : weighted.edges()) b.add(u, w, wt * 7.25 + 1.0);
    const auto v2 = betweenness(std::move(b).build());
    for (size_t i = 0; i < v.values.size(); ++i) CHECK(v.values[i] == v2.values[i]);
}

TEST_CASE("betweenness matches explicit path enumeration on random digraphs") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const int n = 4 + static_cast<int>(seed % 7);
        const auto g = oracle::random_digraph(n, seed * 101, 0.15 + 0.05 * (seed % 8));
        if (g.active_nodes().size() < 3) continue;
        const auto fast = betweenness(g);
        const auto slow = oracle::brute_betweenness(g);
        REQUIRE(fast.values.size() == slow.size());
        for (size_t i = 0; i < slow.size(); ++i)
            CHECK(std::abs(fast.values[i] - slow[i]) < 1e-12);
        ++checked;
    }
    CHECK(checked >= 25);
}

TEST_CASE("eigenvector centrality of the 2-cycle is (1/2, 1/2)") {
    const auto v = eigenvector_centrality(two_cycle());
    REQUIRE(v.values.size() == 2);
    CHECK(v.values[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.values[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.meta.at("mode") == "weighted");
    CHECK(v.meta.at("orientation") == "right");
    CHECK(v.meta.at("lscc_size") == "2");
}

TEST_CASE("eigenvector centrality: errors") {
    const auto empty = std::move(GraphBuilder(3)).build();
    CHECK_THROWS_AS(eigenvector_centrality(empty), validation_error);
    // a DAG has no cycle, so the largest SCC is a single node
    CHECK_THROWS_AS(eigenvector_centrality(path3()), computation_error);
}

TEST_CASE("nodes outside the largest SCC get exactly zero") {
    GraphBuilder b(5);
    b.add(0, 1, 1.0);
    b.add(1, 0, 2.0);
    b.add(1, 2, 1.0); // 2 dangles off the cycle
    b.add(3, 0, 1.0); // 3 feeds in
    const auto v = eigenvector_centrality(std::move(b).build());
    REQUIRE(v.nodes == std::vector<int>{0, 1, 2, 3});
    CHECK(v.values[2] == 0.0);
    CHECK(v.values[3] == 0.0);
    CHECK(v.values[0] + v.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.meta.at("zeroed_outside_lscc") == "2");
}

TEST_CASE("uniform weight scaling by a power of two is bitwise invariant") {
    const auto g = oracle::random_digraph(8, 505, 0.45);
    std::vector<std::tuple<int, int, double>> edges = g.edges();
    GraphBuilder b(8);
    for (const auto& [u, v, w] : edges) b.add(u, v, w * 4.0);
    const auto scaled = std::move(b).build();
    if (oracle::brute_lscc(g).size() < 2) return;
    const auto a = eigenvector_centrality(g);
    const auto c = eigenvector_centrality(scaled);
    REQUIRE(a.values.size() == c.values.size());
    for (size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == c.values[i]);
}

TEST_CASE("binary mode matches weighted mode on unit weights") {
    GraphBuilder b1(4), b2(4);
    for (auto [u, v] : {std::pair{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 2}}) {
        b1.add(u, v, 1.0);
        b2.add(u, v, 3.0 + u);
    }
    const auto unit = std::move(b1).build();
    const auto w = eigenvector_centrality(unit, AdjacencyMode::weighted);
    const auto bin = eigenvector_centrality(unit, AdjacencyMode::binary);
    for (size_t i = 0; i < w.values.size(); ++i)
        CHECK(w.values[i] == doctest::Approx(bin.values[i]).epsilon(1e-12));
    // and binary mode ignores the actual weights
    const auto varied = std::move(b2).build();
    const auto bin2 = eigenvector_centrality(varied, AdjacencyMode::binary);
    for (size_t i = 0; i < bin.values.size(); ++i)
        CHECK(bin.values[i] == doctest::Approx(bin2.values[i]).epsilon(1e-12));
}

TEST_CASE("left orientation equals right orientation on the transpose") {
    const auto g = oracle::random_digraph(7, 606, 0.5);
    if (oracle::brute_lscc(g).size() < 2) return;
    GraphBuilder bt(7);
    for (const auto& [u, v, w] : g.edges()) bt.add(v, u, w);
    const auto gt = std::move(bt).build();
    const auto left = eigenvector_centrality(g, AdjacencyMode::weighted,
                                             EigenvectorOrientation::left);
    const auto right_t = eigenvector_centrality(gt);
    REQUIRE(left.values.size() == right_t.values.size());
    for (size_t i = 0; i < left.values.size(); ++i)
        CHECK(left.values[i] == doctest::Approx(right_t.values[i]).epsilon(1e-10));
}

TEST_CASE("eigenvector centrality matches the dense solver oracle") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 40 && checked < 20; ++seed) {
        const int n = 4 + static_cast<int>(seed % 5);
        const auto g = oracle::random_digraph(n, seed * 211, 0.4);
        if (oracle::brute_lscc(g).size() < 3) continue;
        const auto got = eigenvector_centrality(g);
        const auto want = oracle::dense_eigen_centrality(
            g, AdjacencyMode::weighted, EigenvectorOrientation::right);
        double diff = 0.0;
        for (size_t i = 0; i < got.nodes.size(); ++i)
            diff += std::abs(got.values[i] - want[static_cast<size_t>(got.nodes[i])]);
        CHECK(diff < 1e-9);
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("correlation of x and x^2 over 1..5") {
    const auto a = vec({0, 1, 2, 3, 4}, {1, 2, 3, 4, 5});
    const auto b = vec({0, 1, 2, 3, 4}, {1, 4, 9, 16, 25});
    const auto c = metric_correlation(a, b);
    CHECK(c.sample_size == 5);
    CHECK(c.spearman == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.pearson == doctest::Approx(0.9811).epsilon(1e-4));
}

TEST_CASE("spearman is invariant under monotone transforms") {
    const auto g = oracle::random_digraph(20, 707, 0.3);
    const auto prof = degree_strength(g);
    const auto deg = prof.total_degree();
    auto str = prof.total_strength();
    const auto base = metric_correlation(deg, str);
    for (double& v : str.values) v = std::exp(v / 10.0);
    const auto transformed = metric_correlation(deg, str);
    CHECK(base.spearman == doctest::Approx(transformed.spearman).epsilon(1e-12));
}

TEST_CASE("correlation uses the intersection of active sets") {
    const auto a = vec({0, 1, 2, 5}, {1, 2, 3, 9});
    const auto b = vec({1, 2, 5, 7}, {4, 6, 18, 1});
    const auto c = metric_correlation(a, b);
    CHECK(c.sample_size == 3);
    // common nodes 1, 2, 5 pair up as (2,4), (3,6), (9,18): exactly y = 2x
    CHECK(c.pearson == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correlation errors") {
    CHECK_THROWS_AS(metric_correlation(vec({0, 1}, {1, 2}), vec({0, 1}, {2, 1})),
                    validation_error);
    CHECK_THROWS_AS(metric_correlation(vec({0, 1, 2}, {1, 1, 1}), vec({0, 1, 2}, {2, 1, 3})),
                    computation_error);
}

TEST_CASE("ties get midranks") {
    // x: 1 2 2 3 -> ranks 1, 2.5, 2.5, 4; y strictly increasing
    const auto a = vec({0, 1, 2, 3}, {1, 2, 2, 3});
    const auto b = vec({0, 1, 2, 3}, {10, 20, 30, 40});
    // spearman = pearson of (1, 2.5, 2.5, 4) vs (1, 2, 3, 4) = sqrt(0.9)
    CHECK(metric_correlation(a, b).spearman ==
          doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
}

TEST_CASE("metric plumbing: names and vectors") {
    CHECK(metric_from_name("betweenness") == Metric::betweenness);
    CHECK(metric_name(Metric::eigenvector) == "eigenvector");
    CHECK_THROWS_AS(metric_from_name("pagerank"), validation_error);

    const auto g = path3();
    const auto deg = metric_vector(g, Metric::degree);
    CHECK(deg.values == std::vector<double>{1.0, 2.0, 1.0});
    const auto str = metric_vector(g, Metric::strength);
    CHECK(str.values == std::vector<double>{1.0, 2.0, 1.0});
    CHECK(metric_vector(g, Metric::betweenness).metric == "betweenness");
}

TEST_CASE("cross-layer comparison on identical layers is perfect") {
    std::istringstream in("layer,source,target,weight\n"
                          "x,a,b,1\nx,b,c,2\nx,c,a,3\n"
                          "y,a,b,1\ny,b,c,2\ny,c,a,3\n");
    const Multiplex m = parse_edge_list(in);
    const auto cmp = cross_layer_comparison(m, Metric::strength, "x", "y");
    CHECK(cmp.correlation.pearson == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cmp.correlation.spearman == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(cmp.pairs.size() == 3);
    CHECK(std::get<1>(cmp.pairs[0]) == std::get<2>(cmp.pairs[0]));
}

TEST_CASE("node metric vector lookups") {
    const auto v = vec({1, 3, 5}, {0.1, 0.2, 0.3});
    CHECK(v.defined_for(3));
    CHECK(!v.defined_for(2));
    CHECK(v.value_of(5) == doctest::Approx(0.3));
    CHECK_THROWS_AS(v.value_of(0), validation_error);
}
