#pragma once

// Independent reference implementations the tests compare the library
// against. Deliberately written the slow, obvious way: path enumeration
// instead of Brandes accumulation, a dense eigensolver instead of power
// iteration, damped Newton instead of coordinate sweeps, and full partition
// enumeration with a from-scratch error count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "multinet/centrality.hpp"
#include "multinet/core_periphery.hpp"
#include "multinet/graph.hpp"
#include "multinet/random.hpp"

namespace oracle {

using multinet::DirectedGraph;
using multinet::Edge;
using multinet::GraphBuilder;

inline DirectedGraph random_digraph(int n, std::uint64_t seed, double p,
                                    bool weighted = true) {
    auto eng = multinet::rng::make_engine(seed);
    GraphBuilder builder(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || multinet::rng::u01(eng) >= p) continue;
            builder.add(i, j, weighted ? 0.25 + 4.0 * multinet::rng::u01(eng) : 1.0);
        }
    return std::move(builder).build();
}

// ---- betweenness by explicit shortest-path enumeration ----------------------

inline std::vector<double> brute_betweenness(const DirectedGraph& g) {
    const int n = g.node_count();
    const auto& act = g.active_nodes();
    const auto na = static_cast<double>(act.size());
    std::vector<double> score(static_cast<size_t>(n), 0.0);

    for (int s : act) {
        std::vector<int> dist(static_cast<size_t>(n), -1);
        std::queue<int> q;
        dist[static_cast<size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (const Edge& e : g.out_edges(u))
                if (dist[static_cast<size_t>(e.neighbor)] < 0) {
                    dist[static_cast<size_t>(e.neighbor)] = dist[static_cast<size_t>(u)] + 1;
                    q.push(e.neighbor);
                }
        }
        for (int t : act) {
            if (t == s || dist[static_cast<size_t>(t)] <= 0) continue;
            // walk backwards from t along distance-decreasing edges,
            // collecting every shortest path
            std::vector<std::vector<int>> paths;
            std::vector<int> cur{t};
            auto rec = [&](auto&& self, int v) -> void {
                if (v == s) {
                    paths.push_back(cur);
                    return;
                }
                for (const Edge& e : g.in_edges(v)) {
                    const int u = e.neighbor;
                    if (dist[static_cast<size_t>(u)] == dist[static_cast<size_t>(v)] - 1) {
                        cur.push_back(u);
                        self(self, u);
                        cur.pop_back();
                    }
                }
            };
            rec(rec, t);
            const double sigma = static_cast<double>(paths.size());
            for (const auto& path : paths)
                for (size_t k = 1; k + 1 < path.size(); ++k)
                    score[static_cast<size_t>(path[k])] += 1.0 / sigma;
        }
    }
    std::vector<double> out;
    out.reserve(act.size());
    const double norm = 1.0 / ((na - 1.0) * (na - 2.0));
    for (int v : act) out.push_back(score[static_cast<size_t>(v)] * norm);
    return out;
}

// ---- largest SCC by reachability closure ------------------------------------

inline std::vector<int> brute_lscc(const DirectedGraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<char>> reach(static_cast<size_t>(n),
                                         std::vector<char>(static_cast<size_t>(n), 0));
    for (int s = 0; s < n; ++s) {
        std::queue<int> q;
        reach[static_cast<size_t>(s)][static_cast<size_t>(s)] = 1;
        q.push(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (const Edge& e : g.out_edges(u))
                if (!reach[static_cast<size_t>(s)][static_cast<size_t>(e.neighbor)]) {
                    reach[static_cast<size_t>(s)][static_cast<size_t>(e.neighbor)] = 1;
                    q.push(e.neighbor);
                }
        }
    }
    std::vector<char> assigned(static_cast<size_t>(n), 0);
    std::vector<int> best;
    for (int u = 0; u < n; ++u) {
        if (assigned[static_cast<size_t>(u)]) continue;
        std::vector<int> comp;
        for (int v = 0; v < n; ++v)
            if (reach[static_cast<size_t>(u)][static_cast<size_t>(v)] &&
                reach[static_cast<size_t>(v)][static_cast<size_t>(u)]) {
                comp.push_back(v);
                assigned[static_cast<size_t>(v)] = 1;
            }
        // larger wins; ties go to the component holding the smallest index
        if (comp.size() > best.size() ||
            (comp.size() == best.size() && !best.empty() && comp.front() < best.front()))
            best = comp;
    }
    return best;
}

// ---- eigenvector centrality by dense eigendecomposition ---------------------

inline std::vector<double> dense_eigen_centrality(
    const DirectedGraph& g, multinet::AdjacencyMode mode,
    multinet::EigenvectorOrientation orientation) {
    const std::vector<int> scc = brute_lscc(g);
    const int k = static_cast<int>(scc.size());
    Eigen::MatrixXd A(k, k);
    A.setZero();
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            if (r == c) continue;
            const double w = g.has_edge(scc[static_cast<size_t>(r)], scc[static_cast<size_t>(c)])
                                 ? g.weight(scc[static_cast<size_t>(r)], scc[static_cast<size_t>(c)])
                                 : 0.0;
            if (w <= 0.0) continue;
            A(r, c) = mode == multinet::AdjacencyMode::binary ? 1.0 : w;
        }
    if (orientation == multinet::EigenvectorOrientation::left) A.transposeInPlace();

    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    int pf = 0;
    for (int i = 1; i < k; ++i)
        if (es.eigenvalues()(i).real() > es.eigenvalues()(pf).real()) pf = i;
    Eigen::VectorXd v = es.eigenvectors().col(pf).cwiseAbs();
    v /= v.sum();

    std::vector<double> full(static_cast<size_t>(g.node_count()), 0.0);
    for (int r = 0; r < k; ++r) full[static_cast<size_t>(scc[static_cast<size_t>(r)])] = v(r);
    return full;
}

// ---- configuration-model fit by damped Newton in log coordinates ------------

// Returns the full n x n link-probability matrix. The multipliers carry a
// gauge freedom (x -> cx, y -> y/c leaves every p unchanged), so the
// comparison must happen in p space; a tiny ridge keeps the Newton system
// solvable along the gauge direction.
inline std::vector<std::vector<double>> newton_dbcm_p(const DirectedGraph& g) {
    const int n = g.node_count();
    std::vector<double> kout(static_cast<size_t>(n), 0.0), kin(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        kout[static_cast<size_t>(i)] = g.out_degree(i);
        kin[static_cast<size_t>(i)] = g.in_degree(i);
    }
    std::vector<int> iout, iin;
    for (int i = 0; i < n; ++i) {
        if (kout[static_cast<size_t>(i)] > 0) iout.push_back(i);
        if (kin[static_cast<size_t>(i)] > 0) iin.push_back(i);
    }
    const int m = static_cast<int>(iout.size() + iin.size());
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m); // log multipliers, all start at 1

    auto p_of = [&](const Eigen::VectorXd& zz, int oi, int ii) {
        const double t = std::exp(zz(oi) + zz(static_cast<int>(iout.size()) + ii));
        return t / (1.0 + t);
    };
    auto residual = [&](const Eigen::VectorXd& zz) {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
        for (size_t oi = 0; oi < iout.size(); ++oi)
            for (size_t ii = 0; ii < iin.size(); ++ii) {
                if (iout[oi] == iin[ii]) continue;
                const double p = p_of(zz, static_cast<int>(oi), static_cast<int>(ii));
                f(static_cast<int>(oi)) += p;
                f(static_cast<int>(iout.size() + ii)) += p;
            }
        for (size_t oi = 0; oi < iout.size(); ++oi)
            f(static_cast<int>(oi)) -= kout[static_cast<size_t>(iout[oi])];
        for (size_t ii = 0; ii < iin.size(); ++ii)
            f(static_cast<int>(iout.size() + ii)) -= kin[static_cast<size_t>(iin[ii])];
        return f;
    };

    Eigen::VectorXd f = residual(z);
    for (int iter = 0; iter < 500 && f.lpNorm<Eigen::Infinity>() > 1e-12; ++iter) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
        for (size_t oi = 0; oi < iout.size(); ++oi)
            for (size_t ii = 0; ii < iin.size(); ++ii) {
                if (iout[oi] == iin[ii]) continue;
                const double p = p_of(z, static_cast<int>(oi), static_cast<int>(ii));
                const double q = p * (1.0 - p);
                const int a = static_cast<int>(oi);
                const int b = static_cast<int>(iout.size() + ii);
                J(a, a) += q;
                J(a, b) += q;
                J(b, b) += q;
                J(b, a) += q;
            }
        J.diagonal().array() += 1e-12;
        const Eigen::VectorXd step = J.fullPivLu().solve(f);
        double t = 1.0;
        const double f0 = f.squaredNorm();
        for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
            const Eigen::VectorXd zt = z - t * step;
            const Eigen::VectorXd ft = residual(zt);
            if (ft.squaredNorm() < f0) {
                z = zt;
                f = ft;
                break;
            }
        }
    }

    std::vector<std::vector<double>> p(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
    for (size_t oi = 0; oi < iout.size(); ++oi)
        for (size_t ii = 0; ii < iin.size(); ++ii) {
            if (iout[oi] == iin[ii]) continue;
            p[static_cast<size_t>(iout[oi])][static_cast<size_t>(iin[ii])] =
                p_of(z, static_cast<int>(oi), static_cast<int>(ii));
        }
    return p;
}

// ---- core-periphery by full enumeration --------------------------------------

inline std::int64_t cp_exhaustive_error(const DirectedGraph& g, multinet::CpDefinition def) {
    const auto& act = g.active_nodes();
    const int na = static_cast<int>(act.size());
    std::int64_t best = INT64_MAX;
    for (std::uint32_t mask = 0; mask < (1u << na); ++mask) {
        std::int64_t err = 0;
        for (int r = 0; r < na; ++r)
            for (int c = 0; c < na; ++c) {
                if (r == c) continue;
                const bool edge = g.has_edge(act[static_cast<size_t>(r)],
                                             act[static_cast<size_t>(c)]);
                const bool rc = (mask >> r) & 1u;
                const bool cc = (mask >> c) & 1u;
                if (rc && cc && !edge) ++err;
                if (!rc && !cc && edge) ++err;
            }
        if (def == multinet::CpDefinition::cvp) {
            for (int r = 0; r < na; ++r) {
                if (!((mask >> r) & 1u)) continue;
                bool out_to_p = false, in_from_p = false;
                for (int c = 0; c < na; ++c) {
                    if (c == r || ((mask >> c) & 1u)) continue;
                    if (g.has_edge(act[static_cast<size_t>(r)], act[static_cast<size_t>(c)]))
                        out_to_p = true;
                    if (g.has_edge(act[static_cast<size_t>(c)], act[static_cast<size_t>(r)]))
                        in_from_p = true;
                }
                if (!out_to_p) ++err;
                if (!in_from_p) ++err;
            }
        }
        best = std::min(best, err);
    }
    return best;
}

// ---- misc --------------------------------------------------------------------

inline std::vector<double> pareto_sample(std::uint64_t seed, double alpha, double x_min,
                                         int count) {
    auto eng = multinet::rng::make_engine(seed);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(x_min * std::pow(multinet::rng::u01_open_low(eng), -1.0 / alpha));
    return out;
}

// Kolmogorov-Smirnov distance of a sample against U(0, 1).
inline double ks_uniform(std::vector<double> p) {
    std::sort(p.begin(), p.end());
    const double n = static_cast<double>(p.size());
    double d = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - p[i]);
        d = std::max(d, p[i] - static_cast<double>(i) / n);
    }
    return d;
}

} // namespace oracle
