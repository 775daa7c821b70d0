#include "multinet/dbcm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "multinet/detail/text.hpp"
#include "multinet/errors.hpp"
#include "multinet/parallel.hpp"
#include "multinet/random.hpp"

namespace multinet {

using namespace multinet::rng;

double DbcmModel::link_probability(int i, int j) const {
    if (i == j) return 0.0;
    const double t = x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)];
    return t / (1.0 + t);
}

namespace {

// Degenerate degree sequences (a node whose out-degree equals the number of
// nodes able to receive from it, and chains of such constraints) put the
// optimum at infinity; the cap keeps those fits finite. Residuals of a
// k-link chain floor out near cap^{-2/k}, so the cap is sized to hold the
// 1e-8 residual contract even for deep chains.
constexpr double kMultiplierCap = 1e75;

// Root of f(x) = sum_{j != skip, v_j > 0} (x v_j)/(1 + x v_j) - k in x > 0.
// f is increasing and concave, so Newton from the left of the root climbs
// monotonically onto it. When no finite root exists (fewer than k usable
// partners, or saturation), the cap is the maximizer.
double solve_coordinate(double k, const std::vector<double>& v, int skip, double x0) {
    const double tol = 1e-15 * std::max(1.0, k);
    auto eval = [&](double xx, double& f, double& fp) {
        f = -k;
        fp = 0.0;
        for (size_t j = 0; j < v.size(); ++j) {
            if (static_cast<int>(j) == skip || v[j] == 0.0) continue;
            const double t = xx * v[j];
            const double d = 1.0 + t;
            f += t / d;
            fp += v[j] / (d * d);
        }
    };
    double f, fp;
    eval(kMultiplierCap, f, fp);
    if (f <= 0.0) return kMultiplierCap;

    double x = x0 > 0.0 ? std::min(x0, kMultiplierCap) : 1.0;
    eval(x, f, fp);
    while (f > tol) {
        x *= 0.25;
        if (x < 1e-250) break;
        eval(x, f, fp);
    }
    for (int it = 0; it < 200; ++it) {
        if (f >= -tol || fp <= 0.0) break;
        const double nx = x - f / fp;
        if (!(nx > x)) break;
        x = std::min(nx, kMultiplierCap);
        eval(x, f, fp);
    }
    return x;
}

// Solves A d = b in place by Gaussian elimination with partial pivoting.
// Returns false when a pivot collapses (up to the caller to re-ridge).
bool solve_dense(std::vector<double>& a, std::vector<double>& b, int m) {
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<size_t>(col) * m + col]);
        for (int r = col + 1; r < m; ++r) {
            const double cand = std::abs(a[static_cast<size_t>(r) * m + col]);
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (!(best > 1e-300)) return false;
        if (pivot != col) {
            for (int c = col; c < m; ++c)
                std::swap(a[static_cast<size_t>(pivot) * m + c],
                          a[static_cast<size_t>(col) * m + c]);
            std::swap(b[static_cast<size_t>(pivot)], b[static_cast<size_t>(col)]);
        }
        const double inv = 1.0 / a[static_cast<size_t>(col) * m + col];
        for (int r = col + 1; r < m; ++r) {
            const double factor = a[static_cast<size_t>(r) * m + col] * inv;
            if (factor == 0.0) continue;
            for (int c = col; c < m; ++c)
                a[static_cast<size_t>(r) * m + c] -= factor * a[static_cast<size_t>(col) * m + c];
            b[static_cast<size_t>(r)] -= factor * b[static_cast<size_t>(col)];
        }
    }
    for (int r = m - 1; r >= 0; --r) {
        double s = b[static_cast<size_t>(r)];
        for (int c = r + 1; c < m; ++c) s -= a[static_cast<size_t>(r) * m + c] * b[static_cast<size_t>(c)];
        b[static_cast<size_t>(r)] = s / a[static_cast<size_t>(r) * m + r];
    }
    return true;
}

} // namespace

DbcmModel fit_dbcm(const DirectedGraph& g) {
    const int n = g.node_count();
    if (static_cast<int>(g.active_nodes().size()) < 2)
        throw validation_error("DBCM fit requires at least 2 active nodes");

    std::vector<double> kout(static_cast<size_t>(n)), kin(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        kout[static_cast<size_t>(v)] = static_cast<double>(g.out_degree(v));
        kin[static_cast<size_t>(v)] = static_cast<double>(g.in_degree(v));
    }

    DbcmModel model;
    model.n = n;
    model.x.assign(static_cast<size_t>(n), 0.0);
    model.y.assign(static_cast<size_t>(n), 0.0);
    const double scale0 = 1.0 / std::sqrt(static_cast<double>(g.edge_count()));
    for (int v = 0; v < n; ++v) {
        if (kout[static_cast<size_t>(v)] > 0.0)
            model.x[static_cast<size_t>(v)] = kout[static_cast<size_t>(v)] * scale0;
        if (kin[static_cast<size_t>(v)] > 0.0)
            model.y[static_cast<size_t>(v)] = kin[static_cast<size_t>(v)] * scale0;
    }

    const double target = std::max(1e-12, 5e-15 * static_cast<double>(n));
    const double contract = 1e-8;

    auto pass_stats = [&](double& residual, double& loglik) {
        residual = 0.0;
        loglik = 0.0;
        std::vector<double> col(static_cast<size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            const double xi = model.x[static_cast<size_t>(i)];
            double row = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double t = xi * model.y[static_cast<size_t>(j)];
                const double p = t / (1.0 + t);
                row += p;
                col[static_cast<size_t>(j)] += p;
                loglik -= std::log1p(t);
            }
            residual = std::max(residual, std::abs(row - kout[static_cast<size_t>(i)]));
        }
        for (int j = 0; j < n; ++j)
            residual = std::max(residual, std::abs(col[static_cast<size_t>(j)] - kin[static_cast<size_t>(j)]));
        for (int i = 0; i < n; ++i)
            for (const Edge& e : g.out_edges(i))
                loglik += std::log(model.x[static_cast<size_t>(i)] *
                                   model.y[static_cast<size_t>(e.neighbor)]);
    };

    double residual = std::numeric_limits<double>::infinity();
    int sweeps = 0;
#ifndef NDEBUG
    double last_loglik = -std::numeric_limits<double>::infinity();
#endif
    auto record = [&](double loglik) {
        model.diagnostics.likelihood.push_back(loglik);
#ifndef NDEBUG
        assert(loglik + 1e-9 * (std::abs(loglik) + 1.0) >= last_loglik);
        last_loglik = loglik;
#endif
    };

    // Coordinate ascent converges fast into the right region but its linear
    // tail rate degrades on heterogeneous degree sequences, so it only warms
    // up the Newton stage below.
    const int warmup_sweeps = 100;
    for (int sweep = 1; sweep <= warmup_sweeps; ++sweep) {
        sweeps = sweep;
        for (int i = 0; i < n; ++i)
            if (kout[static_cast<size_t>(i)] > 0.0)
                model.x[static_cast<size_t>(i)] = solve_coordinate(
                    kout[static_cast<size_t>(i)], model.y, i, model.x[static_cast<size_t>(i)]);
        for (int j = 0; j < n; ++j)
            if (kin[static_cast<size_t>(j)] > 0.0)
                model.y[static_cast<size_t>(j)] = solve_coordinate(
                    kin[static_cast<size_t>(j)], model.x, j, model.y[static_cast<size_t>(j)]);

        double loglik;
        pass_stats(residual, loglik);
        record(loglik);
        if (residual < target) break;
    }

    // Damped Newton on the log multipliers of the unsaturated positive-degree
    // nodes. The log-likelihood is concave there, so backtracking keeps every
    // accepted step an improvement; saturated multipliers stay pinned at the
    // cap where the curvature vanishes.
    if (residual >= target) {
        std::vector<int> free_x, free_y;
        for (int v = 0; v < n; ++v) {
            if (kout[static_cast<size_t>(v)] > 0.0 &&
                model.x[static_cast<size_t>(v)] < 0.5 * kMultiplierCap)
                free_x.push_back(v);
            if (kin[static_cast<size_t>(v)] > 0.0 &&
                model.y[static_cast<size_t>(v)] < 0.5 * kMultiplierCap)
                free_y.push_back(v);
        }
        const int mx = static_cast<int>(free_x.size());
        const int m = mx + static_cast<int>(free_y.size());
        const double log_cap = std::log(kMultiplierCap);

        std::vector<double> hess, step, grad;
        double loglik;
        pass_stats(residual, loglik);
        for (int it = 0; it < 60 && m > 0 && residual >= target; ++it) {
            hess.assign(static_cast<size_t>(m) * m, 0.0);
            step.assign(static_cast<size_t>(m), 0.0);
            for (int a = 0; a < m; ++a) {
                const bool row_is_x = a < mx;
                const int v = row_is_x ? free_x[static_cast<size_t>(a)]
                                       : free_y[static_cast<size_t>(a - mx)];
                double sum = 0.0, diag = 0.0;
                for (int u = 0; u < n; ++u) {
                    if (u == v) continue;
                    const double t = row_is_x
                                         ? model.x[static_cast<size_t>(v)] * model.y[static_cast<size_t>(u)]
                                         : model.x[static_cast<size_t>(u)] * model.y[static_cast<size_t>(v)];
                    const double p = t / (1.0 + t);
                    sum += p;
                    diag += p * (1.0 - p);
                }
                step[static_cast<size_t>(a)] =
                    (row_is_x ? kout[static_cast<size_t>(v)] : kin[static_cast<size_t>(v)]) - sum;
                hess[static_cast<size_t>(a) * m + a] = diag;
            }
            for (int a = 0; a < mx; ++a) {
                const int i = free_x[static_cast<size_t>(a)];
                for (int b = mx; b < m; ++b) {
                    const int j = free_y[static_cast<size_t>(b - mx)];
                    if (i == j) continue;
                    const double t =
                        model.x[static_cast<size_t>(i)] * model.y[static_cast<size_t>(j)];
                    const double p = t / (1.0 + t);
                    const double w = p * (1.0 - p);
                    hess[static_cast<size_t>(a) * m + b] = w;
                    hess[static_cast<size_t>(b) * m + a] = w;
                }
            }
            double max_diag = 0.0;
            for (int a = 0; a < m; ++a)
                max_diag = std::max(max_diag, hess[static_cast<size_t>(a) * m + a]);
            double ridge = 1e-12 * std::max(1.0, max_diag);
            std::vector<double> lhs, rhs;
            bool solved = false;
            for (int attempt = 0; attempt < 4 && !solved; ++attempt) {
                lhs = hess;
                rhs = step;
                for (int a = 0; a < m; ++a) lhs[static_cast<size_t>(a) * m + a] += ridge;
                solved = solve_dense(lhs, rhs, m);
                ridge *= 1e3;
            }
            if (!solved) break;

            const std::vector<double> sx = model.x, sy = model.y;
            double alpha = 1.0;
            bool accepted = false;
            for (int half = 0; half < 40; ++half, alpha *= 0.5) {
                for (int a = 0; a < m; ++a) {
                    const int v = a < mx ? free_x[static_cast<size_t>(a)]
                                         : free_y[static_cast<size_t>(a - mx)];
                    auto& slot = a < mx ? model.x[static_cast<size_t>(v)]
                                        : model.y[static_cast<size_t>(v)];
                    const double base = a < mx ? sx[static_cast<size_t>(v)] : sy[static_cast<size_t>(v)];
                    const double lg = std::clamp(std::log(base) + alpha * rhs[static_cast<size_t>(a)],
                                                 -600.0, log_cap);
                    slot = std::exp(lg);
                }
                double cand_resid, cand_ll;
                pass_stats(cand_resid, cand_ll);
                if (cand_ll >= loglik - 1e-12 * (std::abs(loglik) + 1.0)) {
                    residual = cand_resid;
                    loglik = cand_ll;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                model.x = sx;
                model.y = sy;
                break;
            }
            record(loglik);
            ++sweeps;
        }
    }
    if (!(residual < contract))
        throw computation_error("DBCM fit did not converge: max moment residual " +
                                detail::format_double(residual) + " after " +
                                std::to_string(sweeps) + " sweeps");

    // The solution is unique only up to x -> c x, y -> y / c; pin the gauge
    // by balancing the geometric means of the positive multipliers.
    double log_gm_x = 0.0, log_gm_y = 0.0;
    int mx = 0, my = 0;
    for (int v = 0; v < n; ++v) {
        if (model.x[static_cast<size_t>(v)] > 0.0) {
            log_gm_x += std::log(model.x[static_cast<size_t>(v)]);
            ++mx;
        }
        if (model.y[static_cast<size_t>(v)] > 0.0) {
            log_gm_y += std::log(model.y[static_cast<size_t>(v)]);
            ++my;
        }
    }
    const double c = std::exp(0.5 * (log_gm_y / static_cast<double>(my) -
                                     log_gm_x / static_cast<double>(mx)));
    for (int v = 0; v < n; ++v) {
        model.x[static_cast<size_t>(v)] *= c;
        model.y[static_cast<size_t>(v)] /= c;
    }

    double final_loglik;
    pass_stats(residual, final_loglik);
    model.diagnostics.max_residual = residual;
    model.diagnostics.sweeps = sweeps;

    int saturated_pairs = 0;
    for (int i = 0; i < n; ++i) {
        const double xi = model.x[static_cast<size_t>(i)];
        if (xi == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (xi * model.y[static_cast<size_t>(j)] >= 1e6 - 1.0) ++saturated_pairs;
        }
    }
    if (saturated_pairs > 0) {
        model.diagnostics.near_boundary = true;
        model.diagnostics.warnings.push_back(
            std::to_string(saturated_pairs) +
            " ordered pair(s) have link probability within 1e-6 of 1; the degree "
            "constraints force near-saturated links");
    }
    return model;
}

ExpectedDegreeProfile expected_degrees(const DbcmModel& model) {
    const int n = model.n;
    ExpectedDegreeProfile prof;
    prof.nodes.resize(static_cast<size_t>(n));
    prof.out_degree.assign(static_cast<size_t>(n), 0.0);
    prof.in_degree.assign(static_cast<size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) prof.nodes[static_cast<size_t>(v)] = v;
    for (int i = 0; i < n; ++i) {
        const double xi = model.x[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double t = xi * model.y[static_cast<size_t>(j)];
            const double p = t / (1.0 + t);
            prof.out_degree[static_cast<size_t>(i)] += p;
            prof.in_degree[static_cast<size_t>(j)] += p;
        }
    }
    return prof;
}

DirectedGraph sample_dbcm(const DbcmModel& model, std::uint64_t seed) {
    auto eng = make_engine(seed);
    GraphBuilder b(model.n);
    for (int i = 0; i < model.n; ++i) {
        const double xi = model.x[static_cast<size_t>(i)];
        for (int j = 0; j < model.n; ++j) {
            if (j == i) continue;
            const double t = xi * model.y[static_cast<size_t>(j)];
            const double p = t / (1.0 + t);
            if (u01(eng) < p) b.add(i, j, 1.0);
        }
    }
    return std::move(b).build();
}

namespace {

// Values of `mv` aligned to the sorted node list; nodes the metric is not
// defined for (inactive in the sample) contribute 0.
std::vector<double> align_metric(const NodeMetricVector& mv, const std::vector<int>& nodes) {
    std::vector<double> out(nodes.size(), 0.0);
    size_t i = 0, j = 0;
    while (i < nodes.size() && j < mv.nodes.size()) {
        if (mv.nodes[j] < nodes[i]) {
            ++j;
        } else if (mv.nodes[j] > nodes[i]) {
            ++i;
        } else {
            out[i] = mv.values[j];
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

PValueTable centrality_pvalues(const DirectedGraph& g, const DbcmModel& model,
                               Metric metric, int replicates, double alpha,
                               std::uint64_t master_seed, TestSide side) {
    if (replicates < 100)
        throw validation_error("Monte Carlo test requires at least 100 replicates, got " +
                               std::to_string(replicates));
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("alpha must lie strictly between 0 and 1");
    if (model.n != g.node_count())
        throw validation_error("model was fitted on a different node count than the graph");

    const NodeMetricVector obs = metric_vector(g, metric);
    const size_t nn = obs.nodes.size();
    const int M = replicates;

    std::vector<std::vector<double>> stats(static_cast<size_t>(M));
    parallel_for(0, M, [&](int r) {
        const std::uint64_t seed =
            derive_seed(master_seed, {hash_tag("dbcm-replicate"), static_cast<std::uint64_t>(r)});
        const DirectedGraph sample = sample_dbcm(model, seed);
        NodeMetricVector mv;
        try {
            mv = metric_vector(sample, metric);
        } catch (const error& e) {
            throw computation_error("metric failed on null replicate " + std::to_string(r) +
                                    " (seed " + std::to_string(seed) + "): " + e.what());
        }
        stats[static_cast<size_t>(r)] = align_metric(mv, obs.nodes);
    });

    PValueTable table;
    table.nodes = obs.nodes;
    table.replicates = M;
    table.alpha = alpha;
    table.observed = obs.values;
    table.null_mean.resize(nn);
    table.null_sd.resize(nn);
    table.p_upper.resize(nn);
    table.p_lower.resize(nn);
    table.rejected.resize(nn);
    for (size_t t = 0; t < nn; ++t) {
        const double o = obs.values[t];
        int ge = 0, le = 0;
        double mean = 0.0;
        for (int r = 0; r < M; ++r) {
            const double v = stats[static_cast<size_t>(r)][t];
            if (v >= o) ++ge;
            if (v <= o) ++le;
            mean += v;
        }
        mean /= static_cast<double>(M);
        double ss = 0.0;
        for (int r = 0; r < M; ++r) {
            const double d = stats[static_cast<size_t>(r)][t] - mean;
            ss += d * d;
        }
        const double pu = (1.0 + ge) / static_cast<double>(M + 1);
        const double pl = (1.0 + le) / static_cast<double>(M + 1);
        table.null_mean[t] = mean;
        table.null_sd[t] = std::sqrt(ss / static_cast<double>(M - 1));
        table.p_upper[t] = pu;
        table.p_lower[t] = pl;
        bool rej = false;
        switch (side) {
        case TestSide::two_sided: rej = std::min(2.0 * std::min(pu, pl), 1.0) < alpha; break;
        case TestSide::upper: rej = pu < alpha; break;
        case TestSide::lower: rej = pl < alpha; break;
        }
        table.rejected[t] = rej ? 1 : 0;
    }
    return table;
}

double NullDistribution::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0))
        throw validation_error("quantile level must lie in [0, 1]");
    if (values.empty()) throw validation_error("empty distribution has no quantiles");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const auto m = static_cast<double>(sorted.size());
    auto rank = static_cast<long>(std::ceil(q * m));
    rank = std::max(1L, std::min(rank, static_cast<long>(sorted.size())));
    return sorted[static_cast<size_t>(rank - 1)];
}

NullDistribution make_distribution(std::vector<double> values) {
    NullDistribution dist;
    dist.values = std::move(values);
    const auto m = static_cast<double>(dist.values.size());
    double mean = 0.0;
    for (double v : dist.values) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : dist.values) ss += (v - mean) * (v - mean);
    dist.mean = mean;
    dist.sd = dist.values.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    return dist;
}

NullDistribution null_statistic_distribution(
    const DbcmModel& model, const std::function<double(const DirectedGraph&)>& statistic,
    int replicates, std::uint64_t master_seed) {
    if (replicates < 100)
        throw validation_error("null distribution requires at least 100 replicates, got " +
                               std::to_string(replicates));
    std::vector<double> values(static_cast<size_t>(replicates));
    parallel_for(0, replicates, [&](int r) {
        const std::uint64_t seed =
            derive_seed(master_seed, {hash_tag("dbcm-replicate"), static_cast<std::uint64_t>(r)});
        const DirectedGraph sample = sample_dbcm(model, seed);
        try {
            values[static_cast<size_t>(r)] = statistic(sample);
        } catch (const error& e) {
            throw computation_error("statistic failed on null replicate " + std::to_string(r) +
                                    " (seed " + std::to_string(seed) + "): " + e.what());
        }
    });
    return make_distribution(std::move(values));
}

} // namespace multinet
