// Independent reference implementations the tests check the library
// against. Nothing here may call into the code paths under test.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace oracles {

// Deterministic test RNG (splitmix64 + Box-Muller).
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }  // [0,1)
    double uniform_pos() { return (double(next() >> 11) + 1.0) * 0x1.0p-53; }
    double normal() {
        return std::sqrt(-2.0 * std::log(uniform_pos())) *
               std::cos(2.0 * std::numbers::pi * uniform_pos());
    }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + int(next() % std::uint64_t(hi - lo + 1));
    }
};

// Textbook one-pass Pearson formula; algebraically different route from a
// centered two-pass implementation.
inline double pearson_reference(const std::vector<double>& x,
                                const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) /
           (std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy));
}

struct OracleEdge {
    int i, j;  // i < j
    double w;
};

// All labeled trees on n nodes via Pruefer sequences (n^(n-2) of them).
// Returns the minimum-weight tree; ties resolved to the lexicographically
// smallest sorted code-pair list, matching the documented tie rule.
struct EnumeratedMst {
    std::vector<OracleEdge> edges;  // sorted by code pair
    double weight = 0.0;            // summed in that order
};

inline std::vector<OracleEdge> decode_pruefer(const std::vector<int>& seq,
                                              int n) {
    std::vector<int> degree(n, 1);
    for (int a : seq) ++degree[a];
    std::vector<OracleEdge> edges;
    std::vector<bool> done(n, false);
    for (int a : seq) {
        int leaf = -1;
        for (int j = 0; j < n; ++j) {
            if (!done[j] && degree[j] == 1) {
                leaf = j;
                break;
            }
        }
        edges.push_back({std::min(leaf, a), std::max(leaf, a), 0.0});
        done[leaf] = true;
        --degree[a];
    }
    int u = -1, v = -1;
    for (int j = 0; j < n; ++j) {
        if (!done[j] && degree[j] == 1) (u < 0 ? u : v) = j;
    }
    edges.push_back({std::min(u, v), std::max(u, v), 0.0});
    return edges;
}

inline EnumeratedMst enumerate_min_spanning_tree(
    const Eigen::MatrixXd& d, const std::vector<std::string>& codes) {
    const int n = static_cast<int>(d.rows());
    auto canonical = [&](std::vector<OracleEdge> edges) {
        for (auto& e : edges) {
            if (codes[e.j] < codes[e.i]) std::swap(e.i, e.j);
            e.w = d(e.i, e.j);
        }
        std::sort(edges.begin(), edges.end(),
                  [&](const OracleEdge& a, const OracleEdge& b) {
                      return std::pair(codes[a.i], codes[a.j]) <
                             std::pair(codes[b.i], codes[b.j]);
                  });
        return edges;
    };
    auto lex_less = [&](const std::vector<OracleEdge>& a,
                        const std::vector<OracleEdge>& b) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            const auto ka = std::pair(codes[a[k].i], codes[a[k].j]);
            const auto kb = std::pair(codes[b[k].i], codes[b[k].j]);
            if (ka != kb) return ka < kb;
        }
        return false;
    };

    EnumeratedMst best;
    if (n == 2) {
        best.edges = canonical({{0, 1, 0.0}});
        best.weight = best.edges[0].w;
        return best;
    }
    const int slots = n - 2;
    std::vector<int> seq(slots, 0);
    bool first = true;
    while (true) {
        auto edges = canonical(decode_pruefer(seq, n));
        double w = 0.0;
        for (const auto& e : edges) w += e.w;
        if (first || w < best.weight ||
            (w == best.weight && lex_less(edges, best.edges))) {
            best.edges = edges;
            best.weight = w;
            first = false;
        }
        int pos = slots - 1;
        while (pos >= 0 && seq[pos] == n - 1) seq[pos--] = 0;
        if (pos < 0) break;
        ++seq[pos];
    }
    return best;
}

// Tree path metrics via Floyd-Warshall over the edge list; independent of
// any traversal-based implementation.
struct TreeMetrics {
    double mean_nn = 0.0;
    double mean_path = 0.0;
    double diameter = 0.0;
    double degree_std = 0.0;
    double mean_neighbor_degree = 0.0;
};

inline TreeMetrics tree_metrics_oracle(int n,
                                       const std::vector<OracleEdge>& edges) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, inf);
    std::vector<int> degree(n, 0);
    for (int i = 0; i < n; ++i) dist(i, i) = 0.0;
    for (const auto& e : edges) {
        dist(e.i, e.j) = dist(e.j, e.i) = e.w;
        ++degree[e.i];
        ++degree[e.j];
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                dist(i, j) = std::min(dist(i, j), dist(i, k) + dist(k, j));

    TreeMetrics m;
    for (int i = 0; i < n; ++i) {
        double nn = inf;
        for (const auto& e : edges)
            if (e.i == i || e.j == i) nn = std::min(nn, e.w);
        m.mean_nn += nn / n;
    }
    int pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            m.mean_path += dist(i, j);
            m.diameter = std::max(m.diameter, dist(i, j));
            ++pairs;
        }
    }
    m.mean_path /= pairs;
    double mean_deg = 0.0;
    for (int i = 0; i < n; ++i) mean_deg += degree[i];
    mean_deg /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i)
        var += (degree[i] - mean_deg) * (degree[i] - mean_deg) / n;
    m.degree_std = std::sqrt(var);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& e : edges) {
            if (e.i == i) s += degree[e.j];
            if (e.j == i) s += degree[e.i];
        }
        m.mean_neighbor_degree += s / degree[i] / n;
    }
    return m;
}

// Objective of the joint piecewise-constant denoising problem, written
// directly from its definition.
inline double tv_objective_reference(const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& U, double lambda,
                                     bool group_l2) {
    double fidelity = 0.0;
    for (int k = 0; k < X.rows(); ++k)
        for (int t = 0; t < X.cols(); ++t)
            fidelity += (X(k, t) - U(k, t)) * (X(k, t) - U(k, t));
    double penalty = 0.0;
    for (int t = 0; t + 1 < X.cols(); ++t) {
        double acc = 0.0;
        for (int k = 0; k < X.rows(); ++k) {
            const double diff = U(k, t + 1) - U(k, t);
            acc += group_l2 ? diff * diff : std::abs(diff);
        }
        penalty += group_l2 ? std::sqrt(acc) : acc;
    }
    return fidelity + lambda * penalty;
}

// Projected subgradient reference solver: steps 1/(n+1) (the objective is
// 2-strongly convex), iterates projected onto the per-row [min, max] box
// of X (which contains the optimum), best objective kept.
inline double projected_subgradient_reference(const Eigen::MatrixXd& X,
                                              double lambda, bool group_l2,
                                              int iterations) {
    const int K = static_cast<int>(X.rows());
    const int T = static_cast<int>(X.cols());
    const Eigen::VectorXd lo = X.rowwise().minCoeff();
    const Eigen::VectorXd hi = X.rowwise().maxCoeff();

    Eigen::MatrixXd U = X;
    double best = tv_objective_reference(X, U, lambda, group_l2);
    Eigen::MatrixXd G(K, T);
    for (int n = 1; n <= iterations; ++n) {
        G = 2.0 * (U - X);
        for (int t = 0; t + 1 < T; ++t) {
            Eigen::VectorXd diff = U.col(t + 1) - U.col(t);
            Eigen::VectorXd g;
            if (group_l2) {
                const double nrm = diff.norm();
                g = nrm > 0 ? (diff / nrm).eval()
                            : Eigen::VectorXd::Zero(K).eval();
            } else {
                g = diff.array().sign();
            }
            G.col(t + 1) += lambda * g;
            G.col(t) -= lambda * g;
        }
        U -= (1.0 / (n + 1)) * G;
        for (int k = 0; k < K; ++k)
            U.row(k) = U.row(k).cwiseMax(lo(k)).cwiseMin(hi(k));
        best = std::min(best, tv_objective_reference(X, U, lambda, group_l2));
    }
    return best;
}

}  // namespace oracles
