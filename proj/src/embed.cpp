#include "graphseg/embed.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace graphseg {

Embedding2D mds_embed(const DistanceMatrix& dist) {
    const int n = dist.size();
    if (n < 2) throw TooFewNodes("MDS needs at least 2 nodes");

    const Eigen::MatrixXd sq = dist.d.array().square();
    const Eigen::MatrixXd J =
        Eigen::MatrixXd::Identity(n, n) -
        Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const Eigen::MatrixXd B = -0.5 * J * sq * J;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B);
    const Eigen::VectorXd& vals = eig.eigenvalues();  // ascending

    Embedding2D out;
    out.countries = dist.countries;
    out.coordinates = Eigen::MatrixXd::Zero(n, 2);
    for (int i = 0; i < n; ++i)
        if (vals(i) < 0.0) ++out.clamped_negative_count;

    const int lex_first = static_cast<int>(
        std::min_element(dist.countries.begin(), dist.countries.end()) -
        dist.countries.begin());
    for (int c = 0; c < 2; ++c) {
        const double lam = vals(n - 1 - c);
        out.eigenvalues(c) = lam;
        if (lam <= 0.0) continue;  // clamped axis stays zero
        Eigen::VectorXd axis = eig.eigenvectors().col(n - 1 - c) * std::sqrt(lam);
        if (axis(lex_first) < 0.0) axis = -axis;
        out.coordinates.col(c) = axis;
    }
    return out;
}

ClusterLabels complete_linkage_clusters(const DistanceMatrix& dist, int k,
                                        std::vector<double>* merge_distances) {
    const int n = dist.size();
    if (k < 1 || k > n)
        throw BadK("cluster count " + std::to_string(k) + " outside [1, " +
                   std::to_string(n) + "]");
    if (merge_distances) merge_distances->clear();

    // link(a,b): current complete-linkage distance between active clusters.
    Eigen::MatrixXd link = dist.d;
    std::vector<bool> active(n, true);
    std::vector<std::vector<int>> members(n);
    // rep[a]: lexicographically smallest country code in cluster a.
    std::vector<std::string> rep(n);
    for (int i = 0; i < n; ++i) {
        members[i] = {i};
        rep[i] = dist.countries[i];
    }

    for (int active_count = n; active_count > k; --active_count) {
        int ma = -1, mb = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < n; ++a) {
            if (!active[a]) continue;
            for (int b = a + 1; b < n; ++b) {
                if (!active[b]) continue;
                const auto& lo = rep[a] < rep[b] ? rep[a] : rep[b];
                const auto& hi = rep[a] < rep[b] ? rep[b] : rep[a];
                const bool better =
                    link(a, b) < best ||
                    (link(a, b) == best &&
                     (ma < 0 ||
                      std::pair(lo, hi) <
                          std::pair(std::min(rep[ma], rep[mb]),
                                    std::max(rep[ma], rep[mb]))));
                if (better) {
                    best = link(a, b);
                    ma = a;
                    mb = b;
                }
            }
        }
        if (merge_distances) merge_distances->push_back(best);
        // merge mb into ma
        for (int c = 0; c < n; ++c) {
            if (!active[c] || c == ma || c == mb) continue;
            const double d = std::max(link(ma, c), link(mb, c));
            link(ma, c) = link(c, ma) = d;
        }
        members[ma].insert(members[ma].end(), members[mb].begin(),
                           members[mb].end());
        rep[ma] = std::min(rep[ma], rep[mb]);
        active[mb] = false;
    }

    // Order clusters by representative code for stable label numbering.
    std::vector<int> order;
    for (int a = 0; a < n; ++a)
        if (active[a]) order.push_back(a);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rep[a] < rep[b]; });

    ClusterLabels out;
    out.countries = dist.countries;
    out.labels.assign(n, -1);
    out.k = k;
    for (int label = 0; label < static_cast<int>(order.size()); ++label)
        for (int m : members[order[label]]) out.labels[m] = label;
    return out;
}

}  // namespace graphseg
