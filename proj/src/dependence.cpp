#include "graphseg/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "graphseg/io_util.hpp"

namespace graphseg {

namespace {

struct PairStats {
    bool valid = false;
    double rho = 0.0;
    bool const_i = false;  // series i constant on the overlap
    bool const_j = false;
};

// Pearson correlation of two columns over the rows where both are
// observed, within [row0, row0+len). Invalid when the overlap is too
// thin or either series is constant on it.
PairStats pair_correlation(const PricePanel& panel, int row0, int len, int ci,
                           int cj, int min_overlap_months) {
    double sx = 0, sy = 0;
    int n = 0;
    for (int r = row0; r < row0 + len; ++r) {
        if (panel.observed(r, ci) && panel.observed(r, cj)) {
            sx += panel.values(r, ci);
            sy += panel.values(r, cj);
            ++n;
        }
    }
    PairStats out;
    if (n < min_overlap_months || n < 2) return out;
    const double mx = sx / n, my = sy / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (int r = row0; r < row0 + len; ++r) {
        if (panel.observed(r, ci) && panel.observed(r, cj)) {
            const double dx = panel.values(r, ci) - mx;
            const double dy = panel.values(r, cj) - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        out.const_i = sxx <= 0.0;
        out.const_j = syy <= 0.0;
        return out;
    }
    out.valid = true;
    out.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return out;
}

}  // namespace

CorrelationMatrix window_correlations(const WindowView& window,
                                      const CoverageRule& rule,
                                      std::vector<std::string>* dropped) {
    if (dropped) dropped->clear();
    if (window.panel == nullptr || window.length <= 0)
        throw BadInput("empty window");
    if (rule.min_coverage <= 0.0 || rule.min_coverage > 1.0 ||
        rule.min_pair_overlap <= 0.0 || rule.min_pair_overlap > 1.0)
        throw BadInput("coverage fractions must be in (0,1]");

    const PricePanel& panel = *window.panel;
    const int len = window.length;
    const int row0 = window.start_row;

    // Per-country coverage within the window.
    std::vector<int> cover(panel.n_countries(), 0);
    for (int c = 0; c < panel.n_countries(); ++c)
        for (int r = row0; r < row0 + len; ++r)
            if (panel.observed(r, c)) ++cover[c];

    std::vector<int> included;
    for (int c = 0; c < panel.n_countries(); ++c)
        if (cover[c] >= rule.min_coverage * len) included.push_back(c);

    const int min_overlap =
        static_cast<int>(std::ceil(rule.min_pair_overlap * len));

    // Pair correlations among included countries; drop countries causing
    // undefined pairs, lowest coverage first (ties by country code), until
    // the matrix is complete.
    auto key = [&](int c) { return std::pair(cover[c], panel.countries[c]); };
    while (included.size() >= 2) {
        const int m = static_cast<int>(included.size());
        Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(m, m);
        int worst = -1;  // lowest-coverage country causing an undefined pair
        for (int a = 0; a < m; ++a) {
            for (int b = a + 1; b < m; ++b) {
                PairStats ps = pair_correlation(panel, row0, len, included[a],
                                                included[b], min_overlap);
                if (ps.valid) {
                    rho(a, b) = rho(b, a) = ps.rho;
                    continue;
                }
                // A constant series is the cause; a thin overlap implicates
                // both sides.
                if (ps.const_i || ps.const_j) {
                    if (ps.const_i && (worst < 0 || key(included[a]) < key(worst)))
                        worst = included[a];
                    if (ps.const_j && (worst < 0 || key(included[b]) < key(worst)))
                        worst = included[b];
                } else {
                    for (int c : {included[a], included[b]})
                        if (worst < 0 || key(c) < key(worst)) worst = c;
                }
            }
        }
        if (worst < 0) {
            CorrelationMatrix out;
            out.window_index = window.window_index;
            out.label_year = window.label_year;
            out.rho = std::move(rho);
            for (int c : included) out.countries.push_back(panel.countries[c]);
            return out;
        }
        if (dropped) dropped->push_back(panel.countries[worst]);
        included.erase(std::find(included.begin(), included.end(), worst));
    }
    throw WindowTooSparse(window.window_index,
                          "window " + std::to_string(window.window_index) +
                              " (" + window.start.str() + ".." +
                              window.end.str() +
                              ") has fewer than 2 includable countries");
}

DistanceMatrix to_distance(const CorrelationMatrix& corr) {
    DistanceMatrix out;
    out.countries = corr.countries;
    out.window_index = corr.window_index;
    out.label_year = corr.label_year;
    out.d = 1.0 - corr.rho.array().square();
    out.d.diagonal().setZero();
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int root(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    bool unite(int a, int b) {
        int ra = root(a), rb = root(b);
        if (ra == rb) return false;
        parent[ra] = rb;
        return true;
    }
};

}  // namespace

SpanningTree minimum_spanning_tree(const DistanceMatrix& dist) {
    const int n = dist.size();
    if (n < 2) throw TooFewNodes("spanning tree needs at least 2 nodes");
    if (!dist.d.allFinite()) throw BadInput("distance matrix has non-finite entries");

    std::vector<TreeEdge> all;
    all.reserve(n * (n - 1) / 2);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            TreeEdge e;
            e.i = dist.countries[a] < dist.countries[b] ? a : b;
            e.j = dist.countries[a] < dist.countries[b] ? b : a;
            e.weight = dist.d(a, b);
            e.abs_rho = std::sqrt(std::max(0.0, 1.0 - e.weight));
            all.push_back(e);
        }
    }
    std::sort(all.begin(), all.end(), [&](const TreeEdge& x, const TreeEdge& y) {
        if (x.weight != y.weight) return x.weight < y.weight;
        if (dist.countries[x.i] != dist.countries[y.i])
            return dist.countries[x.i] < dist.countries[y.i];
        return dist.countries[x.j] < dist.countries[y.j];
    });

    SpanningTree tree;
    tree.countries = dist.countries;
    tree.window_index = dist.window_index;
    tree.label_year = dist.label_year;
    UnionFind uf(n);
    for (const TreeEdge& e : all) {
        if (uf.unite(e.i, e.j)) {
            tree.edges.push_back(e);
            if (static_cast<int>(tree.edges.size()) == n - 1) break;
        }
    }
    std::sort(tree.edges.begin(), tree.edges.end(),
              [&](const TreeEdge& x, const TreeEdge& y) {
                  if (tree.countries[x.i] != tree.countries[y.i])
                      return tree.countries[x.i] < tree.countries[y.i];
                  return tree.countries[x.j] < tree.countries[y.j];
              });
    return tree;
}

double SpanningTree::total_weight() const {
    double sum = 0.0;
    for (const TreeEdge& e : edges) sum += e.weight;
    return sum;
}

void write_distance_csv(const DistanceMatrix& dist, std::ostream& out) {
    out << "country";
    for (const auto& c : dist.countries) out << ',' << c;
    out << '\n';
    for (int a = 0; a < dist.size(); ++a) {
        out << dist.countries[a];
        for (int b = 0; b < dist.size(); ++b)
            out << ',' << fmt_double(dist.d(a, b));
        out << '\n';
    }
}

void write_edges_csv(const SpanningTree& tree, std::ostream& out) {
    out << "i,j,d,abs_rho\n";
    for (const TreeEdge& e : tree.edges)
        out << tree.countries[e.i] << ',' << tree.countries[e.j] << ','
            << fmt_double(e.weight) << ',' << fmt_double(e.abs_rho) << '\n';
}

}  // namespace graphseg
