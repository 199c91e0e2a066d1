#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "graphseg/panel.hpp"

namespace graphseg {

// Per-country and per-pair inclusion thresholds, as fractions of the
// window length. A country enters a window's matrix only if observed on
// at least min_coverage of the window; every used pair must overlap on
// at least min_pair_overlap of it.
struct CoverageRule {
    double min_coverage = 0.5;
    double min_pair_overlap = 0.5;
};

// Signed Pearson correlations of price levels among the countries
// included in one window.
struct CorrelationMatrix {
    std::vector<std::string> countries;
    Eigen::MatrixXd rho;  // symmetric, unit diagonal, entries in [-1,1]
    int window_index = 0;
    int label_year = 0;

    int size() const { return static_cast<int>(countries.size()); }
};

// Correlation distance d_ij = 1 - rho_ij^2; zero diagonal, entries in [0,1].
struct DistanceMatrix {
    std::vector<std::string> countries;
    Eigen::MatrixXd d;
    int window_index = 0;
    int label_year = 0;

    int size() const { return static_cast<int>(countries.size()); }
};

struct TreeEdge {
    int i = 0;  // indices into the tree's country list, code(i) < code(j)
    int j = 0;
    double weight = 0.0;   // d_ij
    double abs_rho = 0.0;  // sqrt(1 - d_ij), kept for rendering
};

// Minimum spanning tree over the complete correlation-distance graph of
// one window: n-1 edges, connected, acyclic.
struct SpanningTree {
    std::vector<std::string> countries;
    std::vector<TreeEdge> edges;  // sorted by country-code pair
    int window_index = 0;
    int label_year = 0;

    int size() const { return static_cast<int>(countries.size()); }
    double total_weight() const;
};

// Pearson correlations over the months where both series are observed.
// Countries below the coverage threshold are excluded; countries causing
// undefined pairs (thin overlap or a constant series on the overlap) are
// dropped greedily, lowest coverage first, so the matrix is complete.
// dropped, when given, receives the codes removed by the pair rule.
// Throws WindowTooSparse when fewer than two countries survive.
CorrelationMatrix window_correlations(const WindowView& window,
                                      const CoverageRule& rule = {},
                                      std::vector<std::string>* dropped =
                                          nullptr);

DistanceMatrix to_distance(const CorrelationMatrix& corr);

// Kruskal with edges ordered by (weight, lexicographic country pair);
// deterministic for tied weights.
SpanningTree minimum_spanning_tree(const DistanceMatrix& dist);

// Optional per-window dumps.
void write_distance_csv(const DistanceMatrix& dist, std::ostream& out);
void write_edges_csv(const SpanningTree& tree, std::ostream& out);

}  // namespace graphseg
