#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "graphseg/dependence.hpp"

namespace graphseg {

// 2-D classical MDS coordinates of one window's countries.
struct Embedding2D {
    std::vector<std::string> countries;
    Eigen::MatrixXd coordinates;   // n x 2, column means zero
    Eigen::Vector2d eigenvalues;   // the two largest of the centered matrix
    int clamped_negative_count = 0;  // negative eigenvalues in the spectrum
};

// Torgerson MDS: double-center the squared distances, keep the two largest
// nonnegative eigenvalues. Sign convention: each coordinate column's entry
// for the lexicographically-first country is nonnegative.
Embedding2D mds_embed(const DistanceMatrix& dist);

struct ClusterLabels {
    std::vector<std::string> countries;
    std::vector<int> labels;  // 0..k-1
    int k = 0;
};

// Agglomerative complete-linkage clustering cut at k clusters. Merges pick
// the smallest maximum inter-cluster distance; ties go to the
// lexicographically smallest representative pair. merge_distances, when
// given, receives the n-k linkage distances in merge order.
ClusterLabels complete_linkage_clusters(const DistanceMatrix& dist, int k,
                                        std::vector<double>* merge_distances =
                                            nullptr);

}  // namespace graphseg
