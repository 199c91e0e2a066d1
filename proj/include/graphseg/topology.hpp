#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "graphseg/dependence.hpp"

namespace graphseg {

struct TopologyOptions {
    // The eccentricity index aggregates the tree's path lengths either as
    // the diameter (default) or as the per-node maximum averaged over nodes.
    enum class EccentricityMode { diameter, mean_node_max };
    EccentricityMode eccentricity = EccentricityMode::diameter;
};

// The five scalar indices of one window's tree. Path lengths are
// d-weighted along the unique tree path.
struct TopologyIndexVector {
    double mean_nn_distance = 0.0;     // mean over nodes of the nearest MST edge
    double mean_path_length = 0.0;     // mean over unordered node pairs
    double eccentricity = 0.0;         // tree diameter
    double degree_std = 0.0;           // population std of node degrees
    double mean_neighbor_degree = 0.0; // mean over nodes of neighbors' mean degree
    int window_index = 0;
    int node_count = 0;
};

// K=5 rows x T windows, in the fixed row order below.
struct IndexPanel {
    static constexpr int kRows = 5;
    static constexpr std::array<const char*, kRows> row_names = {
        "mean_nn_distance", "mean_path_length", "eccentricity", "degree_std",
        "mean_neighbor_degree"};

    Eigen::MatrixXd values;  // kRows x T
    std::vector<int> label_years;
    std::vector<int> node_counts;

    int T() const { return static_cast<int>(values.cols()); }
};

TopologyIndexVector compute_indices(const SpanningTree& tree,
                                    const TopologyOptions& options = {});

// Trees must be ordered with consecutive window_index starting at 0 and
// T >= 2; labels are copied from the trees.
IndexPanel build_index_panel(const std::vector<SpanningTree>& trees,
                             const TopologyOptions& options = {});

// CSV export/import:
// label_year,node_count,mean_nn_distance,...,mean_neighbor_degree
void write_index_csv(const IndexPanel& panel, std::ostream& out);
IndexPanel read_index_csv(std::istream& in);
IndexPanel read_index_csv_file(const std::string& path);

}  // namespace graphseg
