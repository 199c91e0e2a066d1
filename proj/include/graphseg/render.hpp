#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "graphseg/embed.hpp"
#include "graphseg/segment.hpp"

namespace graphseg {

struct RenderOptions {
    double edge_width_scale = 6.0;  // stroke width = scale * |rho|
    int canvas = 640;
};

struct ManifestEntry {
    std::string path;  // relative to the report directory
    std::string sha256;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

// MST in the MDS plane: nodes at the embedding coordinates colored by
// cluster, edge widths proportional to the unsigned correlation.
std::string svg_mds_view(const SpanningTree& tree, const Embedding2D& emb,
                         const ClusterLabels& labels,
                         const RenderOptions& options = {});

// Hierarchical view rooted at the maximum-degree node (ties broken by
// country code), children ordered lexicographically.
std::string svg_tree_view(const SpanningTree& tree,
                          const ClusterLabels& labels,
                          const RenderOptions& options = {});

// Graphviz DOT with the same node colors and edge widths.
std::string dot_view(const SpanningTree& tree, const ClusterLabels& labels,
                     const RenderOptions& options = {});

// The 5 standardized index series with each segmentation's piecewise
// constant levels and vertical break lines, one strip per segmentation.
std::string svg_index_plot(const IndexPanel& panel,
                           const std::vector<Segmentation>& segmentations,
                           const RenderOptions& options = {});

// Writes window_####_mds.svg, window_####_tree.svg and window_####.dot
// into dir; returns their manifest entries.
std::vector<ManifestEntry> render_window_graph(const SpanningTree& tree,
                                               const Embedding2D& emb,
                                               const ClusterLabels& labels,
                                               const std::filesystem::path& dir,
                                               const RenderOptions& options = {});

// Writes indices.csv, one seg_###.json per segmentation, indices_plot.svg
// and manifest.json into dir; returns the manifest (sorted by path, the
// manifest file itself not listed). Reruns on identical inputs are
// byte-identical.
Manifest write_report(const IndexPanel& panel,
                      const std::vector<Segmentation>& segmentations,
                      const std::filesystem::path& dir,
                      const RenderOptions& options = {});

// Writes content to dir/name and returns its manifest entry.
ManifestEntry write_artifact(const std::filesystem::path& dir,
                             const std::string& name,
                             const std::string& content);

std::string manifest_to_json(const Manifest& manifest);

}  // namespace graphseg
