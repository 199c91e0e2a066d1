#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "graphseg/render.hpp"
#include "graphseg/segment.hpp"
#include "graphseg/synth.hpp"

namespace graphseg {

struct PipelineConfig {
    std::string input_path;
    std::string output_dir;
    WindowSpec window;
    CoverageRule coverage;
    SegmenterConfig segmenter;       // lambda is taken from the lists below
    std::vector<double> lambdas;     // explicit penalty weights
    std::vector<int> target_eras;    // era counts resolved by lambda search
    int cluster_count = 5;           // coloring only; clamped to window size
    bool render_windows = true;
    bool dump_windows = false;       // per-window distance/edge CSVs

    void validate() const;
};

struct WindowArtifacts {
    std::vector<DistanceMatrix> distances;
    std::vector<SpanningTree> trees;
};

// Steps 1-2: windowed correlation distances and their MSTs. Aborts with
// the window index attached when a window is too sparse.
WindowArtifacts compute_window_graphs(const PricePanel& panel,
                                      const WindowSpec& window,
                                      const CoverageRule& coverage,
                                      std::ostream* log = nullptr);

struct PipelineResult {
    IndexPanel indices;
    std::vector<Segmentation> segmentations;
    Manifest manifest;
};

// Full pipeline: load -> window -> correlate -> MST -> indices ->
// standardize -> denoise per lambda / era target -> report and render.
// Deterministic given the configuration.
PipelineResult run_pipeline(const PipelineConfig& config,
                            std::ostream* log = nullptr);

}  // namespace graphseg
