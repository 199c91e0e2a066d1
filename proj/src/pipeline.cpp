#include "graphseg/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace graphseg {

void PipelineConfig::validate() const {
    if (input_path.empty()) throw BadInput("config needs an input path");
    if (output_dir.empty()) throw BadInput("config needs an output directory");
    if (lambdas.empty() && target_eras.empty())
        throw BadInput("config needs at least one lambda or era target");
    for (double lam : lambdas)
        if (lam < 0.0) throw BadInput("lambda must be >= 0");
    if (cluster_count < 1) throw BadInput("cluster count must be >= 1");
    window.validate();
}

WindowArtifacts compute_window_graphs(const PricePanel& panel,
                                      const WindowSpec& window,
                                      const CoverageRule& coverage,
                                      std::ostream* log) {
    WindowArtifacts out;
    std::vector<std::string> dropped;
    for (const WindowView& view : slice_windows(panel, window)) {
        CorrelationMatrix corr = window_correlations(view, coverage, &dropped);
        DistanceMatrix dist = to_distance(corr);
        out.trees.push_back(minimum_spanning_tree(dist));
        if (log) {
            *log << "window " << view.window_index << " (" << view.start.str()
                 << ".." << view.end.str() << "): " << corr.size()
                 << " countries";
            if (!dropped.empty()) {
                *log << ", dropped";
                for (const auto& c : dropped) *log << ' ' << c;
            }
            *log << '\n';
        }
        out.distances.push_back(std::move(dist));
    }
    return out;
}

PipelineResult run_pipeline(const PipelineConfig& config, std::ostream* log) {
    config.validate();
    const std::filesystem::path outdir(config.output_dir);

    const PricePanel panel = load_panel_file(config.input_path);
    if (log)
        *log << "panel: " << panel.n_months() << " months, "
             << panel.n_countries() << " countries\n";

    WindowArtifacts graphs =
        compute_window_graphs(panel, config.window, config.coverage, log);

    PipelineResult result;
    result.indices = build_index_panel(graphs.trees);
    const Standardized std_panel = standardize(result.indices);

    for (double lam : config.lambdas) {
        SegmenterConfig cfg = config.segmenter;
        cfg.lambda = lam;
        DenoisedPanel den = group_tv_denoise(std_panel.X, cfg);
        result.segmentations.push_back(
            extract_change_points(den, std_panel, result.indices, cfg));
        if (log)
            *log << "lambda " << lam << ": "
                 << result.segmentations.back().era_count() << " eras\n";
    }
    for (int target : config.target_eras) {
        LambdaSearchResult found = lambda_for_era_count(
            std_panel, result.indices, target, config.segmenter);
        if (log) {
            *log << "target " << target << " eras: lambda " << found.lambda
                 << " gives " << found.segmentation.era_count() << " eras"
                 << (found.exact ? "" : " (nearest, not exact)") << '\n';
        }
        result.segmentations.push_back(std::move(found.segmentation));
    }

    Manifest manifest =
        write_report(result.indices, result.segmentations, outdir);

    RenderOptions render_options;
    for (std::size_t w = 0; w < graphs.trees.size(); ++w) {
        const DistanceMatrix& dist = graphs.distances[w];
        if (config.render_windows) {
            const Embedding2D emb = mds_embed(dist);
            const ClusterLabels labels = complete_linkage_clusters(
                dist, std::min(config.cluster_count, dist.size()));
            auto files = render_window_graph(graphs.trees[w], emb, labels,
                                             outdir, render_options);
            manifest.entries.insert(manifest.entries.end(), files.begin(),
                                    files.end());
        }
        if (config.dump_windows) {
            char stem[32];
            std::snprintf(stem, sizeof(stem), "window_%04d",
                          graphs.trees[w].window_index);
            std::ostringstream dcsv, ecsv;
            write_distance_csv(dist, dcsv);
            write_edges_csv(graphs.trees[w], ecsv);
            manifest.entries.push_back(write_artifact(
                outdir, std::string(stem) + "_dist.csv", dcsv.str()));
            manifest.entries.push_back(write_artifact(
                outdir, std::string(stem) + "_edges.csv", ecsv.str()));
        }
    }

    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                  return a.path < b.path;
              });
    write_artifact(outdir, "manifest.json", manifest_to_json(manifest));
    result.manifest = std::move(manifest);
    return result;
}

}  // namespace graphseg
