// graphseg: era segmentation of financial-integration networks.
//
// Pipeline: monthly price panel -> sliding-window correlation distances ->
// minimum spanning trees -> five topology index series -> joint
// total-variation denoising -> change points and era report.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "graphseg/io_util.hpp"
#include "graphseg/pipeline.hpp"

namespace {

using namespace graphseg;

struct CliOptions {
    PipelineConfig pipeline;
    std::string penalty_name = "group-l2";
    bool no_render = false;
    std::uint64_t seed = 0;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Flat key=value config file, keys named exactly like the long flags.
// Values already given on the command line win; list-valued keys hold
// space-separated entries; quoted values are taken verbatim.
std::vector<std::string> expand_config(std::vector<std::string> tokens) {
    std::string config_path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "--config" && i + 1 < tokens.size()) {
            config_path = tokens[i + 1];
            tokens.erase(tokens.begin() + i, tokens.begin() + i + 2);
            break;
        }
        if (tokens[i].rfind("--config=", 0) == 0) {
            config_path = tokens[i].substr(9);
            tokens.erase(tokens.begin() + i);
            break;
        }
    }
    if (config_path.empty()) return tokens;

    std::set<std::string> explicit_flags;
    for (const auto& t : tokens) {
        if (t.rfind("--", 0) != 0) continue;
        const auto eq = t.find('=');
        explicit_flags.insert(eq == std::string::npos ? t : t.substr(0, eq));
    }

    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + config_path + "'");
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw BadInput("config line without '=': " + line);
        const std::string flag = "--" + trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (explicit_flags.count(flag)) continue;  // flags override the file
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            tokens.push_back(flag + "=" + value.substr(1, value.size() - 2));
            continue;
        }
        std::istringstream parts(value);
        std::string part;
        while (parts >> part) tokens.push_back(flag + "=" + part);
    }
    return tokens;
}

void add_window_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--window-months", opt.pipeline.window.length_months,
                    "Sliding window length in months")
        ->capture_default_str();
    cmd->add_option("--step-months", opt.pipeline.window.step_months,
                    "Window stride in months")
        ->capture_default_str();
    cmd->add_option("--min-coverage", opt.pipeline.coverage.min_coverage,
                    "Minimum observed fraction of a window per country")
        ->capture_default_str();
    cmd->add_option("--min-pair-overlap",
                    opt.pipeline.coverage.min_pair_overlap,
                    "Minimum joint observed fraction per country pair")
        ->capture_default_str();
}

void add_segment_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--lambda", opt.pipeline.lambdas,
                    "Penalty weight; repeat for several runs");
    cmd->add_option("--target-eras", opt.pipeline.target_eras,
                    "Era count resolved by lambda search; repeatable");
    cmd->add_option("--penalty", opt.penalty_name,
                    "Penalty across components: group-l2 or literal-l1")
        ->check(CLI::IsMember({"group-l2", "literal-l1"}))
        ->capture_default_str();
    cmd->add_option("--tol", opt.pipeline.segmenter.convergence_tol,
                    "Solver relative convergence tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iter", opt.pipeline.segmenter.max_iterations,
                    "Solver iteration cap")
        ->capture_default_str();
    cmd->add_option("--changepoint-eps", opt.pipeline.segmenter.changepoint_eps,
                    "Jump threshold in standardized units")
        ->capture_default_str();
}

void add_render_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--clusters", opt.pipeline.cluster_count,
                    "Cluster count for node coloring")
        ->capture_default_str();
    cmd->add_flag("--no-render", opt.no_render,
                  "Skip per-window SVG/DOT output");
    cmd->add_flag("--dump-windows", opt.pipeline.dump_windows,
                  "Also write per-window distance and edge CSVs");
}

// Serializes the effective settings of the active subcommand, one
// key=value per line, keys identical to the long flags. Rerunning with
// --config on this file reproduces the run.
void write_effective_config(const std::string& subcommand,
                            const CliOptions& opt) {
    const PipelineConfig& p = opt.pipeline;
    std::ostringstream os;
    if (subcommand != "synth") os << "input=\"" << p.input_path << "\"\n";
    os << "outdir=\"" << p.output_dir << "\"\n";
    const bool windowed = subcommand != "segment";
    if (windowed) {
        os << "window-months=" << p.window.length_months << '\n'
           << "step-months=" << p.window.step_months << '\n';
    }
    if (windowed && subcommand != "synth") {
        os << "min-coverage=" << fmt_double(p.coverage.min_coverage) << '\n'
           << "min-pair-overlap=" << fmt_double(p.coverage.min_pair_overlap)
           << '\n';
    }
    if (subcommand == "run" || subcommand == "segment") {
        if (!p.lambdas.empty()) {
            os << "lambda=";
            for (std::size_t i = 0; i < p.lambdas.size(); ++i)
                os << (i ? " " : "") << fmt_double(p.lambdas[i]);
            os << '\n';
        }
        if (!p.target_eras.empty()) {
            os << "target-eras=";
            for (std::size_t i = 0; i < p.target_eras.size(); ++i)
                os << (i ? " " : "") << p.target_eras[i];
            os << '\n';
        }
        os << "penalty=\"" << opt.penalty_name << "\"\n"
           << "tol=" << fmt_double(p.segmenter.convergence_tol) << '\n'
           << "max-iter=" << p.segmenter.max_iterations << '\n'
           << "changepoint-eps=" << fmt_double(p.segmenter.changepoint_eps)
           << '\n';
    }
    if (subcommand == "run" || subcommand == "render")
        os << "clusters=" << p.cluster_count << '\n';
    if (subcommand == "run")
        os << "no-render=" << (opt.no_render ? "true" : "false") << '\n';
    if (subcommand != "segment" && subcommand != "synth")
        os << "dump-windows=" << (p.dump_windows ? "true" : "false") << '\n';
    if (subcommand == "synth") os << "seed=" << opt.seed << '\n';

    std::filesystem::create_directories(p.output_dir);
    std::ofstream out(std::filesystem::path(p.output_dir) /
                          "effective_config.ini",
                      std::ios::binary);
    out << os.str();
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const CsvError*>(&e) ||
        dynamic_cast<const MalformedDates*>(&e) ||
        dynamic_cast<const BadValue*>(&e) ||
        dynamic_cast<const GapInSeries*>(&e))
        return 3;
    if (dynamic_cast<const PanelTooShort*>(&e) ||
        dynamic_cast<const WindowTooSparse*>(&e) ||
        dynamic_cast<const NonContiguousWindows*>(&e) ||
        dynamic_cast<const TooFewNodes*>(&e))
        return 4;
    if (dynamic_cast<const ConstantIndexRow*>(&e) ||
        dynamic_cast<const ShapeError*>(&e) ||
        dynamic_cast<const BadInput*>(&e) ||
        dynamic_cast<const BadBounds*>(&e) || dynamic_cast<const BadK*>(&e))
        return 5;
    if (dynamic_cast<const ConsistencyError*>(&e) ||
        dynamic_cast<const IoError*>(&e))
        return 6;
    return 1;
}

// `segment` runs step 3 alone on a saved index CSV.
int run_segment_only(const CliOptions& opt) {
    IndexPanel panel = read_index_csv_file(opt.pipeline.input_path);
    const Standardized std_panel = standardize(panel);
    std::vector<Segmentation> segs;
    for (double lam : opt.pipeline.lambdas) {
        SegmenterConfig cfg = opt.pipeline.segmenter;
        cfg.lambda = lam;
        DenoisedPanel den = group_tv_denoise(std_panel.X, cfg);
        segs.push_back(extract_change_points(den, std_panel, panel, cfg));
        std::cerr << "lambda " << lam << ": " << segs.back().era_count()
                  << " eras\n";
    }
    for (int target : opt.pipeline.target_eras) {
        LambdaSearchResult found = lambda_for_era_count(
            std_panel, panel, target, opt.pipeline.segmenter);
        std::cerr << "target " << target << " eras: lambda " << found.lambda
                  << " gives " << found.segmentation.era_count() << " eras"
                  << (found.exact ? "" : " (nearest, not exact)") << '\n';
        segs.push_back(std::move(found.segmentation));
    }
    write_report(panel, segs, opt.pipeline.output_dir);
    return 0;
}

// `indices` stops after step 2; `render` emits the per-window views only.
int run_partial(const CliOptions& opt, bool with_indices, bool with_render) {
    const PricePanel panel = load_panel_file(opt.pipeline.input_path);
    WindowArtifacts graphs = compute_window_graphs(
        panel, opt.pipeline.window, opt.pipeline.coverage, &std::cerr);
    const std::filesystem::path outdir(opt.pipeline.output_dir);

    Manifest manifest;
    if (with_indices) {
        IndexPanel indices = build_index_panel(graphs.trees);
        std::ostringstream os;
        write_index_csv(indices, os);
        manifest.entries.push_back(
            write_artifact(outdir, "indices.csv", os.str()));
    }
    for (std::size_t w = 0; w < graphs.trees.size(); ++w) {
        const DistanceMatrix& dist = graphs.distances[w];
        if (with_render) {
            const Embedding2D emb = mds_embed(dist);
            const ClusterLabels labels = complete_linkage_clusters(
                dist, std::min(opt.pipeline.cluster_count, dist.size()));
            auto files =
                render_window_graph(graphs.trees[w], emb, labels, outdir);
            manifest.entries.insert(manifest.entries.end(), files.begin(),
                                    files.end());
        }
        if (opt.pipeline.dump_windows) {
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
    return 0;
}

int run_synth(const CliOptions& opt) {
    const PricePanel panel = synthetic_panel(opt.seed);
    const std::filesystem::path outdir(opt.pipeline.output_dir);
    write_artifact(outdir, "synthetic_panel.csv", panel_to_csv(panel));
    const auto truth = synthetic_change_windows(opt.pipeline.window);
    std::cerr << "wrote " << (outdir / "synthetic_panel.csv").string()
              << " (seed " << opt.seed << "); planted breaks at windows";
    for (int cp : truth) std::cerr << ' ' << cp;
    std::cerr << " for " << opt.pipeline.window.length_months << '/'
              << opt.pipeline.window.step_months << " windows\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Era segmentation of sliding-window market-network topology"};
    app.require_subcommand(1);

    CliOptions opt;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* in = cmd->add_option("--input", opt.pipeline.input_path,
                                   "Input file");
        if (needs_input) in->required();
        cmd->add_option("--outdir", opt.pipeline.output_dir,
                        "Output directory")
            ->required();
    };

    CLI::App* run = app.add_subcommand("run", "Full three-step pipeline");
    add_common(run, true);
    add_window_flags(run, opt);
    add_segment_flags(run, opt);
    add_render_flags(run, opt);

    CLI::App* indices =
        app.add_subcommand("indices", "Stop after the topology index panel");
    add_common(indices, true);
    add_window_flags(indices, opt);
    indices->add_flag("--dump-windows", opt.pipeline.dump_windows,
                      "Also write per-window distance and edge CSVs");

    CLI::App* segment =
        app.add_subcommand("segment", "Segment a saved index CSV");
    add_common(segment, true);
    add_segment_flags(segment, opt);

    CLI::App* render =
        app.add_subcommand("render", "Per-window network views only");
    add_common(render, true);
    add_window_flags(render, opt);
    render->add_option("--clusters", opt.pipeline.cluster_count,
                       "Cluster count for node coloring")
        ->capture_default_str();
    render->add_flag("--dump-windows", opt.pipeline.dump_windows,
                     "Also write per-window distance and edge CSVs");

    CLI::App* synth =
        app.add_subcommand("synth", "Write the synthetic three-regime panel");
    add_common(synth, false);
    synth->add_option("--seed", opt.seed, "Generator seed")
        ->capture_default_str();
    synth->add_option("--window-months", opt.pipeline.window.length_months,
                      "Window length, for reporting the planted breaks")
        ->capture_default_str();
    synth->add_option("--step-months", opt.pipeline.window.step_months,
                      "Window stride, for reporting the planted breaks")
        ->capture_default_str();

    for (CLI::App* cmd : {run, indices, segment, render, synth})
        cmd->add_option("--config")
            ->description(
                "Flat key=value file mirroring the flags; flags override "
                "file values")
            ->type_name("FILE");

    std::vector<std::string> tokens;
    try {
        tokens = expand_config(
            std::vector<std::string>(argv + 1, argv + argc));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    // CLI11 consumes reversed token lists
    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        opt.pipeline.segmenter.penalty = penalty_from_string(opt.penalty_name);
        opt.pipeline.render_windows = !opt.no_render;
        CLI::App* active = app.get_subcommands().front();
        write_effective_config(active->get_name(), opt);
        if (active == run) {
            run_pipeline(opt.pipeline, &std::cerr);
            return 0;
        }
        if (active == indices) return run_partial(opt, true, false);
        if (active == segment) return run_segment_only(opt);
        if (active == render) return run_partial(opt, false, true);
        if (active == synth) return run_synth(opt);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}
