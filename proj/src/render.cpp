#include "graphseg/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "graphseg/io_util.hpp"
#include "graphseg/sha256.hpp"

namespace graphseg {

namespace {

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* cluster_color(const ClusterLabels& labels, int node) {
    return kPalette[labels.labels[node] % kPalette.size()];
}

void check_consistent(const SpanningTree& tree, const ClusterLabels& labels) {
    if (tree.countries != labels.countries)
        throw ConsistencyError("tree and cluster country sets differ");
}

std::string svg_open(int width, int height) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
       << height << "\">\n";
    return os.str();
}

void emit_node(std::ostream& os, double x, double y, const std::string& code,
               const char* color) {
    os << "  <circle class=\"node\" cx=\"" << fmt_fixed(x, 2) << "\" cy=\""
       << fmt_fixed(y, 2) << "\" r=\"7\" fill=\"" << color
       << "\" stroke=\"#333\" stroke-width=\"0.8\"/>\n";
    os << "  <text class=\"label\" x=\"" << fmt_fixed(x, 2) << "\" y=\""
       << fmt_fixed(y - 10.0, 2)
       << "\" font-size=\"9\" text-anchor=\"middle\">" << code << "</text>\n";
}

void emit_edge(std::ostream& os, double x1, double y1, double x2, double y2,
               double width) {
    os << "  <line class=\"edge\" x1=\"" << fmt_fixed(x1, 2) << "\" y1=\""
       << fmt_fixed(y1, 2) << "\" x2=\"" << fmt_fixed(x2, 2) << "\" y2=\""
       << fmt_fixed(y2, 2) << "\" stroke=\"#666\" stroke-width=\""
       << fmt_fixed(width, 3) << "\"/>\n";
}

}  // namespace

std::string svg_mds_view(const SpanningTree& tree, const Embedding2D& emb,
                         const ClusterLabels& labels,
                         const RenderOptions& options) {
    check_consistent(tree, labels);
    if (tree.countries != emb.countries)
        throw ConsistencyError("tree and embedding country sets differ");

    const int n = tree.size();
    const double margin = 50.0;
    const double side = options.canvas;

    double xmin = emb.coordinates.col(0).minCoeff();
    double xmax = emb.coordinates.col(0).maxCoeff();
    double ymin = emb.coordinates.col(1).minCoeff();
    double ymax = emb.coordinates.col(1).maxCoeff();
    const double extent =
        std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double scale = (side - 2 * margin) / extent;
    const double xmid = 0.5 * (xmin + xmax), ymid = 0.5 * (ymin + ymax);
    auto px = [&](int i) {
        return side / 2 + (emb.coordinates(i, 0) - xmid) * scale;
    };
    auto py = [&](int i) {
        return side / 2 - (emb.coordinates(i, 1) - ymid) * scale;
    };

    std::ostringstream os;
    os << svg_open(options.canvas, options.canvas);
    for (const TreeEdge& e : tree.edges)
        emit_edge(os, px(e.i), py(e.i), px(e.j), py(e.j),
                  options.edge_width_scale * e.abs_rho);
    for (int i = 0; i < n; ++i)
        emit_node(os, px(i), py(i), tree.countries[i],
                  cluster_color(labels, i));
    os << "</svg>\n";
    return os.str();
}

std::string svg_tree_view(const SpanningTree& tree,
                          const ClusterLabels& labels,
                          const RenderOptions& options) {
    check_consistent(tree, labels);
    const int n = tree.size();

    std::vector<std::vector<int>> adj(n);
    Eigen::MatrixXd rho_of = Eigen::MatrixXd::Zero(n, n);
    for (const TreeEdge& e : tree.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
        rho_of(e.i, e.j) = rho_of(e.j, e.i) = e.abs_rho;
    }

    // Root at the hub: maximum degree, ties to the smallest code.
    int root = 0;
    for (int i = 1; i < n; ++i) {
        if (adj[i].size() > adj[root].size() ||
            (adj[i].size() == adj[root].size() &&
             tree.countries[i] < tree.countries[root]))
            root = i;
    }

    std::vector<double> x(n, 0.0);
    std::vector<int> depth(n, 0);
    int next_slot = 0, max_depth = 0;
    std::function<void(int, int, int)> place = [&](int u, int parent, int d) {
        depth[u] = d;
        max_depth = std::max(max_depth, d);
        std::vector<int> kids;
        for (int v : adj[u])
            if (v != parent) kids.push_back(v);
        std::sort(kids.begin(), kids.end(), [&](int a, int b) {
            return tree.countries[a] < tree.countries[b];
        });
        if (kids.empty()) {
            x[u] = next_slot++;
            return;
        }
        for (int v : kids) place(v, u, d + 1);
        double sum = 0.0;
        for (int v : kids) sum += x[v];
        x[u] = sum / kids.size();
    };
    place(root, -1, 0);

    const double margin = 45.0, dx = 64.0, dy = 70.0;
    const int width =
        static_cast<int>(2 * margin + dx * std::max(next_slot - 1, 1));
    const int height = static_cast<int>(2 * margin + dy * max_depth);
    auto px = [&](int i) { return margin + x[i] * dx; };
    auto py = [&](int i) { return margin + depth[i] * dy; };

    std::ostringstream os;
    os << svg_open(width, height);
    for (const TreeEdge& e : tree.edges)
        emit_edge(os, px(e.i), py(e.i), px(e.j), py(e.j),
                  options.edge_width_scale * e.abs_rho);
    for (int i = 0; i < n; ++i)
        emit_node(os, px(i), py(i), tree.countries[i],
                  cluster_color(labels, i));
    os << "</svg>\n";
    return os.str();
}

std::string dot_view(const SpanningTree& tree, const ClusterLabels& labels,
                     const RenderOptions& options) {
    check_consistent(tree, labels);
    std::ostringstream os;
    os << "graph window_" << tree.window_index << " {\n";
    os << "  node [style=filled];\n";
    for (int i = 0; i < tree.size(); ++i)
        os << "  \"" << tree.countries[i] << "\" [label=\""
           << tree.countries[i] << "\", fillcolor=\""
           << cluster_color(labels, i) << "\"];\n";
    for (const TreeEdge& e : tree.edges)
        os << "  \"" << tree.countries[e.i] << "\" -- \""
           << tree.countries[e.j] << "\" [penwidth=\""
           << fmt_fixed(options.edge_width_scale * e.abs_rho, 3) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string svg_index_plot(const IndexPanel& panel,
                           const std::vector<Segmentation>& segmentations,
                           const RenderOptions& options) {
    (void)options;
    const int T = panel.T();
    const Standardized std_panel = standardize(panel);

    const double left = 55, right = 945, strip_h = 150, gap = 42, top = 30;
    const int n_strips = std::max<int>(1, segmentations.size());
    const int width = 960;
    const int height = static_cast<int>(top + n_strips * (strip_h + gap));
    auto xpos = [&](double t) {
        return left + t * (right - left) / std::max(1, T - 1);
    };

    std::ostringstream os;
    os << svg_open(width, height);
    for (int s = 0; s < n_strips; ++s) {
        const double y0 = top + s * (strip_h + gap);
        double lo = std_panel.X.minCoeff(), hi = std_panel.X.maxCoeff();
        const double pad = 0.05 * (hi - lo + 1e-12);
        lo -= pad;
        hi += pad;
        auto ypos = [&](double v) {
            return y0 + strip_h - (v - lo) / (hi - lo) * strip_h;
        };

        if (s < static_cast<int>(segmentations.size())) {
            const Segmentation& seg = segmentations[s];
            os << "  <text class=\"title\" x=\"" << fmt_fixed(left, 1)
               << "\" y=\"" << fmt_fixed(y0 - 8, 1) << "\" font-size=\"12\">"
               << "lambda=" << fmt_double(seg.lambda) << ", "
               << seg.era_count() << " eras</text>\n";
        }
        for (int k = 0; k < IndexPanel::kRows; ++k) {
            os << "  <polyline class=\"series\" fill=\"none\" stroke=\""
               << kPalette[k] << "\" stroke-width=\"1\" stroke-opacity=\"0.55\""
               << " points=\"";
            for (int t = 0; t < T; ++t) {
                if (t) os << ' ';
                os << fmt_fixed(xpos(t), 2) << ','
                   << fmt_fixed(ypos(std_panel.X(k, t)), 2);
            }
            os << "\"/>\n";
        }
        if (s >= static_cast<int>(segmentations.size())) continue;
        const Segmentation& seg = segmentations[s];
        for (const Era& era : seg.eras) {
            for (int k = 0; k < IndexPanel::kRows; ++k) {
                os << "  <line class=\"level\" x1=\""
                   << fmt_fixed(xpos(era.start_window), 2) << "\" y1=\""
                   << fmt_fixed(ypos(era.level_std(k)), 2) << "\" x2=\""
                   << fmt_fixed(xpos(era.end_window), 2) << "\" y2=\""
                   << fmt_fixed(ypos(era.level_std(k)), 2) << "\" stroke=\""
                   << kPalette[k] << "\" stroke-width=\"2.5\"/>\n";
            }
        }
        for (int cp : seg.change_points) {
            const double bx = 0.5 * (xpos(cp) + xpos(cp + 1));
            os << "  <line class=\"break\" x1=\"" << fmt_fixed(bx, 2)
               << "\" y1=\"" << fmt_fixed(y0, 2) << "\" x2=\""
               << fmt_fixed(bx, 2) << "\" y2=\"" << fmt_fixed(y0 + strip_h, 2)
               << "\" stroke=\"#333\" stroke-width=\"1\""
               << " stroke-dasharray=\"4 3\"/>\n";
        }
        const int tick_step = std::max(1, T / 8);
        for (int t = 0; t < T; t += tick_step) {
            os << "  <text class=\"tick\" x=\"" << fmt_fixed(xpos(t), 2)
               << "\" y=\"" << fmt_fixed(y0 + strip_h + 14, 2)
               << "\" font-size=\"10\" text-anchor=\"middle\">"
               << panel.label_years[t] << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

ManifestEntry write_artifact(const std::filesystem::path& dir,
                             const std::string& name,
                             const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return ManifestEntry{name, sha256_hex(content)};
}

std::vector<ManifestEntry> render_window_graph(const SpanningTree& tree,
                                               const Embedding2D& emb,
                                               const ClusterLabels& labels,
                                               const std::filesystem::path& dir,
                                               const RenderOptions& options) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "window_%04d", tree.window_index);
    std::vector<ManifestEntry> out;
    out.push_back(write_artifact(dir, std::string(stem) + "_mds.svg",
                                 svg_mds_view(tree, emb, labels, options)));
    out.push_back(write_artifact(dir, std::string(stem) + "_tree.svg",
                                 svg_tree_view(tree, labels, options)));
    out.push_back(write_artifact(dir, std::string(stem) + ".dot",
                                 dot_view(tree, labels, options)));
    return out;
}

std::string manifest_to_json(const Manifest& manifest) {
    nlohmann::json j = nlohmann::json::array();
    for (const ManifestEntry& e : manifest.entries)
        j.push_back({{"path", e.path}, {"sha256", e.sha256}});
    return j.dump(2) + "\n";
}

Manifest write_report(const IndexPanel& panel,
                      const std::vector<Segmentation>& segmentations,
                      const std::filesystem::path& dir,
                      const RenderOptions& options) {
    Manifest manifest;
    {
        std::ostringstream os;
        write_index_csv(panel, os);
        manifest.entries.push_back(write_artifact(dir, "indices.csv", os.str()));
    }
    for (std::size_t s = 0; s < segmentations.size(); ++s) {
        char name[32];
        std::snprintf(name, sizeof(name), "seg_%03d.json",
                      static_cast<int>(s));
        manifest.entries.push_back(write_artifact(
            dir, name, segmentation_to_json(segmentations[s])));
    }
    manifest.entries.push_back(write_artifact(
        dir, "indices_plot.svg", svg_index_plot(panel, segmentations, options)));

    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                  return a.path < b.path;
              });
    write_artifact(dir, "manifest.json", manifest_to_json(manifest));
    return manifest;
}

}  // namespace graphseg
