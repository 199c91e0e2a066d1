#include "graphseg/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "graphseg/io_util.hpp"

namespace graphseg {

TopologyIndexVector compute_indices(const SpanningTree& tree,
                                    const TopologyOptions& options) {
    const int n = tree.size();
    if (n < 2) throw TooFewNodes("index computation needs at least 2 nodes");
    if (static_cast<int>(tree.edges.size()) != n - 1)
        throw BadInput("tree does not have n-1 edges");

    std::vector<std::vector<std::pair<int, double>>> adj(n);
    std::vector<int> degree(n, 0);
    for (const TreeEdge& e : tree.edges) {
        adj[e.i].emplace_back(e.j, e.weight);
        adj[e.j].emplace_back(e.i, e.weight);
        ++degree[e.i];
        ++degree[e.j];
    }

    double nn_sum = 0.0;
    for (int u = 0; u < n; ++u) {
        double best = adj[u].front().second;
        for (const auto& [v, w] : adj[u]) best = std::min(best, w);
        nn_sum += best;
    }

    // Weighted path lengths from every node, along the unique tree paths.
    double pair_sum = 0.0, diameter = 0.0, node_max_sum = 0.0;
    std::vector<double> dist(n);
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1.0);
        dist[s] = 0.0;
        stack.assign(1, s);
        double node_max = 0.0;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : adj[u]) {
                if (dist[v] < 0.0) {
                    dist[v] = dist[u] + w;
                    node_max = std::max(node_max, dist[v]);
                    stack.push_back(v);
                }
            }
        }
        for (int t = s + 1; t < n; ++t) pair_sum += dist[t];
        diameter = std::max(diameter, node_max);
        node_max_sum += node_max;
    }

    double deg_mean = 0.0;
    for (int u = 0; u < n; ++u) deg_mean += degree[u];
    deg_mean /= n;
    double deg_var = 0.0;
    for (int u = 0; u < n; ++u)
        deg_var += (degree[u] - deg_mean) * (degree[u] - deg_mean);
    deg_var /= n;

    double mnd_sum = 0.0;
    for (int u = 0; u < n; ++u) {
        double s = 0.0;
        for (const auto& [v, w] : adj[u]) s += degree[v];
        mnd_sum += s / degree[u];
    }

    TopologyIndexVector out;
    out.mean_nn_distance = nn_sum / n;
    out.mean_path_length = pair_sum / (n * (n - 1) / 2.0);
    out.eccentricity =
        options.eccentricity == TopologyOptions::EccentricityMode::diameter
            ? diameter
            : node_max_sum / n;
    out.degree_std = std::sqrt(deg_var);
    out.mean_neighbor_degree = mnd_sum / n;
    out.window_index = tree.window_index;
    out.node_count = n;
    return out;
}

IndexPanel build_index_panel(const std::vector<SpanningTree>& trees,
                             const TopologyOptions& options) {
    const int T = static_cast<int>(trees.size());
    if (T < 2)
        throw NonContiguousWindows("index panel needs at least 2 windows, got " +
                                   std::to_string(T));
    for (int t = 0; t < T; ++t)
        if (trees[t].window_index != t)
            throw NonContiguousWindows(
                "window_index " + std::to_string(trees[t].window_index) +
                " at position " + std::to_string(t));

    IndexPanel panel;
    panel.values.resize(IndexPanel::kRows, T);
    panel.label_years.resize(T);
    panel.node_counts.resize(T);
    for (int t = 0; t < T; ++t) {
        TopologyIndexVector v = compute_indices(trees[t], options);
        panel.values(0, t) = v.mean_nn_distance;
        panel.values(1, t) = v.mean_path_length;
        panel.values(2, t) = v.eccentricity;
        panel.values(3, t) = v.degree_std;
        panel.values(4, t) = v.mean_neighbor_degree;
        panel.label_years[t] = trees[t].label_year;
        panel.node_counts[t] = trees[t].size();
    }
    return panel;
}

void write_index_csv(const IndexPanel& panel, std::ostream& out) {
    out << "label_year,node_count";
    for (const char* name : IndexPanel::row_names) out << ',' << name;
    out << '\n';
    for (int t = 0; t < panel.T(); ++t) {
        out << panel.label_years[t] << ',' << panel.node_counts[t];
        for (int k = 0; k < IndexPanel::kRows; ++k)
            out << ',' << fmt_double(panel.values(k, t));
        out << '\n';
    }
}

IndexPanel read_index_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError("empty index CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::ostringstream expect;
        expect << "label_year,node_count";
        for (const char* name : IndexPanel::row_names) expect << ',' << name;
        if (line != expect.str())
            throw CsvError("unexpected index CSV header: " + line);
    }
    std::vector<std::array<double, IndexPanel::kRows>> rows;
    std::vector<int> years, counts;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 2 + IndexPanel::kRows)
            throw CsvError("bad field count on line " + std::to_string(line_no));
        years.push_back(std::stoi(fields[0]));
        counts.push_back(std::stoi(fields[1]));
        std::array<double, IndexPanel::kRows> vals{};
        for (int k = 0; k < IndexPanel::kRows; ++k) {
            auto v = parse_double(fields[2 + k]);
            if (!v)
                throw CsvError("bad value on line " + std::to_string(line_no));
            vals[k] = *v;
        }
        rows.push_back(vals);
    }
    const int T = static_cast<int>(rows.size());
    if (T < 2) throw CsvError("index CSV needs at least 2 windows");
    IndexPanel panel;
    panel.values.resize(IndexPanel::kRows, T);
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < IndexPanel::kRows; ++k)
            panel.values(k, t) = rows[t][k];
    panel.label_years = std::move(years);
    panel.node_counts = std::move(counts);
    return panel;
}

IndexPanel read_index_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_index_csv(in);
}

}  // namespace graphseg
