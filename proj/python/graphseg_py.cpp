#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "graphseg/pipeline.hpp"

namespace py = pybind11;
using namespace graphseg;

namespace {

SegmenterConfig make_config(double lambda, const std::string& penalty,
                            double tol, int max_iter, double eps) {
    SegmenterConfig cfg;
    cfg.lambda = lambda;
    cfg.penalty = penalty_from_string(penalty);
    cfg.convergence_tol = tol;
    cfg.max_iterations = max_iter;
    cfg.changepoint_eps = eps;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(graphseg, m) {
    m.doc() = "Era segmentation of sliding-window market-network topology";

    py::register_exception<Error>(m, "Error");

    py::class_<MonthStamp>(m, "MonthStamp")
        .def(py::init([](const std::string& s) { return MonthStamp::parse(s); }))
        .def_readonly("year", &MonthStamp::year)
        .def_readonly("month", &MonthStamp::month)
        .def("__str__", &MonthStamp::str)
        .def("__repr__",
             [](const MonthStamp& s) { return "MonthStamp(" + s.str() + ")"; });

    py::class_<PricePanel>(m, "PricePanel")
        .def_readonly("countries", &PricePanel::countries)
        .def_readonly("values", &PricePanel::values)
        .def_property_readonly("dates",
                               [](const PricePanel& p) {
                                   std::vector<std::string> out;
                                   for (const auto& d : p.dates)
                                       out.push_back(d.str());
                                   return out;
                               })
        .def_property_readonly("n_months", &PricePanel::n_months)
        .def_property_readonly("n_countries", &PricePanel::n_countries)
        .def("to_csv", &panel_to_csv);

    m.def("load_panel", &load_panel_file, py::arg("path"),
          "Load a wide CSV price panel from a file");
    m.def(
        "load_panel_csv",
        [](const std::string& text) {
            std::istringstream in(text);
            return load_panel(in);
        },
        py::arg("text"), "Load a wide CSV price panel from a string");

    py::class_<WindowSpec>(m, "WindowSpec")
        .def(py::init([](int length_months, int step_months) {
                 WindowSpec w{length_months, step_months};
                 w.validate();
                 return w;
             }),
             py::arg("length_months") = 72, py::arg("step_months") = 12)
        .def_readonly("length_months", &WindowSpec::length_months)
        .def_readonly("step_months", &WindowSpec::step_months);

    py::class_<WindowView>(m, "WindowView", py::dynamic_attr())
        .def_readonly("window_index", &WindowView::window_index)
        .def_readonly("start_row", &WindowView::start_row)
        .def_readonly("length", &WindowView::length)
        .def_readonly("label_year", &WindowView::label_year)
        .def_property_readonly(
            "start", [](const WindowView& w) { return w.start.str(); })
        .def_property_readonly(
            "end", [](const WindowView& w) { return w.end.str(); })
        .def("values", [](const WindowView& w) {
            return Eigen::MatrixXd(w.values());
        });

    m.def(
        "slice_windows",
        [](py::object panel_obj, const WindowSpec& spec) {
            const auto& panel = panel_obj.cast<const PricePanel&>();
            py::list out;
            for (const WindowView& w : slice_windows(panel, spec)) {
                py::object view = py::cast(w);
                view.attr("_panel") = panel_obj;  // keeps the panel alive
                out.append(std::move(view));
            }
            return out;
        },
        py::arg("panel"), py::arg("spec"),
        "Sliding windows over the panel, labelled by their final year");

    py::class_<CorrelationMatrix>(m, "CorrelationMatrix")
        .def_readonly("countries", &CorrelationMatrix::countries)
        .def_readonly("rho", &CorrelationMatrix::rho)
        .def_readonly("window_index", &CorrelationMatrix::window_index)
        .def_readonly("label_year", &CorrelationMatrix::label_year);

    py::class_<DistanceMatrix>(m, "DistanceMatrix")
        .def_readonly("countries", &DistanceMatrix::countries)
        .def_readonly("d", &DistanceMatrix::d)
        .def_readonly("window_index", &DistanceMatrix::window_index)
        .def_readonly("label_year", &DistanceMatrix::label_year);

    py::class_<TreeEdge>(m, "TreeEdge")
        .def_readonly("i", &TreeEdge::i)
        .def_readonly("j", &TreeEdge::j)
        .def_readonly("weight", &TreeEdge::weight)
        .def_readonly("abs_rho", &TreeEdge::abs_rho);

    py::class_<SpanningTree>(m, "SpanningTree")
        .def_readonly("countries", &SpanningTree::countries)
        .def_readonly("edges", &SpanningTree::edges)
        .def_readonly("window_index", &SpanningTree::window_index)
        .def_readonly("label_year", &SpanningTree::label_year)
        .def("total_weight", &SpanningTree::total_weight);

    m.def(
        "window_correlations",
        [](const WindowView& view, double min_coverage,
           double min_pair_overlap) {
            return window_correlations(view,
                                       {min_coverage, min_pair_overlap});
        },
        py::arg("window"), py::arg("min_coverage") = 0.5,
        py::arg("min_pair_overlap") = 0.5);
    m.def("to_distance", &to_distance, py::arg("corr"));
    m.def("minimum_spanning_tree", &minimum_spanning_tree, py::arg("dist"));

    py::class_<TopologyIndexVector>(m, "TopologyIndexVector")
        .def_readonly("mean_nn_distance", &TopologyIndexVector::mean_nn_distance)
        .def_readonly("mean_path_length", &TopologyIndexVector::mean_path_length)
        .def_readonly("eccentricity", &TopologyIndexVector::eccentricity)
        .def_readonly("degree_std", &TopologyIndexVector::degree_std)
        .def_readonly("mean_neighbor_degree",
                      &TopologyIndexVector::mean_neighbor_degree)
        .def_readonly("window_index", &TopologyIndexVector::window_index)
        .def_readonly("node_count", &TopologyIndexVector::node_count);

    py::class_<IndexPanel>(m, "IndexPanel")
        .def_readonly("values", &IndexPanel::values)
        .def_readonly("label_years", &IndexPanel::label_years)
        .def_readonly("node_counts", &IndexPanel::node_counts)
        .def_property_readonly("row_names", [](const IndexPanel&) {
            return std::vector<std::string>(IndexPanel::row_names.begin(),
                                            IndexPanel::row_names.end());
        })
        .def("to_csv", [](const IndexPanel& p) {
            std::ostringstream os;
            write_index_csv(p, os);
            return os.str();
        });

    m.def("compute_indices",
          [](const SpanningTree& tree) { return compute_indices(tree); },
          py::arg("tree"));
    m.def("build_index_panel",
          [](const std::vector<SpanningTree>& trees) {
              return build_index_panel(trees);
          },
          py::arg("trees"));
    m.def("read_index_csv",
          [](const std::string& text) {
              std::istringstream in(text);
              return read_index_csv(in);
          },
          py::arg("text"));

    py::class_<Standardized>(m, "Standardized")
        .def_readonly("X", &Standardized::X)
        .def_readonly("mean", &Standardized::mean)
        .def_readonly("scale", &Standardized::scale);

    m.def("standardize", &standardize, py::arg("panel"));

    m.def(
        "tv_objective",
        [](const Eigen::MatrixXd& X, const Eigen::MatrixXd& U, double lambda,
           const std::string& penalty) {
            return objective(X, U, lambda, penalty_from_string(penalty));
        },
        py::arg("X"), py::arg("U"), py::arg("lambda_"),
        py::arg("penalty") = "group-l2");

    py::class_<DenoisedPanel>(m, "DenoisedPanel")
        .def_readonly("Y", &DenoisedPanel::Y)
        .def_readonly("objective_value", &DenoisedPanel::objective_value)
        .def_readonly("iterations_used", &DenoisedPanel::iterations_used)
        .def_readonly("converged", &DenoisedPanel::converged);

    m.def(
        "group_tv_denoise",
        [](const Eigen::MatrixXd& X, double lambda, const std::string& penalty,
           double tol, int max_iter) {
            return group_tv_denoise(
                X, make_config(lambda, penalty, tol, max_iter, 1e-3));
        },
        py::arg("X"), py::arg("lambda_"), py::arg("penalty") = "group-l2",
        py::arg("tol") = 1e-9, py::arg("max_iter") = 100000);

    py::class_<Era>(m, "Era")
        .def_readonly("start_window", &Era::start_window)
        .def_readonly("end_window", &Era::end_window)
        .def_readonly("start_year", &Era::start_year)
        .def_readonly("end_year", &Era::end_year)
        .def_readonly("level_std", &Era::level_std)
        .def_readonly("level_orig", &Era::level_orig);

    py::class_<Segmentation>(m, "Segmentation")
        .def_readonly("lambda_", &Segmentation::lambda)
        .def_readonly("converged", &Segmentation::converged)
        .def_readonly("objective_value", &Segmentation::objective_value)
        .def_readonly("iterations", &Segmentation::iterations)
        .def_readonly("change_points", &Segmentation::change_points)
        .def_readonly("change_years", &Segmentation::change_years)
        .def_readonly("eras", &Segmentation::eras)
        .def_property_readonly("era_count", &Segmentation::era_count)
        .def_property_readonly("penalty", [](const Segmentation& s) {
            return to_string(s.penalty);
        });

    m.def(
        "extract_change_points",
        [](const DenoisedPanel& den, const Standardized& std_panel,
           const IndexPanel& panel, double lambda, const std::string& penalty,
           double eps) {
            return extract_change_points(
                den, std_panel, panel,
                make_config(lambda, penalty, 1e-9, 100000, eps));
        },
        py::arg("denoised"), py::arg("standardized"), py::arg("panel"),
        py::arg("lambda_") = 0.0, py::arg("penalty") = "group-l2",
        py::arg("changepoint_eps") = 1e-3);

    m.def("lambda_upper_bound",
          [](const Eigen::MatrixXd& X, const std::string& penalty) {
              return lambda_upper_bound(X, penalty_from_string(penalty));
          },
          py::arg("X"), py::arg("penalty") = "group-l2");

    // One-call segmentation of an index panel, by lambda or by era target.
    m.def(
        "segment_panel",
        [](const IndexPanel& panel, py::object lambda_, py::object target_eras,
           const std::string& penalty, double tol, int max_iter, double eps) {
            const Standardized std_panel = standardize(panel);
            SegmenterConfig cfg = make_config(0.0, penalty, tol, max_iter, eps);
            if (!lambda_.is_none() && !target_eras.is_none())
                throw BadInput("pass either lambda_ or target_eras, not both");
            if (!lambda_.is_none()) {
                cfg.lambda = lambda_.cast<double>();
                DenoisedPanel den = group_tv_denoise(std_panel.X, cfg);
                return extract_change_points(den, std_panel, panel, cfg);
            }
            if (target_eras.is_none())
                throw BadInput("pass lambda_ or target_eras");
            LambdaSearchResult found = lambda_for_era_count(
                std_panel, panel, target_eras.cast<int>(), cfg);
            return found.segmentation;
        },
        py::arg("panel"), py::arg("lambda_") = py::none(),
        py::arg("target_eras") = py::none(), py::arg("penalty") = "group-l2",
        py::arg("tol") = 1e-9, py::arg("max_iter") = 100000,
        py::arg("changepoint_eps") = 1e-3);

    m.def("segmentation_to_json", &segmentation_to_json, py::arg("seg"));

    py::class_<Embedding2D>(m, "Embedding2D")
        .def_readonly("countries", &Embedding2D::countries)
        .def_readonly("coordinates", &Embedding2D::coordinates)
        .def_readonly("eigenvalues", &Embedding2D::eigenvalues)
        .def_readonly("clamped_negative_count",
                      &Embedding2D::clamped_negative_count);

    py::class_<ClusterLabels>(m, "ClusterLabels")
        .def_readonly("countries", &ClusterLabels::countries)
        .def_readonly("labels", &ClusterLabels::labels)
        .def_readonly("k", &ClusterLabels::k);

    m.def("mds_embed", &mds_embed, py::arg("dist"));
    m.def(
        "complete_linkage_clusters",
        [](const DistanceMatrix& dist, int k) {
            return complete_linkage_clusters(dist, k);
        },
        py::arg("dist"), py::arg("k"));

    m.def("svg_mds_view",
          [](const SpanningTree& t, const Embedding2D& e,
             const ClusterLabels& l) { return svg_mds_view(t, e, l); });
    m.def("svg_tree_view", [](const SpanningTree& t, const ClusterLabels& l) {
        return svg_tree_view(t, l);
    });
    m.def("dot_view", [](const SpanningTree& t, const ClusterLabels& l) {
        return dot_view(t, l);
    });
    m.def("svg_index_plot",
          [](const IndexPanel& p, const std::vector<Segmentation>& segs) {
              return svg_index_plot(p, segs);
          });

    m.def("synthetic_panel",
          [](std::uint64_t seed) { return synthetic_panel(seed); },
          py::arg("seed") = 0);
    m.def("synthetic_change_windows",
          [](const WindowSpec& w) { return synthetic_change_windows(w); },
          py::arg("spec") = WindowSpec{});

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("input_path", &PipelineConfig::input_path)
        .def_readwrite("output_dir", &PipelineConfig::output_dir)
        .def_readwrite("window", &PipelineConfig::window)
        .def_readwrite("lambdas", &PipelineConfig::lambdas)
        .def_readwrite("target_eras", &PipelineConfig::target_eras)
        .def_readwrite("cluster_count", &PipelineConfig::cluster_count)
        .def_readwrite("render_windows", &PipelineConfig::render_windows)
        .def_readwrite("dump_windows", &PipelineConfig::dump_windows)
        .def_property(
            "min_coverage",
            [](const PipelineConfig& c) { return c.coverage.min_coverage; },
            [](PipelineConfig& c, double v) { c.coverage.min_coverage = v; })
        .def_property(
            "min_pair_overlap",
            [](const PipelineConfig& c) { return c.coverage.min_pair_overlap; },
            [](PipelineConfig& c, double v) {
                c.coverage.min_pair_overlap = v;
            })
        .def_property(
            "penalty",
            [](const PipelineConfig& c) { return to_string(c.segmenter.penalty); },
            [](PipelineConfig& c, const std::string& v) {
                c.segmenter.penalty = penalty_from_string(v);
            })
        .def_property(
            "tol",
            [](const PipelineConfig& c) { return c.segmenter.convergence_tol; },
            [](PipelineConfig& c, double v) { c.segmenter.convergence_tol = v; })
        .def_property(
            "max_iter",
            [](const PipelineConfig& c) { return c.segmenter.max_iterations; },
            [](PipelineConfig& c, int v) { c.segmenter.max_iterations = v; })
        .def_property(
            "changepoint_eps",
            [](const PipelineConfig& c) { return c.segmenter.changepoint_eps; },
            [](PipelineConfig& c, double v) {
                c.segmenter.changepoint_eps = v;
            });

    py::class_<ManifestEntry>(m, "ManifestEntry")
        .def_readonly("path", &ManifestEntry::path)
        .def_readonly("sha256", &ManifestEntry::sha256);

    py::class_<Manifest>(m, "Manifest")
        .def_readonly("entries", &Manifest::entries);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("indices", &PipelineResult::indices)
        .def_readonly("segmentations", &PipelineResult::segmentations)
        .def_readonly("manifest", &PipelineResult::manifest);

    m.def(
        "run_pipeline",
        [](const PipelineConfig& config) { return run_pipeline(config); },
        py::arg("config"),
        "Run the full pipeline and write the report to config.output_dir");
}
